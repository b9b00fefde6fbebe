"""Evaluation of triangle and point formulas over finite witness universes.

Quantifiers range over a finite universe of points (and the triangles they
span) built from the database by affine-equivariant constructions.  Atoms and
derived predicates are decided exactly by the kernels.

Two refinements keep translated formulas coherent with their sources:

* a quantified variable pinned down by a defining atom (the center of mass of
  a triangle, a midpoint reflection, the points of SameRelArea) is bound to
  the constructed value, even when that value lies outside the universe;
* a quantified variable guarded by a relation atom, an equality, Point or
  CornerP only ranges over the values the guard admits.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, combinations_with_replacement, product
from typing import Callable, Iterable, Iterator, Mapping

from . import geom, st
from .errors import UnboundVariable, UniverseOverflow
from .geom import Point2, Triangle
from .logic import (
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    RelAtom,
    conj,
    disj,
    exists,
    free_vars,
    signature,
)
from .model import (
    Database,
    canonical_rep,
    canonical_triangle,
    consistency_closure,
    map_tuples,
    point_database,
)
from .st import STPoint, STTriangle

MAX_POINTS = 5000
MAX_TRIPLES = 200_000


# -- universes ------------------------------------------------------------------------------

def _grow(points: list) -> set:
    """One construction round over co-temporal points given as 2-D coordinates."""
    pts = sorted(set(points))
    out = set(pts)
    for p, q in combinations(pts, 2):
        out.add(geom.midpoint(p, q))
    for a, b, c in combinations(pts, 3):
        out.add(geom.barycenter(Triangle(a, b, c)))
    segs = list(combinations(pts, 2))
    for i, (a, b) in enumerate(segs):
        for c, d in segs[i + 1:]:
            x = geom.segment_intersection_point(a, b, c, d)
            if x is not None:
                out.add(x)
    return out


class Universe:
    """A finite set of points and the triangles spanned by them.

    In spatio-temporal mode constructions and triangles stay within one time.
    """

    def __init__(self, mode: str, points: Iterable, level: int = 0):
        self.mode = mode
        self.level = level
        self.points = sorted(set(points))
        self.point_set = frozenset(self.points)
        if mode == "st":
            groups: dict[Fraction, list] = {}
            for p in self.points:
                groups.setdefault(p.t, []).append(p)
            self.groups = [groups[t] for t in sorted(groups)]
        else:
            self.groups = [self.points]
        self._tri = STTriangle if mode == "st" else Triangle

    @property
    def triple_count(self) -> int:
        return sum(len(g) ** 3 for g in self.groups)

    @cached_property
    def triangles(self) -> list:
        cls = self._tri
        return [cls(*t) for g in self.groups for t in product(g, repeat=3)]

    @cached_property
    def triangle_set(self) -> frozenset:
        return frozenset(self.triangles)

    @cached_property
    def reps(self) -> list:
        cls = self._tri
        return [cls(*t) for g in self.groups for t in combinations_with_replacement(g, 3)]

    @cached_property
    def point_triangles(self) -> list:
        cls = self._tri
        return [cls(p, p, p) for p in self.points]

    def _drawing_index(self, seq) -> dict:
        index: dict = {}
        for t in seq:
            index.setdefault(drawing_key(t), []).append(t)
        return index

    @cached_property
    def rep_drawings(self) -> dict:
        return self._drawing_index(self.reps)

    @cached_property
    def triangle_drawings(self) -> dict:
        return self._drawing_index(self.triangles)

    def contains_triangle(self, t) -> bool:
        return all(p in self.point_set for p in t) and (self.mode != "st" or t.c1.t == t.c2.t == t.c3.t)

    def map(self, g) -> "Universe":
        if isinstance(g, st.STTransform):
            return Universe(self.mode, (st.apply_st(g, p) for p in self.points), self.level)
        return Universe(self.mode, (g(p) for p in self.points), self.level)


def drawing_key(t):
    if isinstance(t, STTriangle):
        return (t.time, geom.drawing_key(t.flat))
    return geom.drawing_key(t)


def witness_universe(db: Database, level: int = 0, max_points: int = MAX_POINTS,
                     max_triples: int = MAX_TRIPLES, extra_points: Iterable = ()) -> Universe:
    """Corner points of the database, closed ``level`` times under midpoints,
    barycenters and intersections of segments between known points."""
    pts = set(db.points()) | set(extra_points)
    if db.mode == "st":
        groups: dict[Fraction, set] = {}
        for p in pts:
            groups.setdefault(p.t, set()).add(p.xy)
        for _ in range(level):
            for tau in groups:
                groups[tau] = _grow(list(groups[tau]))
                _check_size(sum(len(g) for g in groups.values()), max_points)
        pts = {STPoint(p.x, p.y, tau) for tau, g in groups.items() for p in g}
    else:
        for _ in range(level):
            pts = _grow(list(pts))
            _check_size(len(pts), max_points)
    u = Universe(db.mode, pts, level)
    _check_size(len(u.points), max_points)
    if u.triple_count > max_triples:
        raise UniverseOverflow(f"{u.triple_count} triangles exceed the bound of {max_triples}")
    return u


def _check_size(n: int, bound: int) -> None:
    if n > bound:
        raise UniverseOverflow(f"{n} points exceed the bound of {bound}")


# -- built-in predicates ------------------------------------------------------------------------

def _tri_corner_p(a, b, c, t) -> bool:
    return geom.corner_p(a, b, c, t)


def _st_corner_p(a, b, c, t) -> bool:
    if not all(geom.is_point(x.flat) for x in (a, b, c)):
        return False
    if not (a.time == b.time == c.time == t.time):
        return False
    return geom.tri_eq(Triangle(a.c1.xy, b.c1.xy, c.c1.xy), t.flat)


def _col_seg(a, b) -> bool:
    if not (geom.is_seg(a) and geom.is_seg(b)):
        return False
    return all(geom.collinear(p, q, r) for p, q in [geom.corner_points(a)] for r in geom.corner_points(b))


def _par_seg(a, b) -> bool:
    if not (geom.is_seg(a) and geom.is_seg(b)):
        return False
    p, q = geom.corner_points(a)
    r, s = geom.corner_points(b)
    return geom.cross(geom.sub(q, p), geom.sub(s, r)) == 0 and not geom.collinear(p, q, r)


def _st_in_triangle(x, a, b, c) -> bool:
    if not (x.t == a.t == b.t == c.t):
        return False
    return geom.in_triangle(x.xy, Triangle(a.xy, b.xy, c.xy))


def _collinear_cotemp(a, b, c) -> bool:
    return a.t == b.t == c.t and geom.collinear(a.xy, b.xy, c.xy)


BUILTINS: dict[str, dict[str, Callable]] = {
    "tri": {
        "PartOf": geom.part_of,
        "Point": geom.is_point,
        "Seg": geom.is_seg,
        "RealTriangle": geom.is_real,
        "ParSeg": _par_seg,
        "ColSeg": _col_seg,
        "Sim": geom.sim,
        "Intersect": geom.intersects,
        "CornerP": _tri_corner_p,
    },
    "pt": {
        "Between": geom.between,
        "InTriangle": lambda x, a, b, c: geom.in_triangle(x, Triangle(a, b, c)),
        "Collinear": geom.collinear,
    },
    "st-tri": {
        "PartOfCotemp": st.part_of_cotemp,
        "BeforeTri": st.before_tri,
        "Cas": st.cas,
        "Lex": st.lex,
        "SAS": st.sas,
        "NoSp": st.no_sp,
        "Point": lambda t: geom.is_point(t.flat),
        "CoTemp": st.cotemp_tri,
        "CornerP": _st_corner_p,
    },
    "st-pt": {
        "BetweenCotemp": st.between_cotemp,
        "Before": st.before,
        "EqCrST": st.eq_cr_st,
        "EqSpace": st.eq_space,
        "Between": st.between3,
        "Cotemp": st.cotemp,
        "CenterOM": st.center_om,
        "InTriangle": _st_in_triangle,
        "CollinearCotemp": _collinear_cotemp,
        "Collinear": st.collinear3,
        "CoPlanar": st.coplanar3,
        "Meet": st.lines_meet3,
        "SameRelArea": st.same_rel_area,
        "Mid": st.mid,
    },
}

EQUALITY = {
    "tri": geom.tri_eq,
    "st-tri": st.tri_eq_st,
    "pt": lambda a, b: a == b,
    "st-pt": lambda a, b: a == b,
}


def _center_witness(a, b, c):
    return (st.barycenter_st(a, b, c),)


def _mid_witness(a, m):
    return (st.reflect3(a, m),)


def _same_rel_area_witness(*args):
    return st.same_rel_area_witness(*args)


# predicate -> (input positions, output positions, witness function)
DEFINITIONS = {
    "CenterOM": ((1, 2, 3), (0,), _center_witness),
    "Mid": ((0, 1), (2,), _mid_witness),
    "SameRelArea": (tuple(range(9)), (9, 10), _same_rel_area_witness),
}


def family(lang: str) -> str:
    sig = signature(lang)
    return {"triangle": "tri", "point": "pt", "st-triangle": "st-tri", "st-point": "st-pt"}[sig.sort]


# -- results --------------------------------------------------------------------------------------

@dataclass
class EvalResult:
    relation: frozenset
    mode: str
    free: tuple[str, ...]
    diagnostics: dict = field(default_factory=dict)

    @property
    def truth(self) -> bool:
        return bool(self.relation)

    def reps(self) -> list:
        if self.diagnostics.get("family", "tri").endswith("pt"):
            return sorted(self.relation)
        return sorted({canonical_rep(t) for t in self.relation})


# -- compilation ------------------------------------------------------------------------------------

def _negate(f: Formula) -> Formula:
    if isinstance(f, Not):
        return f.body
    if isinstance(f, And):
        return disj(*(_negate(p) for p in f.parts)) if f.parts else Or(())
    if isinstance(f, Or):
        return conj(*(_negate(p) for p in f.parts)) if f.parts else And(())
    return Not(f)


def _fv(f: Formula) -> frozenset:
    return frozenset(free_vars(f))


def _cost(f: Formula) -> int:
    if isinstance(f, (RelAtom, Eq)):
        return 0
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Not) and isinstance(f.body, (RelAtom, Eq, Atom)):
        return 2
    return 10


def _shape(parts: list[Formula], outer: frozenset) -> tuple[tuple, tuple[str, ...]]:
    """Alpha-normal form of a conjunction plus its outer variables in first-use order.

    Subformulas that differ only in variable names share a shape, so their
    memo tables can be shared.
    """
    order: list[str] = []
    names: dict = {}

    def var(v, scope):
        if v in scope:
            return scope[v]
        if v not in names:
            if v in outer:
                order.append(v)
                names[v] = f"k{len(order)}"
            else:
                names[v] = f"f{len(names)}"
        return names[v]

    def go(g, scope):
        if isinstance(g, Atom):
            return ("A", g.pred, g.params, tuple(var(a, scope) for a in g.args))
        if isinstance(g, RelAtom):
            return ("R", g.rel, tuple(var(a, scope) for a in g.args))
        if isinstance(g, Eq):
            return ("=", var(g.left, scope), var(g.right, scope))
        if isinstance(g, Not):
            return ("!", go(g.body, scope))
        if isinstance(g, (And, Or)):
            return (type(g).__name__, tuple(go(c, scope) for c in g.parts))
        inner = dict(scope)
        inner[g.var] = f"q{len(scope)}"
        return (type(g).__name__, go(g.body, inner))

    shape = tuple(go(c, {}) for c in parts)
    return shape, tuple(order)


class _Step:
    vars: tuple[str, ...] = ()

    def run(self, env: dict) -> Iterator[None]:
        raise NotImplementedError


class _Domain(_Step):
    def __init__(self, var, values):
        self.vars = (var,)
        self.values = values

    def run(self, env):
        v = self.vars[0]
        for x in self.values:
            env[v] = x
            yield


class _Relation(_Step):
    def __init__(self, args, tuples, unbound, canon):
        self.args = args
        self.tuples = tuples
        self.vars = tuple(dict.fromkeys(a for a in args if a in unbound))
        self.canon = canon

    def run(self, env):
        args = self.args
        unbound = set(self.vars)
        canon = self.canon
        for tup in self.tuples:
            ok = True
            seen: dict = {}
            for a, x in zip(args, tup):
                if a in unbound:
                    if a in seen:
                        if seen[a] != x:
                            ok = False
                            break
                    else:
                        seen[a] = x
                else:
                    y = env[a]
                    if (canon(y) if canon else y) != x:
                        ok = False
                        break
            if ok:
                env.update(seen)
                yield


class _Values(_Step):
    """Bind variables to values computed from the environment."""

    def __init__(self, vars, fn):
        self.vars = tuple(vars)
        self.fn = fn

    def run(self, env):
        for vals in self.fn(env):
            for v, x in zip(self.vars, vals):
                env[v] = x
            yield


class _Compiler:
    def __init__(self, db: Database, universe: Universe, fam: str, reduce: bool,
                 extra: Mapping[str, Callable] | None = None):
        self.db = db
        self.universe = universe
        self.fam = fam
        self.points = fam.endswith("pt")
        self.reduce = reduce and not self.points
        self.builtins = {**BUILTINS[fam], **(extra or {})}
        self.equal = EQUALITY[fam]
        if self.points:
            pdb = point_database(db)
            self.relations = {n: r.tuples for n, r in pdb.relations.items()}
        else:
            self.relations = {n: r.tuples for n, r in db.relations.items()}
        self._rep_tuples: dict[str, list] = {}
        self.cache_limit = 500_000
        self._caches: dict = {}
        self.nodes = 0

    # domains
    def domain(self) -> list:
        if self.points:
            return self.universe.points
        return self.universe.reps if self.reduce else self.universe.triangles

    def rel_tuples(self, name: str) -> list:
        if not self.reduce:
            return sorted(self.relations[name])
        if name not in self._rep_tuples:
            self._rep_tuples[name] = sorted({canonical_rep(t) for t in self.relations[name]})
        return self._rep_tuples[name]

    # atoms
    def atom(self, f: Formula) -> Callable[[dict], bool]:
        if isinstance(f, Eq):
            eq, a, b = self.equal, f.left, f.right
            return lambda env: eq(env[a], env[b])
        if isinstance(f, RelAtom):
            tuples = self.relations.get(f.rel)
            if tuples is None:
                return lambda env: False
            args = f.args
            return lambda env: tuple(env[a] for a in args) in tuples
        if f.pred == "IsBounded":
            # a stored relation is finite, hence bounded
            return lambda env: True
        fn = self.builtins[f.pred]
        args = f.args
        if len(args) == 1:
            a, = args
            return lambda env: fn(env[a])
        if len(args) == 2:
            a, b = args
            return lambda env: fn(env[a], env[b])
        if len(args) == 3:
            a, b, c = args
            return lambda env: fn(env[a], env[b], env[c])
        return lambda env: fn(*(env[x] for x in args))

    def compile(self, f: Formula) -> Callable[[dict], bool]:
        self.nodes += 1
        if isinstance(f, (Atom, RelAtom, Eq)):
            return self.atom(f)
        if isinstance(f, Not):
            inner = self.compile(f.body)
            return lambda env: not inner(env)
        if isinstance(f, And):
            parts = [self.compile(p) for p in sorted(f.parts, key=_cost)]
            return lambda env: all(p(env) for p in parts)
        if isinstance(f, Or):
            parts = [self.compile(p) for p in sorted(f.parts, key=_cost)]
            return lambda env: any(p(env) for p in parts)
        negated = isinstance(f, Forall)
        vars = []
        body = f
        while type(body) is type(f):
            vars.append(body.var)
            body = body.body
        if negated:
            body = _negate(body)
        conjuncts = list(body.parts) if isinstance(body, And) else [body]
        shape, fv = _shape([f], _fv(f))
        search = self.plan(vars, conjuncts, frozenset(fv), free_mode=False)
        cache = self._caches.setdefault(("node", shape), {})
        limit = self.cache_limit

        def run(env):
            key = tuple(env[v] for v in fv)
            hit = cache.get(key)
            if hit is None:
                saved = {v: env[v] for v in vars if v in env}
                hit = any(True for _ in search(env))
                for v in vars:
                    env.pop(v, None)
                env.update(saved)
                if len(cache) >= limit:
                    cache.clear()
                cache[key] = hit
            return hit != negated

        return run

    # planning
    def plan(self, vars: list[str], conjuncts: list[Formula], bound: frozenset, free_mode: bool):
        """Return a function enumerating (by mutating env) the bindings of ``vars`` satisfying all conjuncts."""
        vars = [v for v in vars if v not in bound] + []
        vset = set(vars)
        ready = [c for c in conjuncts if _fv(c) <= bound]
        rest = [c for c in conjuncts if not _fv(c) <= bound]
        checks = [self.compile(c) for c in sorted(ready, key=_cost)]

        if not vars:
            def done(env):
                if all(c(env) for c in checks):
                    yield
            return done

        if not free_mode:
            comps = _components(vars, rest)
            if len(comps) > 1:
                subs = [self._memo(self.plan(cv, cc, bound, False), cv, cc, bound) for cv, cc in comps]

                def split(env):
                    if all(c(env) for c in checks) and all(any(True for _ in s(env)) for s in subs):
                        yield
                return split

        step = self.choose(vars, rest, bound, free_mode)
        if isinstance(step, _Domain):
            branches = self._distribute(vars, rest, bound, free_mode)
            if branches:
                def union(env):
                    if all(c(env) for c in checks):
                        for b in branches:
                            yield from b(env)
                return union
        sub = self.plan([v for v in vars if v not in step.vars], rest, bound | set(step.vars), free_mode)

        def search(env):
            if not all(c(env) for c in checks):
                return
            for _ in step.run(env):
                yield from sub(env)

        return search

    def _distribute(self, vars, conjuncts, bound, free_mode):
        """Split on a disjunction whose every branch offers a generator; None if there is none."""
        for i, c in enumerate(conjuncts):
            if not isinstance(c, Or) or not c.parts:
                continue
            others = conjuncts[:i] + conjuncts[i + 1:]
            cases = [others + (list(b.parts) if isinstance(b, And) else [b]) for b in c.parts]
            if all(not isinstance(self.choose(vars, cs, bound, free_mode), _Domain) for cs in cases):
                return [self.plan(vars, cs, bound, free_mode) for cs in cases]
        return None

    def _memo(self, search, vars, conjuncts, bound):
        shape, keys = _shape([exists(vars, conj(*conjuncts))], bound)
        cache = self._caches.setdefault(("block", shape), {})
        limit = self.cache_limit

        def run(env):
            key = tuple(env[v] for v in keys)
            hit = cache.get(key)
            if hit is None:
                saved = {v: env[v] for v in vars if v in env}
                hit = any(True for _ in search(env))
                for v in vars:
                    env.pop(v, None)
                env.update(saved)
                if len(cache) >= limit:
                    cache.clear()
                cache[key] = hit
            if hit:
                yield

        return run

    def choose(self, vars: list[str], conjuncts: list[Formula], bound: frozenset, free_mode: bool) -> _Step:
        vset = set(vars)
        best = None
        best_rank = None

        def offer(rank, step):
            nonlocal best, best_rank
            if best_rank is None or rank < best_rank:
                best, best_rank = step, rank

        for c in conjuncts:
            if isinstance(c, Atom) and c.pred in DEFINITIONS and self.fam == "st-pt":
                ins, outs, fn = DEFINITIONS[c.pred]
                in_vars = [c.args[i] for i in ins]
                out_vars = [c.args[i] for i in outs]
                if all(v in bound for v in in_vars) and all(v in vset for v in out_vars) and len(set(out_vars)) == len(out_vars):
                    offer(0, self._definition_step(in_vars, out_vars, fn, free_mode))
            elif isinstance(c, Eq):
                for x, y in ((c.left, c.right), (c.right, c.left)):
                    if x in vset and y in bound:
                        offer(1, self._eq_step(x, y))
            elif isinstance(c, Atom) and c.pred == "CornerP":
                *corners, t = c.args
                if t in vset and all(v in bound for v in corners):
                    offer(2, self._hull_step(t, corners))
                elif t in bound and any(v in vset for v in corners) and all(v in vset or v in bound for v in corners):
                    offer(2, self._corner_step(t, corners, vset))
            elif isinstance(c, RelAtom) and c.rel in self.relations:
                if any(a in vset for a in c.args) and all(a in vset or a in bound for a in c.args):
                    n = len(self.relations[c.rel])
                    canon = canonical_triangle if self.reduce else None
                    offer(3 + n / 1e9, _Relation(c.args, self.rel_tuples(c.rel), vset, canon))
            elif isinstance(c, Atom) and c.pred == "Point" and not self.points and c.args[0] in vset:
                offer(4, _Domain(c.args[0], self.universe.point_triangles))
        if best is not None:
            return best
        # most constrained variable first
        score = {v: 0 for v in vars}
        for c in conjuncts:
            fv = _fv(c)
            for v in fv & vset:
                score[v] += 1 + len(fv & bound)
        var = max(vars, key=lambda v: score[v])
        return _Domain(var, self.domain())

    def _definition_step(self, in_vars, out_vars, fn, free_mode):
        members = self.universe.point_set

        def values(env):
            vals = fn(*(env[v] for v in in_vars))
            if vals is None or any(x is None for x in vals):
                return
            if free_mode and not all(x in members for x in vals):
                return
            yield vals

        return _Values(out_vars, values)

    def _eq_step(self, x, y):
        if self.points:
            return _Values([x], lambda env: iter([(env[y],)]))
        index = self.universe.rep_drawings if self.reduce else self.universe.triangle_drawings

        def values(env):
            for t in index.get(drawing_key(env[y]), ()):
                yield (t,)

        return _Values([x], values)

    def _hull_step(self, t, corners):
        index = self.universe.rep_drawings if self.reduce else self.universe.triangle_drawings
        cls = self.universe._tri

        def values(env):
            pts = [env[v].c1 for v in corners]
            for s in index.get(drawing_key(cls(*pts)), ()):
                yield (s,)

        return _Values([t], values)

    def _corner_step(self, t, corners, vset):
        # hull(a, b, c) equals the drawing of t exactly when a, b, c lie in the
        # drawing and include each of its extreme points
        free = [v for v in dict.fromkeys(corners) if v in vset]
        cls = self.universe._tri
        st_mode = self.universe.mode == "st"

        def values(env):
            tri = env[t]
            flat = tri.flat if st_mode else tri
            extremes = geom.corner_points(flat)
            if len(extremes) == 3:
                cands = extremes
            else:
                cands = [p for p in self.universe.points
                         if (not st_mode or p.t == tri.time) and geom.in_triangle(p.xy if st_mode else p, flat)]
                cands = [p.xy if st_mode else p for p in cands]
            fixed = [(env[v].c1.xy if st_mode else env[v].c1) for v in corners if v not in free]
            if not all(geom.in_triangle(p, flat) for p in fixed):
                return
            need = set(extremes)
            for combo in product(cands, repeat=len(free)):
                if need <= set(combo).union(fixed):
                    if st_mode:
                        combo = tuple(STPoint(p.x, p.y, tri.time) for p in combo)
                    yield tuple(cls(p, p, p) for p in combo)

        return _Values(free, values)


def _components(vars: list[str], conjuncts: list[Formula]) -> list[tuple[list[str], list[Formula]]]:
    parent = {v: v for v in vars}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    vset = set(vars)
    for c in conjuncts:
        vs = [v for v in _fv(c) if v in vset]
        for a, b in zip(vs, vs[1:]):
            parent[find(a)] = find(b)
    groups: dict[str, list[str]] = {}
    for v in vars:
        groups.setdefault(find(v), []).append(v)
    out = []
    for root, members in groups.items():
        ms = set(members)
        out.append((members, [c for c in conjuncts if _fv(c) & ms]))
    return out


# -- entry points ----------------------------------------------------------------------------------

def _default_lang(db: Database, points: bool = False) -> str:
    if db.mode == "st":
        return "PT_ST_V" if points else "TRI_ST_V"
    return "PT" if points else "TRI"


def evaluate(f: Formula, db: Database, universe: Universe | None = None, *, level: int = 0,
             lang: str | None = None, free: Iterable[str] | None = None, orbit_reduction: bool = True,
             close: bool = True, threads: int = 1, extra_predicates: Mapping[str, Callable] | None = None) -> EvalResult:
    """All valuations of the free variables (over the universe) that satisfy ``f``.

    Triangle results are consistency-closed unless ``close`` is false and
    ``orbit_reduction`` is off, in which case the raw satisfying tuples are
    returned so closure can be audited.
    """
    started = time.perf_counter()
    lang = lang or _default_lang(db)
    fam = family(lang)
    if universe is None:
        universe = witness_universe(db, level)
    comp = _Compiler(db, universe, fam, orbit_reduction, extra_predicates)
    names = list(free) if free is not None else free_vars(f)
    missing = [v for v in free_vars(f) if v not in names]
    if missing:
        raise UnboundVariable(f"free variables {missing} are not output columns")
    conjuncts = list(f.parts) if isinstance(f, And) else [f]
    found: set = set()
    if threads > 1 and names:
        first, rest = names[0], names[1:]
        search = comp.plan(rest, conjuncts, frozenset([first]), free_mode=True)
        values = comp.domain()
        chunks = [values[i::threads] for i in range(threads)]

        def work(chunk):
            local = set()
            env: dict = {}
            for x in chunk:
                env[first] = x
                for _ in search(env):
                    local.add(tuple(env[v] for v in names))
            return local

        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(work, chunks):
                found |= part
    else:
        search = comp.plan(names, conjuncts, frozenset(), free_mode=True)
        env: dict = {}
        for _ in search(env):
            found.add(tuple(env[v] for v in names))
    if not comp.points and (comp.reduce or close):
        relation = consistency_closure(found)
    else:
        relation = frozenset(found)
    diagnostics = {
        "family": fam,
        "level": universe.level,
        "universe_points": len(universe.points),
        "universe_triangles": universe.triple_count,
        "orbit_reduction": comp.reduce,
        "seconds": time.perf_counter() - started,
    }
    return EvalResult(relation, db.mode, tuple(names), diagnostics)


def evaluate_ground(f: Formula, valuation: Mapping[str, object], db: Database, universe: Universe | None = None,
                    *, level: int = 0, lang: str | None = None, orbit_reduction: bool = True,
                    extra_predicates: Mapping[str, Callable] | None = None) -> bool:
    """Truth of ``f`` under a valuation of all its free variables."""
    missing = [v for v in free_vars(f) if v not in valuation]
    if missing:
        raise UnboundVariable(f"no value for {missing}")
    lang = lang or _default_lang(db)
    if universe is None:
        universe = witness_universe(db, level)
    comp = _Compiler(db, universe, family(lang), orbit_reduction, extra_predicates)
    return comp.compile(f)(dict(valuation))


# -- genericity --------------------------------------------------------------------------------------

@dataclass
class TrialReport:
    transform: object
    ok: bool
    expected: int
    actual: int


@dataclass
class GenericityReport:
    trials: list[TrialReport]

    @property
    def passed(self) -> int:
        return sum(t.ok for t in self.trials)

    @property
    def all_ok(self) -> bool:
        return all(t.ok for t in self.trials)


def check_generic(db: Database, f: Formula, sampler: Callable[[], object], trials: int, *, level: int = 0,
                  lang: str | None = None, extra_predicates=None) -> GenericityReport:
    """Compare evaluate(f, g(db)) with g(evaluate(f, db)) for sampled transforms g."""
    base = evaluate(f, db, level=level, lang=lang, extra_predicates=extra_predicates)
    reports = []
    for _ in range(trials):
        g = sampler()
        moved = evaluate(f, db.map(g), level=level, lang=lang, extra_predicates=extra_predicates)
        expected = map_tuples(g, base.relation)
        reports.append(TrialReport(g, moved.relation == expected, len(expected), len(moved.relation)))
    return GenericityReport(reports)
