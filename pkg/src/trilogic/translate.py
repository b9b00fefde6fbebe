"""Translations between triangle logics and point logics, in both directions.

Lowering replaces every triangle variable by three point variables; lifting
replaces every point variable by a point-degenerate triangle variable.  Derived
predicates are emitted as macro atoms; :func:`expand_macros` unfolds those that
have a first-order definition in the target language.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from .errors import NotTriple, UnsupportedConstruct
from .logic import (
    FALSE,
    TRUE,
    And,
    Atom,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    RelAtom,
    Signature,
    all_vars,
    atom,
    conj,
    disj,
    exists,
    forall,
    free_vars,
    implies,
    parse,
    signature,
    substitute,
)

LOWER_TARGET = {
    "TRI": "PT",
    "TRI_ST_CAS": "PT_ST_A",
    "TRI_ST_LEX": "PT_ST_A",
    "TRI_ST_SAS": "PT_ST_AC",
    "TRI_ST_V": "PT_ST_V",
}
LIFT_TARGETS = {
    "PT": ("TRI",),
    "PT_ST_A": ("TRI_ST_CAS", "TRI_ST_LEX"),
    "PT_ST_AC": ("TRI_ST_SAS",),
    "PT_ST_V": ("TRI_ST_V",),
}


@dataclass
class TranslationReport:
    input: Formula
    output: Formula
    source: str
    target: str
    var_map: dict[str, tuple[str, ...]] = field(default_factory=dict)
    guards: list[Formula] = field(default_factory=list)

    @property
    def free(self) -> list[str]:
        return free_vars(self.output)


class _Names:
    """Deterministic fresh names that avoid every name already in use."""

    def __init__(self, used: set[str]):
        self.used = set(used)
        self.counters: dict[str, int] = {}

    def fresh(self, base: str) -> str:
        i = self.counters.get(base, 0)
        while True:
            i += 1
            name = f"{base}{i}"
            if name not in self.used:
                self.used.add(name)
                self.counters[base] = i
                return name

    def claim(self, name: str) -> str:
        if name not in self.used:
            self.used.add(name)
            return name
        return self.fresh(name + "_")


def _bind(kind, names: list[str], guard: Formula, body: Formula) -> Formula:
    if kind is Exists:
        return exists(names, conj(guard, body) if guard != TRUE else body)
    return forall(names, implies(guard, body) if guard != TRUE else body)


# -- lowering ---------------------------------------------------------------------------

def _in_triangle_all(xs, ys) -> Formula:
    return conj(*(atom("InTriangle", x, *ys) for x in xs))


def _drawing_eq(xs, ys) -> Formula:
    return conj(_in_triangle_all(xs, ys), _in_triangle_all(ys, xs))


def _corner_eq(xs, ys) -> Formula:
    return disj(*(conj(*(Eq(x, y) for x, y in zip(xs, p))) for p in permutations(ys)))


class _Lowerer:
    def __init__(self, f: Formula, source: Signature, eq_mode: str):
        self.source = source
        self.eq = _drawing_eq if eq_mode == "drawing" else _corner_eq
        self.names = _Names(all_vars(f))
        self.var_map: dict[str, tuple[str, ...]] = {}
        self.guards: list[Formula] = []

    def split(self, v: str) -> tuple[str, ...]:
        pts = tuple(self.names.claim(f"{v}_{i}") for i in (1, 2, 3))
        self.var_map.setdefault(v, pts)
        return pts

    def guard(self, pts) -> Formula:
        if not self.source.st:
            return TRUE
        a, b, c = pts
        return conj(atom("Cotemp", a, b), atom("Cotemp", b, c))

    def go(self, f: Formula, env: dict[str, tuple[str, ...]]) -> Formula:
        if isinstance(f, (Exists, Forall)):
            pts = self.split(f.var)
            inner = {**env, f.var: pts}
            g = self.guard(pts)
            if g != TRUE:
                self.guards.append(g)
            return _bind(type(f), list(pts), g, self.go(f.body, inner))
        if isinstance(f, Not):
            return Not(self.go(f.body, env))
        if isinstance(f, And):
            return conj(*(self.go(c, env) for c in f.parts)) if f.parts else TRUE
        if isinstance(f, Or):
            return disj(*(self.go(c, env) for c in f.parts)) if f.parts else FALSE
        if isinstance(f, Eq):
            a, b = env[f.left], env[f.right]
            return self.eq(a, b)
        if isinstance(f, RelAtom):
            return RelAtom(f.rel, tuple(p for v in f.args for p in env[v]))
        return self.atom(f, [env[v] for v in f.args])

    def atom(self, f: Atom, args) -> Formula:
        name = f.pred
        if name in ("PartOf", "PartOfCotemp"):
            return _in_triangle_all(args[0], args[1])
        if name == "Point":
            a, b, c = args[0]
            return conj(Eq(a, b), Eq(b, c))
        if name == "BeforeTri":
            return atom("Before", args[0][0], args[1][0])
        if name == "CoTemp":
            return atom("Cotemp", args[0][0], args[1][0])
        if name == "Seg" and not self.source.st:
            a, b, c = args[0]
            return conj(atom("Collinear", a, b, c), Not(conj(Eq(a, b), Eq(b, c))))
        if name == "RealTriangle" and not self.source.st:
            return Not(atom("Collinear", *args[0]))
        if name == "CornerP":
            pts = [a[0] for a in args[:3]]
            points = conj(*(conj(Eq(a[0], a[1]), Eq(a[1], a[2])) for a in args[:3]))
            return conj(points, _drawing_eq(pts, args[3]))
        if name == "Cas":
            vs = [self.names.fresh("v") for _ in range(3)]
            centers = [atom("CenterOM", v, *args[i]) for i, v in enumerate(vs)]
            return exists(vs, conj(*centers, atom("EqCrST", *vs, args[3][0], args[4][0], args[5][0])))
        if name == "Lex":
            v1, v2, v3 = (self.names.fresh("v") for _ in range(3))
            c3 = args[2][2]
            q = (args[3][0], args[4][0], args[5][0])
            sra = atom("SameRelArea", *args[0], *args[1], *args[2], v1, v2)
            forward = atom("EqCrST", v1, v2, c3, *q)
            mirrored = exists([v3], conj(atom("Mid", v2, v1, v3), atom("EqCrST", v1, v3, c3, *q)))
            return exists([v1, v2], conj(sra, disj(forward, mirrored)))
        if name == "SAS":
            vs = [self.names.fresh("v") for _ in range(4)]
            v1, v2, v3, v4 = vs
            centers = [atom("CenterOM", v, *args[i]) for i, v in enumerate(vs)]
            strict = conj(atom("Before", v1, v2), Not(atom("Before", v2, v1)),
                          atom("Before", v3, v4), Not(atom("Before", v4, v3)))
            parallel = conj(atom("CoPlanar", v1, v2, v3, v4), Not(atom("Meet", v1, v2, v3, v4)))
            same_line = conj(atom("Collinear", v1, v2, v3), atom("Collinear", v1, v2, v4))
            return exists(vs, conj(*centers, strict, disj(parallel, same_line)))
        if name == "NoSp":
            w1, w2 = self.names.fresh("w"), self.names.fresh("w")
            return exists([w1, w2], conj(atom("CenterOM", w1, *args[0]), atom("CenterOM", w2, *args[1]),
                                         atom("EqSpace", w1, w2)))
        raise UnsupportedConstruct(f"{name} has no quantifier-free lowering")


def lower(f: Formula, source: str | Signature, eq_mode: str = "drawing") -> TranslationReport:
    """Translate a triangle formula into the matching point logic.

    Triangle equality compares drawings, so by default it lowers to mutual
    containment.  ``eq_mode="corners"`` emits the disjunction over the six
    corner matchings instead, which agrees only on non-degenerate triangles.
    """
    sig = signature(source) if isinstance(source, str) else source
    if sig.tag not in LOWER_TARGET:
        raise ValueError(f"{sig.tag} is not a triangle language")
    if eq_mode not in ("drawing", "corners"):
        raise ValueError(f"unknown eq_mode {eq_mode!r}")
    lw = _Lowerer(f, sig, eq_mode)
    env = {v: lw.split(v) for v in free_vars(f)}
    body = lw.go(f, env)
    top = [lw.guard(env[v]) for v in free_vars(f)]
    top = [g for g in top if g != TRUE]
    lw.guards[:0] = top
    out = conj(*top, body) if top else body
    return TranslationReport(f, out, sig.tag, LOWER_TARGET[sig.tag], dict(lw.var_map), lw.guards)


def lower_spatial(f: Formula) -> TranslationReport:
    return lower(f, "TRI")


def lower_st(f: Formula, source: str = "TRI_ST_CAS") -> TranslationReport:
    return lower(f, source)


# -- lifting ------------------------------------------------------------------------------

class _Lifter:
    def __init__(self, f: Formula, source: Signature, target: Signature):
        self.source = source
        self.target = target
        self.names = _Names(all_vars(f))
        self.guards: list[Formula] = []
        self.part_of = "PartOfCotemp" if source.st else "PartOf"

    def guard(self, v: str) -> Formula:
        return atom("Point", v)

    def go(self, f: Formula) -> Formula:
        if isinstance(f, (Exists, Forall)):
            g = self.guard(f.var)
            self.guards.append(g)
            return _bind(type(f), [f.var], g, self.go(f.body))
        if isinstance(f, Not):
            return Not(self.go(f.body))
        if isinstance(f, And):
            return conj(*(self.go(c) for c in f.parts)) if f.parts else TRUE
        if isinstance(f, Or):
            return disj(*(self.go(c) for c in f.parts)) if f.parts else FALSE
        if isinstance(f, Eq):
            return f
        if isinstance(f, RelAtom):
            return self.relation(f)
        return self.atom(f)

    def between_tri(self, a, b, c) -> Formula:
        t = self.names.fresh("s" if self.source.st else "t")
        return forall([t], implies(conj(atom(self.part_of, a, t), atom(self.part_of, c, t)), atom(self.part_of, b, t)))

    def relation(self, f: RelAtom) -> Formula:
        if len(f.args) % 3:
            raise NotTriple(f"{f.rel} has {len(f.args)} point arguments")
        ts = [self.names.fresh("s" if self.source.st else "t") for _ in range(len(f.args) // 3)]
        corners = [atom("CornerP", *f.args[3 * i:3 * i + 3], t) for i, t in enumerate(ts)]
        return exists(ts, conj(RelAtom(f.rel, tuple(ts)), *corners))

    def atom(self, f: Atom) -> Formula:
        name, args = f.pred, f.args
        if name == "Between" and not self.source.st:
            return self.between_tri(*args)
        if name == "InTriangle":
            t = self.names.fresh("s" if self.source.st else "t")
            return exists([t], conj(atom("CornerP", *args[1:], t), atom(self.part_of, args[0], t)))
        if name == "Collinear" and not self.source.st:
            t = self.names.fresh("t")
            return exists([t], conj(atom("CornerP", *args, t), Not(atom("RealTriangle", t))))
        if name == "Before":
            return atom("BeforeTri", *args)
        if name == "Cotemp":
            return atom("CoTemp", *args)
        if name == "BetweenCotemp":
            a, b, c = args
            return conj(atom("CoTemp", a, b), atom("CoTemp", b, c), self.between_tri(a, b, c))
        if name == "Between":
            a, b, c = args
            cotemporal = conj(atom("CoTemp", a, b), atom("CoTemp", b, c), self.between_tri(a, b, c))
            return disj(cotemporal, atom("SAS", a, b, b, c), atom("SAS", c, b, b, a), Eq(a, b), Eq(b, c))
        if name == "EqSpace":
            return atom("NoSp", *args)
        if name == "EqCrST":
            if self.target.tag == "TRI_ST_CAS":
                return atom("Cas", *args)
            return self.eq_cr_by_lex(*args)
        raise UnsupportedConstruct(f"{name} has no lifting into {self.target.tag}")

    def lex_wrapper(self, p1, p2, p3, q1, q2, q3) -> Formula:
        s7, s8, s9, s10, s11 = (self.names.fresh("s") for _ in range(5))
        body = conj(
            atom("Point", s7), atom("Point", s8),
            atom("CornerP", s7, s8, p1, s9), atom("CornerP", s7, s8, p2, s10), atom("CornerP", s7, s8, p3, s11),
            atom("Lex", s9, s10, s11, q1, q2, q3),
        )
        return exists([s7, s8, s9, s10, s11], body)

    def eq_cr_by_lex(self, p1, p2, p3, q1, q2, q3) -> Formula:
        def time_between(a, b, c):
            return disj(conj(atom("BeforeTri", a, b), atom("BeforeTri", b, c)),
                        conj(atom("BeforeTri", c, b), atom("BeforeTri", b, a)))

        collinear = disj(self.between_tri(p1, p2, p3), self.between_tri(p2, p3, p1), self.between_tri(p3, p1, p2))
        inside = conj(self.lex_wrapper(p1, p2, p3, q1, q2, q3), time_between(q1, q2, q3))
        beyond = conj(self.lex_wrapper(p1, p3, p2, q1, q3, q2), time_between(q1, q3, q2))
        behind = conj(self.lex_wrapper(p2, p1, p3, q2, q1, q3), time_between(q2, q1, q3))
        return conj(atom("CoTemp", p1, p2), atom("CoTemp", p2, p3), collinear, Not(Eq(p1, p3)),
                    disj(inside, beyond, behind))


def lift(g: Formula, source: str | Signature, target: str | None = None, query_form: bool = False) -> TranslationReport:
    """Translate a point formula into a triangle logic.

    With ``query_form`` the 3k free point variables are regrouped into k
    triangle variables, each constrained by CornerP to have them as corners.
    """
    sig = signature(source) if isinstance(source, str) else source
    if sig.tag not in LIFT_TARGETS:
        raise ValueError(f"{sig.tag} is not a point language")
    tgt = signature(target or LIFT_TARGETS[sig.tag][0])
    if tgt.tag not in LIFT_TARGETS[sig.tag]:
        raise ValueError(f"cannot lift {sig.tag} into {tgt.tag}")
    lf = _Lifter(g, sig, tgt)
    free = free_vars(g)
    body = lf.go(g)
    top = [lf.guard(v) for v in free]
    lf.guards[:0] = top
    var_map = {v: (v,) for v in free}
    if not query_form:
        return TranslationReport(g, conj(*top, body) if top else body, sig.tag, tgt.tag, var_map, lf.guards)
    if len(free) % 3:
        raise NotTriple(f"{len(free)} free point variables cannot form triangles")
    ts = [lf.names.fresh("s" if sig.st else "t") for _ in range(len(free) // 3)]
    corners = [atom("CornerP", *free[3 * i:3 * i + 3], t) for i, t in enumerate(ts)]
    out = exists(free, conj(*corners, *top, body))
    var_map = {t: tuple(free[3 * i:3 * i + 3]) for i, t in enumerate(ts)}
    return TranslationReport(g, out, sig.tag, tgt.tag, var_map, lf.guards)


def lift_spatial(g: Formula, query_form: bool = False) -> TranslationReport:
    return lift(g, "PT", "TRI", query_form)


def lift_st(g: Formula, source: str = "PT_ST_A", target: str | None = None, query_form: bool = False) -> TranslationReport:
    return lift(g, source, target, query_form)


# -- macro definitions ----------------------------------------------------------------------

_DEFS_TRI = {
    "Point": ("t", "forall u (PartOf(u, t) -> u = t)"),
    "Seg": ("t", "!Point(t) & exists a b (Point(a) & Point(b) & forall c ((Point(c) & PartOf(c, t)) -> "
                 "forall d ((PartOf(a, d) & PartOf(b, d)) -> PartOf(c, d))))"),
    "RealTriangle": ("t", "!Point(t) & !Seg(t)"),
    "ColSeg": ("a b", "Seg(a) & Seg(b) & exists c (Seg(c) & PartOf(a, c) & PartOf(b, c))"),
    "ParSeg": ("a b", "Seg(a) & Seg(b) & forall c d ((ColSeg(a, c) & ColSeg(b, d)) -> !exists e (PartOf(e, c) & PartOf(e, d)))"),
    "Intersect": ("a b", "exists c (PartOf(c, a) & PartOf(c, b))"),
    "CornerP": ("a b c t", "Point(a) & Point(b) & Point(c) & forall d (Point(d) -> (PartOf(d, t) <-> "
                           "exists e (Point(e) & (forall f ((PartOf(a, f) & PartOf(b, f)) -> PartOf(e, f))) & "
                           "forall f ((PartOf(e, f) & PartOf(c, f)) -> PartOf(d, f)))))"),
}
_DEFS_TRI_ST = {
    "Point": ("t", "forall u (PartOfCotemp(u, t) -> u = t)"),
    "CoTemp": ("a b", "BeforeTri(a, b) & BeforeTri(b, a)"),
    "CornerP": ("a b c t", "Point(a) & Point(b) & Point(c) & CoTemp(a, t) & forall d (Point(d) -> (PartOfCotemp(d, t) <-> "
                           "exists e (Point(e) & (forall f ((PartOfCotemp(a, f) & PartOfCotemp(b, f)) -> PartOfCotemp(e, f))) & "
                           "forall f ((PartOfCotemp(e, f) & PartOfCotemp(c, f)) -> PartOfCotemp(d, f)))))"),
}
_CENTER = ("v a b c", "exists w1 w2 w3 (BC(a, w1, b) & BC(b, w2, c) & BC(c, w3, a) & Par(a, b, w2, w3) & "
                      "Par(b, c, w1, w3) & Par(c, a, w1, w2) & BC(a, v, w2) & BC(b, v, w3) & BC(c, v, w1))")
_DEFS_PT = {
    "InTriangle": ("x a b c", "exists y (Between(a, y, b) & Between(y, x, c))"),
    "Collinear": ("a b c", "Between(a, b, c) | Between(b, c, a) | Between(c, a, b)"),
}
_DEFS_PT_ST_A = {
    "Cotemp": ("a b", "Before(a, b) & Before(b, a)"),
    "InTriangle": ("x a b c", "exists y (BetweenCotemp(a, y, b) & BetweenCotemp(y, x, c))"),
    "CollinearCotemp": ("a b c", "BetweenCotemp(a, b, c) | BetweenCotemp(b, c, a) | BetweenCotemp(c, a, b)"),
    "CenterOM": (_CENTER[0], _CENTER[1].replace("BC(", "BetweenCotemp(").replace("Par(", "ParC(")),
}
_DEFS_PT_ST_AC = {
    "Cotemp": ("a b", "Before(a, b) & Before(b, a)"),
    "InTriangle": ("x a b c", "exists y (Between(a, y, b) & Between(y, x, c))"),
    "Collinear": ("a b c", "Between(a, b, c) | Between(b, c, a) | Between(c, a, b)"),
    "Meet": ("a b c d", "exists w (Collinear(w, a, b) & Collinear(w, c, d))"),
    "CoPlanar": ("a b c d", "Meet(a, b, c, d) | Meet(a, c, b, d) | Meet(a, d, b, c)"),
    "CenterOM": (_CENTER[0], _CENTER[1].replace("BC(", "BCT(").replace("Par(", "ParM(")),
}
# helper predicates used only inside definitions
_HELPERS = {
    "PT_ST_A": {"ParC": ("a b c d", "!exists w (CollinearCotemp(w, a, b) & CollinearCotemp(w, c, d))")},
    "PT_ST_AC": {"ParM": ("a b c d", "!Meet(a, b, c, d)"),
                 "BCT": ("a b c", "Between(a, b, c) & Cotemp(a, c)")},
}
MACRO_DEFINITIONS = {
    "TRI": _DEFS_TRI,
    "TRI_ST_CAS": _DEFS_TRI_ST, "TRI_ST_LEX": _DEFS_TRI_ST, "TRI_ST_SAS": _DEFS_TRI_ST, "TRI_ST_V": _DEFS_TRI_ST,
    "PT": _DEFS_PT,
    "PT_ST_A": {**_DEFS_PT_ST_A, **_HELPERS["PT_ST_A"]},
    "PT_ST_AC": {**_DEFS_PT_ST_AC, **_HELPERS["PT_ST_AC"]},
    "PT_ST_V": {**_DEFS_PT_ST_AC, **_HELPERS["PT_ST_AC"]},
}


def _definitions(tag: str) -> dict[str, tuple[tuple[str, ...], Formula]]:
    sig = signature(tag)
    table = MACRO_DEFINITIONS[tag]
    helpers = {n: len(p.split()) for n, (p, _) in table.items() if sig.arity(n) is None}
    ext = Signature(sig.tag, sig.sort, {**sig.predicates, **helpers}, sig.macros)
    return {name: (tuple(params.split()), parse(body, ext)) for name, (params, body) in table.items()}


def expand_macros(f: Formula, tag: str, keep: frozenset[str] = frozenset()) -> Formula:
    """Unfold macro atoms that have a first-order definition in the language ``tag``.

    Macros named in ``keep`` stay atoms, as do SameRelArea, Mid, IsBounded and Sim.
    """
    defs = _definitions(signature(tag).tag)

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom) and g.pred in defs and g.pred not in keep:
            params, body = defs[g.pred]
            return go(substitute(body, dict(zip(params, g.args))))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, And):
            return And(tuple(go(c) for c in g.parts))
        if isinstance(g, Or):
            return Or(tuple(go(c) for c in g.parts))
        if isinstance(g, (Exists, Forall)):
            return type(g)(g.var, go(g.body))
        return g

    return go(f)

