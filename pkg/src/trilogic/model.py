"""Triangle databases: schemas, consistency-closed relations and the text format."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from pathlib import Path
from typing import Iterable, Mapping

from . import geom, st
from .errors import ArityMismatch, BadArity, NonCotemporalTriangle, ParseError
from .geom import Affinity, Point2, Triangle
from .st import STPoint, STTransform, STTriangle

MODES = ("spatial", "st")


def canonical_triangle(t):
    return type(t)(*sorted(t))


def canonical_rep(tup: tuple) -> tuple:
    """Sort the corners of every triangle in the tuple."""
    return tuple(canonical_triangle(t) for t in tup)


def triangle_orbit(t) -> set:
    cls = type(t)
    return {cls(*p) for p in permutations(t)}


def consistency_closure(tuples: Iterable[tuple]) -> frozenset:
    """All tuples obtained by permuting the corners of each triangle independently."""
    out = set()
    for tup in tuples:
        out.update(product(*(triangle_orbit(t) for t in tup)))
    return frozenset(out)


def can_tr(tup: tuple) -> tuple:
    """Flatten a tuple of triangles into its corner points."""
    return tuple(p for t in tup for p in t)


def can_tr_inverse(points: tuple, st_mode: bool = False) -> tuple:
    if len(points) % 3:
        raise BadArity(f"{len(points)} points cannot be grouped into triangles")
    cls = STTriangle if st_mode else Triangle
    return tuple(cls(*points[i:i + 3]) for i in range(0, len(points), 3))


@dataclass(frozen=True)
class Schema:
    arities: Mapping[str, int]
    mode: str = "spatial"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        object.__setattr__(self, "arities", dict(self.arities))


@dataclass(frozen=True)
class Relation:
    """A relation over triangles (or over points, for translated databases).

    Triangle relations always hold the full permutation orbit of each stored tuple.
    """

    name: str
    arity: int
    tuples: frozenset = field(default_factory=frozenset)
    points: bool = False

    @classmethod
    def of(cls, name: str, arity: int, tuples: Iterable[tuple]) -> "Relation":
        tuples = list(tuples)
        for tup in tuples:
            if len(tup) != arity:
                raise ArityMismatch(f"{name} has arity {arity}, got a tuple of {len(tup)}")
        return cls(name, arity, consistency_closure(tuples))

    def reps(self) -> list[tuple]:
        if self.points:
            return sorted(self.tuples)
        return sorted({canonical_rep(t) for t in self.tuples})

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return (self.name, self.arity, self.points) == (other.name, other.arity, other.points) and self.tuples == other.tuples

    def __hash__(self):
        return hash((self.name, self.arity, self.tuples))

    def __len__(self):
        return len(self.tuples)

    def __contains__(self, tup):
        return tup in self.tuples


@dataclass(frozen=True)
class Database:
    schema: Schema
    relations: Mapping[str, Relation]

    @classmethod
    def build(cls, mode: str, data: Mapping[str, tuple[int, Iterable[tuple]]]) -> "Database":
        rels = {name: Relation.of(name, k, tups) for name, (k, tups) in data.items()}
        return cls(Schema({n: r.arity for n, r in rels.items()}, mode), rels)

    @property
    def mode(self) -> str:
        return self.schema.mode

    def __getitem__(self, name: str) -> Relation:
        return self.relations[name]

    def triangles(self) -> set:
        return {t for r in self.relations.values() if not r.points for tup in r.tuples for t in tup}

    def points(self) -> set:
        return {p for t in self.triangles() for p in t}

    def map(self, g) -> "Database":
        """Image under an Affinity (spatial) or an STTransform (spatio-temporal)."""
        fn = _mapper(g)
        rels = {}
        for name, r in self.relations.items():
            if r.points:
                tuples = frozenset(tuple(fn(p) for p in tup) for tup in r.tuples)
            else:
                tuples = frozenset(tuple(map_triangle(g, t) for t in tup) for tup in r.tuples)
            rels[name] = Relation(name, r.arity, tuples, r.points)
        return Database(self.schema, rels)

    def __eq__(self, other):
        if not isinstance(other, Database):
            return NotImplemented
        return self.schema == other.schema and dict(self.relations) == dict(other.relations)


def _mapper(g):
    if isinstance(g, STTransform):
        return lambda p: st.apply_st(g, p)
    return g


def map_triangle(g, t):
    if isinstance(g, STTransform):
        return st.apply_st_triangle(g, t)
    return geom.apply_affinity(g, t)


def map_value(g, v):
    """Image of a triangle or, for point-language results, of a single point."""
    if isinstance(v, (geom.Point2, st.STPoint)):
        return _mapper(g)(v)
    return map_triangle(g, v)


def map_tuples(g, tuples: Iterable[tuple]) -> frozenset:
    return frozenset(tuple(map_value(g, v) for v in tup) for tup in tuples)


def point_database(db: Database) -> Database:
    """The canonical point representation: each k-ary relation becomes 3k-ary over points."""
    rels = {}
    for name, r in db.relations.items():
        rels[name] = Relation(name, 3 * r.arity, frozenset(can_tr(t) for t in r.tuples), points=True)
    return Database(Schema({n: r.arity for n, r in rels.items()}, db.mode), rels)


def snapshot(db: Database, tau) -> Database:
    """Tuples whose triangles all sit at time ``tau``, with time stripped."""
    if db.mode != "st":
        raise ValueError("snapshot needs a spatio-temporal database")
    tau = geom.rat(tau)
    rels = {}
    for name, r in db.relations.items():
        keep = frozenset(tuple(t.flat for t in tup) for tup in r.tuples if all(t.time == tau for t in tup))
        rels[name] = Relation(name, r.arity, keep)
    return Database(Schema(db.schema.arities, "spatial"), rels)


def times(db: Database) -> list[Fraction]:
    return sorted({t.time for t in db.triangles()}) if db.mode == "st" else []


# -- text format ----------------------------------------------------------------

_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<tok>-?\d+(?:/\d+)?|[A-Za-z_][A-Za-z_0-9]*|[(){}\[\],;]|\S)")


class _Lexer:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, int, int]] = []
        line, line_start = 1, 0
        for m in _TOKEN.finditer(text):
            tok = m.group("tok")
            if tok is not None:
                self.tokens.append((tok, line, m.start() - line_start + 1))
            chunk = m.group(0)
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = m.start() + chunk.rindex("\n") + 1
        self.end = (line, len(text) - line_start + 1)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def where(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i][1:]
        return self.end

    def take(self, expected: str | None = None) -> str:
        if self.i >= len(self.tokens):
            raise ParseError(f"unexpected end of input, expected {expected or 'a token'}", *self.end)
        tok, line, col = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", line, col)
        self.i += 1
        return tok


def _rat(lx: _Lexer) -> Fraction:
    line, col = lx.where()
    tok = lx.take()
    if not re.fullmatch(r"-?\d+(/\d+)?", tok):
        raise ParseError(f"expected a rational, found {tok!r}", line, col)
    if tok.endswith("/0"):
        raise ParseError("zero denominator", line, col)
    return Fraction(tok)


def _point(lx: _Lexer, st_mode: bool):
    lx.take("(")
    x = _rat(lx)
    lx.take(",")
    y = _rat(lx)
    if st_mode:
        lx.take(";")
        t = _rat(lx)
        lx.take(")")
        return STPoint(x, y, t)
    lx.take(")")
    return Point2(x, y)


def _triangle(lx: _Lexer, st_mode: bool):
    line, col = lx.where()
    lx.take("[")
    a = _point(lx, st_mode)
    lx.take(",")
    b = _point(lx, st_mode)
    lx.take(",")
    c = _point(lx, st_mode)
    lx.take("]")
    if st_mode:
        if not (a.t == b.t == c.t):
            raise NonCotemporalTriangle(f"triangle at line {line}, column {col} mixes times")
        return STTriangle(a, b, c)
    return Triangle(a, b, c)


def parse_database(text: str) -> Database:
    lx = _Lexer(text)
    lx.take("mode")
    line, col = lx.where()
    mode = lx.take()
    if mode not in MODES:
        raise ParseError(f"unknown mode {mode!r}", line, col)
    st_mode = mode == "st"
    data: dict[str, tuple[int, list]] = {}
    while lx.peek() is not None:
        lx.take("rel")
        line, col = lx.where()
        name = lx.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
            raise ParseError(f"bad relation name {name!r}", line, col)
        line, col = lx.where()
        k = lx.take()
        if not k.isdigit() or int(k) < 1:
            raise ParseError(f"bad arity {k!r}", line, col)
        arity = int(k)
        lx.take("{")
        tuples = []
        while lx.peek() == "(":
            line, col = lx.where()
            lx.take("(")
            tup = [_triangle(lx, st_mode)]
            while lx.peek() == ",":
                lx.take(",")
                tup.append(_triangle(lx, st_mode))
            lx.take(")")
            if len(tup) != arity:
                raise ArityMismatch(f"{name} has arity {arity}; tuple at line {line}, column {col} has {len(tup)}")
            tuples.append(tuple(tup))
        lx.take("}")
        prev = data.get(name)
        if prev is not None and prev[0] != arity:
            raise ArityMismatch(f"{name} declared with arities {prev[0]} and {arity}")
        data.setdefault(name, (arity, []))[1].extend(tuples)
    return Database.build(mode, data)


def load_database(path) -> Database:
    return parse_database(Path(path).read_text())


def format_database(db: Database) -> str:
    lines = [f"mode {db.mode}"]
    for name in sorted(db.relations):
        r = db.relations[name]
        lines.append(f"rel {name} {r.arity} {{")
        for rep in r.reps():
            lines.append("  (" + ", ".join(repr(t) for t in rep) + ")")
        lines.append("}")
    return "\n".join(lines) + "\n"


def save_database(db: Database, path) -> None:
    Path(path).write_text(format_database(db))
