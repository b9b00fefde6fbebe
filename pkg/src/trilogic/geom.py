"""Exact planar kernel: points, triangles, affinities and the predicates on them.

All coordinates are :class:`fractions.Fraction`.  Orientation and collinearity
are decided by the exact sign of a 2x2 determinant.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    DegenerateConstruction,
    DegenerateSpan,
    NotCollinear,
    SingularMatrix,
)

Rat = Fraction


def rat(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


class Point2(NamedTuple):
    x: Fraction
    y: Fraction

    def __repr__(self):
        return f"({_fmt(self.x)},{_fmt(self.y)})"


class Triangle(NamedTuple):
    c1: Point2
    c2: Point2
    c3: Point2

    def __repr__(self):
        return f"[{self.c1!r},{self.c2!r},{self.c3!r}]"


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def point(x, y) -> Point2:
    return Point2(rat(x), rat(y))


def triangle(a, b, c) -> Triangle:
    """Build a triangle from three coordinate pairs."""
    return Triangle(point(*a), point(*b), point(*c))


def point_triangle(p: Point2) -> Triangle:
    return Triangle(p, p, p)


@dataclass(frozen=True)
class Affinity:
    """Maps (x, y) to (a*x + b*y + e, c*x + d*y + f)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction = Fraction(0)
    f: Fraction = Fraction(0)

    def __post_init__(self):
        for name in "abcdef":
            object.__setattr__(self, name, rat(getattr(self, name)))
        if self.det == 0:
            raise SingularMatrix(f"affinity with zero determinant: {self}")

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __call__(self, p: Point2) -> Point2:
        return Point2(self.a * p.x + self.b * p.y + self.e, self.c * p.x + self.d * p.y + self.f)

    def inverse(self) -> "Affinity":
        k = self.det
        a, b, c, d = self.d / k, -self.b / k, -self.c / k, self.a / k
        return Affinity(a, b, c, d, -(a * self.e + b * self.f), -(c * self.e + d * self.f))

    def compose(self, other: "Affinity") -> "Affinity":
        """Return ``self`` after ``other``."""
        return Affinity(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.a * other.e + self.b * other.f + self.e,
            self.c * other.e + self.d * other.f + self.f,
        )


IDENTITY = Affinity(1, 0, 0, 1, 0, 0)


class Line(NamedTuple):
    """The line A*x + B*y = C, normalized so the first nonzero of A, B is 1."""

    A: Fraction
    B: Fraction
    C: Fraction

    @classmethod
    def make(cls, A, B, C) -> "Line":
        A, B, C = rat(A), rat(B), rat(C)
        if A == 0 and B == 0:
            raise ValueError("line needs (A, B) != (0, 0)")
        k = A if A != 0 else B
        return cls(A / k, B / k, C / k)

    @classmethod
    def through(cls, p: Point2, q: Point2) -> "Line":
        if p == q:
            raise DegenerateSpan(f"no unique line through {p} and {q}")
        A = q.y - p.y
        B = p.x - q.x
        return cls.make(A, B, A * p.x + B * p.y)

    def direction(self) -> tuple[Fraction, Fraction]:
        return (self.B, -self.A)

    def side(self, p: Point2) -> int:
        v = self.A * p.x + self.B * p.y - self.C
        return (v > 0) - (v < 0)

    def contains(self, p: Point2) -> bool:
        return self.A * p.x + self.B * p.y == self.C

    def apply(self, f: Affinity) -> "Line":
        """Image of this line under ``f``."""
        p = self._anchor()
        dx, dy = self.direction()
        q = Point2(p.x + dx, p.y + dy)
        return Line.through(f(p), f(q))

    def _anchor(self) -> Point2:
        if self.A != 0:
            return Point2(self.C / self.A, Fraction(0))
        return Point2(Fraction(0), self.C / self.B)


def orient(p: Point2, q: Point2, r: Point2) -> Fraction:
    """Twice the signed area of (p, q, r); positive when counter-clockwise."""
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def orient_sign(p: Point2, q: Point2, r: Point2) -> int:
    """Sign of ``orient`` computed over integers (no gcd normalisation per step)."""
    pxn, pxd = p.x.numerator, p.x.denominator
    pyn, pyd = p.y.numerator, p.y.denominator
    qxn, qxd = q.x.numerator, q.x.denominator
    qyn, qyd = q.y.numerator, q.y.denominator
    rxn, rxd = r.x.numerator, r.x.denominator
    ryn, ryd = r.y.numerator, r.y.denominator
    a1, b1 = qxn * pxd - pxn * qxd, qxd * pxd
    a2, b2 = ryn * pyd - pyn * ryd, ryd * pyd
    a3, b3 = qyn * pyd - pyn * qyd, qyd * pyd
    a4, b4 = rxn * pxd - pxn * rxd, rxd * pxd
    v = a1 * a2 * b3 * b4 - a3 * a4 * b1 * b2
    return (v > 0) - (v < 0)


def cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def sub(p: Point2, q: Point2) -> tuple[Fraction, Fraction]:
    return (p.x - q.x, p.y - q.y)


def between(p: Point2, q: Point2, r: Point2) -> bool:
    """q lies on the closed segment [p, r]."""
    if orient_sign(p, q, r) != 0:
        return False
    return (min(p.x, r.x) <= q.x <= max(p.x, r.x)) and (min(p.y, r.y) <= q.y <= max(p.y, r.y))


def collinear(p: Point2, q: Point2, r: Point2) -> bool:
    return orient_sign(p, q, r) == 0


def _extremes(pts: Sequence[Point2]) -> tuple[Point2, Point2]:
    # collinear input: lexicographic order is monotone along the carrier
    return min(pts), max(pts)


def in_triangle(p: Point2, t: Triangle) -> bool:
    a, b, c = t
    o = orient_sign(a, b, c)
    if o == 0:
        lo, hi = _extremes(t)
        return between(lo, p, hi)
    return orient_sign(a, b, p) != -o and orient_sign(b, c, p) != -o and orient_sign(c, a, p) != -o


def part_of(t1: Triangle, t2: Triangle) -> bool:
    return all(in_triangle(c, t2) for c in t1)


def tri_eq(t1: Triangle, t2: Triangle) -> bool:
    """Equality of drawings."""
    return part_of(t1, t2) and part_of(t2, t1)


def area(t: Triangle) -> Fraction:
    return abs(orient(*t)) / 2


def barycenter(t: Triangle) -> Point2:
    a, b, c = t
    return Point2((a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3)


def midpoint(p: Point2, q: Point2) -> Point2:
    return Point2((p.x + q.x) / 2, (p.y + q.y) / 2)


def ratio3(a: Point2, b: Point2, c: Point2) -> Fraction:
    """The scalar λ with b = a + λ(c − a)."""
    if a == c:
        raise DegenerateSpan(f"ratio undefined: {a} equals {c}")
    if orient_sign(a, b, c) != 0:
        raise NotCollinear(f"{a}, {b}, {c} are not collinear")
    dx, dy = c.x - a.x, c.y - a.y
    if dx != 0:
        return (b.x - a.x) / dx
    return (b.y - a.y) / dy


def is_point(t: Triangle) -> bool:
    return t.c1 == t.c2 == t.c3


def is_real(t: Triangle) -> bool:
    return orient_sign(*t) != 0


def is_seg(t: Triangle) -> bool:
    return not is_real(t) and not is_point(t)


def corner_points(t: Triangle) -> list[Point2]:
    """Vertices of the drawing of ``t`` (1, 2 or 3 points, sorted)."""
    if is_real(t):
        return sorted(set(t))
    lo, hi = _extremes(t)
    return [lo] if lo == hi else [lo, hi]


def drawing_key(t: Triangle) -> tuple[Point2, ...]:
    """Hashable key equal for two triangles exactly when their drawings are equal."""
    return tuple(corner_points(t))


def corner_p(p1: Triangle, p2: Triangle, p3: Triangle, t: Triangle) -> bool:
    """p1, p2, p3 are point triangles whose convex hull is the drawing of t."""
    if not (is_point(p1) and is_point(p2) and is_point(p3)):
        return False
    return tri_eq(Triangle(p1.c1, p2.c1, p3.c1), t)


def segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool:
    """Closed segments [a, b] and [c, d] share a point."""
    o1, o2 = orient_sign(a, b, c), orient_sign(a, b, d)
    o3, o4 = orient_sign(c, d, a), orient_sign(c, d, b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True
    return between(a, c, b) or between(a, d, b) or between(c, a, d) or between(c, b, d)


def _edges(t: Triangle):
    return ((t.c1, t.c2), (t.c2, t.c3), (t.c3, t.c1))


def intersects(t1: Triangle, t2: Triangle) -> bool:
    """The closed drawings share at least one point."""
    if any(in_triangle(c, t2) for c in t1) or any(in_triangle(c, t1) for c in t2):
        return True
    return any(segments_intersect(a, b, c, d) for a, b in _edges(t1) for c, d in _edges(t2))


def _parallel(p: Point2, q: Point2, r: Point2, s: Point2) -> bool:
    return cross(sub(q, p), sub(s, r)) == 0


def sim(t1: Triangle, t2: Triangle) -> bool:
    """Both real and some corner matching makes every side of t1 parallel to its partner in t2."""
    if not (is_real(t1) and is_real(t2)):
        return False
    for a, b, c in permutations(t2):
        if _parallel(t1.c1, t1.c2, a, b) and _parallel(t1.c2, t1.c3, b, c) and _parallel(t1.c3, t1.c1, c, a):
            return True
    return False


def apply_affinity(f: Affinity, t: Triangle) -> Triangle:
    return Triangle(f(t.c1), f(t.c2), f(t.c3))


def line_intersection(l1: Line, l2: Line) -> Point2 | None:
    det = l1.A * l2.B - l1.B * l2.A
    if det == 0:
        return None
    return Point2((l1.C * l2.B - l1.B * l2.C) / det, (l1.A * l2.C - l1.C * l2.A) / det)


def segment_intersection_point(a: Point2, b: Point2, c: Point2, d: Point2) -> Point2 | None:
    """The single common point of two closed segments, or None (disjoint or overlapping)."""
    if a == b or c == d:
        return None
    if not segments_intersect(a, b, c, d):
        return None
    p = line_intersection(Line.through(a, b), Line.through(c, d))
    return p


def equal_area_reshape(t: Triangle, l: Line) -> Triangle:
    """Slide c3 parallel to side (c1, c2) until a side through c3 is parallel to ``l``.

    The result has the same base and height, so the same area.
    """
    p, q, r = t
    if not is_real(t):
        raise DegenerateConstruction(f"cannot reshape degenerate triangle {t}")
    d = l.direction()
    if cross(sub(r, p), d) == 0 or cross(sub(r, q), d) == 0:
        return t
    base = sub(q, p)
    denom = cross(base, d)
    if denom == 0:
        raise DegenerateConstruction(f"{l} is parallel to the base of {t}; every apex on it collapses")
    s = -cross(sub(r, p), d) / denom
    r2 = Point2(r.x + s * base[0], r.y + s * base[1])
    out = Triangle(p, q, r2)
    if not is_real(out):
        raise DegenerateConstruction(f"reshaping {t} along {l} collapses")
    return out


def transfer_to_side(inner: Triangle, outer: Triangle) -> Point2:
    """Point x on the line (c2, c3) of ``outer`` with area(c1, c2, x) = area(inner).

    Built only from parallel moves and a ratio transfer: ``inner`` is reshaped
    twice so two of its sides run parallel to the sides at c2 of ``outer``,
    translated onto c2, and its area carried onto the side by a ratio.
    """
    p, q, r = outer
    if not is_real(outer):
        raise DegenerateConstruction(f"outer triangle {outer} is degenerate")
    if not is_real(inner):
        return q
    step = inner if _has_side_parallel(inner, q, p) else equal_area_reshape(inner, Line.through(q, p))
    a, b, c = step
    # reorder so the side parallel to qp is the base of the next reshape
    if _parallel(a, b, q, p):
        base = (a, b, c)
    elif _parallel(a, c, q, p):
        base = (a, c, b)
    else:
        base = (b, c, a)
    step = equal_area_reshape(Triangle(*base), Line.through(q, r))
    s, t, u = _apex_order(step, q, p, r)
    s2 = Point2(s.x + q.x - t.x, s.y + q.y - t.y)
    u2 = Point2(u.x + q.x - t.x, u.y + q.y - t.y)
    alpha = ratio3(q, s2, p)
    beta = ratio3(q, u2, r)
    if alpha < 0:
        s2 = Point2(2 * q.x - s2.x, 2 * q.y - s2.y)
    if beta < 0:
        u2 = Point2(2 * q.x - u2.x, 2 * q.y - u2.y)
    rho = ratio3(q, s2, p)
    return Point2(q.x + rho * (u2.x - q.x), q.y + rho * (u2.y - q.y))


def _has_side_parallel(t: Triangle, q: Point2, p: Point2) -> bool:
    a, b, c = t
    return _parallel(a, b, q, p) or _parallel(a, c, q, p) or _parallel(b, c, q, p)


def _apex_order(t: Triangle, q: Point2, p: Point2, r: Point2):
    """Return (s, apex, u) where the apex's sides run parallel to qp and qr."""
    for s, apex, u in permutations(t):
        if _parallel(apex, s, q, p) and _parallel(apex, u, q, r):
            return s, apex, u
    raise DegenerateConstruction(f"{t} has no corner with sides parallel to both carriers")


def convex_hull(points: Iterable[Point2]) -> list[Point2]:
    """Counter-clockwise hull without collinear vertices, starting at the smallest point."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out: list[Point2] = []
        for p in seq:
            while len(out) >= 2 and orient_sign(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull
