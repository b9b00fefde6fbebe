"""Spatio-temporal kernel: moving points, co-temporal triangles and their predicates."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple

from . import geom
from .errors import MissingSnapshotAffinity, NonCotemporal, SingularMatrix
from .geom import Affinity, Point2, Triangle, rat


class STPoint(NamedTuple):
    x: Fraction
    y: Fraction
    t: Fraction

    def __repr__(self):
        return f"({geom._fmt(self.x)},{geom._fmt(self.y)};{geom._fmt(self.t)})"

    @property
    def xy(self) -> Point2:
        return Point2(self.x, self.y)


class STTriangle(NamedTuple):
    c1: STPoint
    c2: STPoint
    c3: STPoint

    def __repr__(self):
        return f"[{self.c1!r},{self.c2!r},{self.c3!r}]"

    @property
    def time(self) -> Fraction:
        return self.c1.t

    @property
    def flat(self) -> Triangle:
        return Triangle(self.c1.xy, self.c2.xy, self.c3.xy)


def st_point(x, y, t) -> STPoint:
    return STPoint(rat(x), rat(y), rat(t))


def st_triangle(a: STPoint, b: STPoint, c: STPoint) -> STTriangle:
    if not (a.t == b.t == c.t):
        raise NonCotemporal(f"corners {a}, {b}, {c} are not co-temporal")
    return STTriangle(a, b, c)


def lift_triangle(t: Triangle, tau) -> STTriangle:
    tau = rat(tau)
    return STTriangle(*(STPoint(p.x, p.y, tau) for p in t))


def st_point_triangle(p: STPoint) -> STTriangle:
    return STTriangle(p, p, p)


# -- transforms ---------------------------------------------------------------

@dataclass(frozen=True)
class STTransform:
    """A member of one of the groups V (velocity), AC (acceleration) or A (per-snapshot affinity).

    Time maps by ``time_scale * tau + time_offset``.  For V and AC the plane is
    mapped by ``matrix`` plus ``translation_base + tau * translation_rate``
    (the rate is zero for V; ``tau`` is the original time).  For A the plane is
    mapped by ``snapshot_table[tau]``.
    """

    kind: str
    time_scale: Fraction = Fraction(1)
    time_offset: Fraction = Fraction(0)
    matrix: tuple = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    translation_base: tuple = (Fraction(0), Fraction(0))
    translation_rate: tuple = (Fraction(0), Fraction(0))
    snapshot_table: Mapping[Fraction, Affinity] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("V", "AC", "A"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        object.__setattr__(self, "time_scale", rat(self.time_scale))
        object.__setattr__(self, "time_offset", rat(self.time_offset))
        if self.time_scale <= 0:
            raise ValueError("time_scale must be positive so that time order is kept")
        (a, b), (c, d) = self.matrix
        m = ((rat(a), rat(b)), (rat(c), rat(d)))
        object.__setattr__(self, "matrix", m)
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0:
            raise SingularMatrix("spatial matrix is singular")
        object.__setattr__(self, "translation_base", tuple(rat(v) for v in self.translation_base))
        rate = tuple(rat(v) for v in self.translation_rate)
        if self.kind == "V" and any(rate):
            raise ValueError("kind V has no translation rate")
        object.__setattr__(self, "translation_rate", rate)
        object.__setattr__(self, "snapshot_table", {rat(k): v for k, v in self.snapshot_table.items()})

    def spatial_at(self, tau) -> Affinity:
        """The plane affinity this transform applies to the snapshot at ``tau``."""
        tau = rat(tau)
        if self.kind == "A":
            try:
                return self.snapshot_table[tau]
            except KeyError:
                raise MissingSnapshotAffinity(f"no affinity for time {tau}") from None
        (a, b), (c, d) = self.matrix
        e = self.translation_base[0] + tau * self.translation_rate[0]
        f = self.translation_base[1] + tau * self.translation_rate[1]
        return Affinity(a, b, c, d, e, f)

    def time_map(self, tau) -> Fraction:
        return self.time_scale * rat(tau) + self.time_offset


def apply_st(g: STTransform, p: STPoint) -> STPoint:
    q = g.spatial_at(p.t)(p.xy)
    return STPoint(q.x, q.y, g.time_map(p.t))


def apply_st_triangle(g: STTransform, s: STTriangle) -> STTriangle:
    return STTriangle(apply_st(g, s.c1), apply_st(g, s.c2), apply_st(g, s.c3))


# -- triangle predicates ------------------------------------------------------

def cotemp_tri(s1: STTriangle, s2: STTriangle) -> bool:
    return s1.time == s2.time


def part_of_cotemp(s1: STTriangle, s2: STTriangle) -> bool:
    return s1.time == s2.time and geom.part_of(s1.flat, s2.flat)


def tri_eq_st(s1: STTriangle, s2: STTriangle) -> bool:
    return s1.time == s2.time and geom.tri_eq(s1.flat, s2.flat)


def before_tri(s1: STTriangle, s2: STTriangle) -> bool:
    return s1.time <= s2.time


def _time_ratio(t4: Fraction, t5: Fraction, t6: Fraction) -> Fraction | None:
    if t6 == t4:
        return None
    return (t5 - t4) / (t6 - t4)


def cas(s1, s2, s3, s4, s5, s6) -> bool:
    """Barycenters of s1..s3 divide their carrier as the times of s4..s6 divide time."""
    if not (s1.time == s2.time == s3.time):
        return False
    mu = _time_ratio(s4.time, s5.time, s6.time)
    if mu is None:
        return False
    b1, b2, b3 = (geom.barycenter(s.flat) for s in (s1, s2, s3))
    if b1 == b3 or not geom.collinear(b1, b2, b3):
        return False
    return geom.ratio3(b1, b2, b3) == mu


def lex(s1, s2, s3, s4, s5, s6) -> bool:
    """Nested s1 ⊆ s2 ⊆ s3 whose area increments match the time increments in proportion."""
    if not (s1.time == s2.time == s3.time):
        return False
    if not (geom.part_of(s1.flat, s2.flat) and geom.part_of(s2.flat, s3.flat)):
        return False
    a1, a2, a3 = (geom.area(s.flat) for s in (s1, s2, s3))
    if a3 == a1 or s6.time == s4.time:
        return False
    return abs(a2 - a1) / abs(a3 - a1) == abs(s5.time - s4.time) / abs(s6.time - s4.time)


def _velocity(a: STTriangle, b: STTriangle):
    p, q = geom.barycenter(a.flat), geom.barycenter(b.flat)
    dt = b.time - a.time
    return ((q.x - p.x) / dt, (q.y - p.y) / dt)


def sas(s1, s2, s3, s4) -> bool:
    """Barycenters move from s1 to s2 and from s3 to s4 with the same velocity."""
    if not (s1.time < s2.time and s3.time < s4.time):
        return False
    return _velocity(s1, s2) == _velocity(s3, s4)


def no_sp(s1, s2) -> bool:
    """Barycenters occupy the same place, at any times."""
    b1, b2 = geom.barycenter(s1.flat), geom.barycenter(s2.flat)
    return b1 == b2


def lex_by_construction(s1, s2, s3, s4, s5, s6) -> bool:
    """Decide Lex by carrying both inner areas onto a side of s3 and comparing a point ratio."""
    if not (s1.time == s2.time == s3.time):
        return False
    if not (geom.part_of(s1.flat, s2.flat) and geom.part_of(s2.flat, s3.flat)):
        return False
    outer = s3.flat
    if not geom.is_real(outer) or s6.time == s4.time:
        return False
    x1 = geom.transfer_to_side(s1.flat, outer)
    x2 = geom.transfer_to_side(s2.flat, outer)
    if x1 == outer.c3:
        return False
    lam = geom.ratio3(x1, x2, outer.c3)
    return abs(lam) == abs(s5.time - s4.time) / abs(s6.time - s4.time)


# -- point predicates ---------------------------------------------------------

def cotemp(p: STPoint, q: STPoint) -> bool:
    return p.t == q.t


def before(p: STPoint, q: STPoint) -> bool:
    return p.t <= q.t


def eq_space(p: STPoint, q: STPoint) -> bool:
    return p.x == q.x and p.y == q.y


def between_cotemp(p: STPoint, q: STPoint, r: STPoint) -> bool:
    return p.t == q.t == r.t and geom.between(p.xy, q.xy, r.xy)


def eq_cr_st(p1, p2, p3, q1, q2, q3) -> bool:
    """Co-temporal collinear p's divide space as the times of the q's divide time."""
    if not (p1.t == p2.t == p3.t):
        return False
    mu = _time_ratio(q1.t, q2.t, q3.t)
    if mu is None:
        return False
    a, b, c = p1.xy, p2.xy, p3.xy
    if a == c or not geom.collinear(a, b, c):
        return False
    return geom.ratio3(a, b, c) == mu


def _vec(p: STPoint, q: STPoint):
    return (q.x - p.x, q.y - p.y, q.t - p.t)


def _cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot3(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def collinear3(p: STPoint, q: STPoint, r: STPoint) -> bool:
    return not any(_cross3(_vec(p, q), _vec(p, r)))


def between3(p: STPoint, q: STPoint, r: STPoint) -> bool:
    """q on the closed segment [p, r] of space-time."""
    if not collinear3(p, q, r):
        return False
    return all(min(a, c) <= b <= max(a, c) for a, b, c in zip(p, q, r))


def coplanar3(a: STPoint, b: STPoint, c: STPoint, d: STPoint) -> bool:
    return _dot3(_cross3(_vec(a, b), _vec(a, c)), _vec(a, d)) == 0


def lines_meet3(a: STPoint, b: STPoint, c: STPoint, d: STPoint) -> bool:
    """Some point is collinear with (a, b) and with (c, d); a repeated pair spans everything."""
    if a == b or c == d:
        return True
    if not coplanar3(a, b, c, d):
        return False
    if any(_cross3(_vec(a, b), _vec(c, d))):
        return True
    return collinear3(a, b, c)


def time_between(p: STPoint, q: STPoint, r: STPoint) -> bool:
    return min(p.t, r.t) <= q.t <= max(p.t, r.t)


def barycenter_st(u1: STPoint, u2: STPoint, u3: STPoint) -> STPoint | None:
    if not (u1.t == u2.t == u3.t):
        return None
    b = geom.barycenter(Triangle(u1.xy, u2.xy, u3.xy))
    return STPoint(b.x, b.y, u1.t)


def center_om(v: STPoint, u1: STPoint, u2: STPoint, u3: STPoint) -> bool:
    """v is the center of mass of the co-temporal triangle (u1, u2, u3)."""
    return barycenter_st(u1, u2, u3) == v


def reflect3(a: STPoint, m: STPoint) -> STPoint:
    return STPoint(2 * m.x - a.x, 2 * m.y - a.y, 2 * m.t - a.t)


def mid(a: STPoint, m: STPoint, b: STPoint) -> bool:
    """m is the midpoint of a and b."""
    return reflect3(a, m) == b


def same_rel_area_witness(a1, a2, a3, b1, b2, b3, c1, c2, c3):
    """Points (v1, v2) on side (c2, c3) cutting triangles (c1, c2, v) of the inner areas.

    None unless the three triangles are co-temporal, nested a ⊆ b ⊆ c and c is real.
    """
    ta, tb, tc = STTriangle(a1, a2, a3), STTriangle(b1, b2, b3), STTriangle(c1, c2, c3)
    if not (a1.t == a2.t == a3.t == b1.t == b2.t == b3.t == c1.t == c2.t == c3.t):
        return None
    if not (part_of_cotemp(ta, tb) and part_of_cotemp(tb, tc)):
        return None
    outer = geom.area(tc.flat)
    if outer == 0:
        return None
    tau = c1.t

    def place(k: Fraction) -> STPoint:
        return STPoint(c2.x + k * (c3.x - c2.x), c2.y + k * (c3.y - c2.y), tau)

    return place(geom.area(ta.flat) / outer), place(geom.area(tb.flat) / outer)


def same_rel_area(a1, a2, a3, b1, b2, b3, c1, c2, c3, v1, v2) -> bool:
    w = same_rel_area_witness(a1, a2, a3, b1, b2, b3, c1, c2, c3)
    return w is not None and w == (v1, v2)
