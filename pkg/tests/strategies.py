"""Hypothesis strategies for exact rational geometry."""
from fractions import Fraction

from hypothesis import strategies as st

from trilogic.geom import Affinity, Point2, Triangle, is_real
from trilogic.st import STPoint, STTriangle

rats = st.builds(Fraction, st.integers(min_value=-16, max_value=16), st.sampled_from([1, 2, 3, 4]))
small = st.integers(min_value=-4, max_value=4)

points = st.builds(Point2, rats, rats)
grid_points = st.builds(lambda x, y: Point2(Fraction(x), Fraction(y)), small, small)


def _tri(ps):
    return Triangle(*ps)


triangles = st.one_of(
    st.tuples(points, points, points),
    st.tuples(grid_points, grid_points, grid_points),
    st.tuples(grid_points, grid_points).map(lambda ab: (ab[0], ab[0], ab[1])),
    grid_points.map(lambda p: (p, p, p)),
).map(_tri)

real_triangles = st.tuples(points, points, points).map(_tri).filter(is_real)


entries = st.sampled_from([Fraction(n, d) for n in range(-3, 4) for d in (1, 2, 3)])
nonzero = st.sampled_from([Fraction(n, d) for n in (-3, -2, -1, 1, 2, 3) for d in (1, 2)])


@st.composite
def affinities(draw):
    # L·U with nonzero diagonals, optionally with swapped rows: never singular
    a, d = draw(nonzero), draw(nonzero)
    b, c = draw(entries), draw(entries)
    m = [[a, a * b], [c, c * b + d]]
    if draw(st.booleans()):
        m.reverse()
    return Affinity(m[0][0], m[0][1], m[1][0], m[1][1], draw(rats), draw(rats))


affinities = affinities()

times = st.sampled_from([Fraction(0), Fraction(1), Fraction(3), Fraction(1, 2)])


@st.composite
def st_triangles(draw, tau=None):
    t = draw(triangles)
    tau = draw(times) if tau is None else tau
    return STTriangle(*(STPoint(p.x, p.y, tau) for p in t))


st_points = st.builds(STPoint, rats, rats, times)
