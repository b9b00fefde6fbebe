"""Drawings of unary triangle relations, their boundaries, the affine finite
triangle representation (AfTr) and SVG export."""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from . import geom
from .errors import ArityError
from .geom import Line, Point2, Triangle
from .model import Database, Relation, canonical_triangle

Polygon = tuple[Point2, ...]


@dataclass(frozen=True)
class Cell:
    vertices: Polygon
    inside: bool

    @property
    def sample(self) -> Point2:
        n = len(self.vertices)
        return Point2(sum(p.x for p in self.vertices) / n, sum(p.y for p in self.vertices) / n)


@dataclass(frozen=True)
class Region:
    """A finite union of closed triangles with its carrier-line arrangement."""

    sources: tuple[Triangle, ...]
    lines: tuple[Line, ...]
    cells: tuple[Cell, ...]

    def __contains__(self, p: Point2) -> bool:
        return any(geom.in_triangle(p, t) for t in self.sources)

    @property
    def real(self) -> list[Triangle]:
        return [t for t in self.sources if geom.is_real(t)]

    @property
    def inside_cells(self) -> list[Cell]:
        return [c for c in self.cells if c.inside]

    def covered_2d(self, p: Point2) -> bool:
        return any(geom.in_triangle(p, t) for t in self.real)


@dataclass(frozen=True)
class BoundaryPieces:
    edges: tuple[tuple[Point2, Point2], ...]
    isolated: tuple[tuple[Point2, Point2], ...]
    points: tuple[Point2, ...]

    @property
    def segments(self) -> tuple[tuple[Point2, Point2], ...]:
        return tuple(_merge(list(self.edges) + list(self.isolated)))


# -- arrangement ------------------------------------------------------------------------

def _frame(points: list[Point2]) -> Polygon:
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    w, h = max(xs) - min(xs), max(ys) - min(ys)
    pad = max(w, h) / 10 or Fraction(1)
    lo_x, hi_x = min(xs) - max(w / 10, pad), max(xs) + max(w / 10, pad)
    lo_y, hi_y = min(ys) - max(h / 10, pad), max(ys) + max(h / 10, pad)
    return (Point2(lo_x, lo_y), Point2(hi_x, lo_y), Point2(hi_x, hi_y), Point2(lo_x, hi_y))


def _split(poly: Polygon, line: Line) -> list[Polygon]:
    sides = [line.side(p) for p in poly]
    if all(s >= 0 for s in sides) or all(s <= 0 for s in sides):
        return [poly]
    pos: list[Point2] = []
    neg: list[Point2] = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp, sq = sides[i], sides[(i + 1) % n]
        if sp >= 0:
            pos.append(p)
        if sp <= 0:
            neg.append(p)
        if sp * sq < 0:
            x = geom.line_intersection(line, Line.through(p, q))
            pos.append(x)
            neg.append(x)
    return [tuple(pos), tuple(neg)]


def arrangement(lines: Iterable[Line], frame: Polygon) -> list[Polygon]:
    """Convex cells cut from ``frame`` by the given lines."""
    cells = [frame]
    for line in lines:
        cells = [piece for c in cells for piece in _split(c, line)]
    return [tuple(geom.convex_hull(c)) for c in cells]


def _carriers(sources: Iterable[Triangle]) -> list[Line]:
    out = set()
    for t in sources:
        if geom.is_real(t):
            a, b, c = t
            out.update((Line.through(a, b), Line.through(b, c), Line.through(c, a)))
        elif geom.is_seg(t):
            p, q = geom.corner_points(t)
            out.add(Line.through(p, q))
    return sorted(out)


def _unary(r) -> list[Triangle]:
    if isinstance(r, Relation):
        if r.arity != 1:
            raise ArityError(f"drawings need a unary relation, {r.name} has arity {r.arity}")
        return sorted({canonical_triangle(tup[0]) for tup in r.tuples})
    return sorted({canonical_triangle(t) for t in r})


def _region(sources: list[Triangle], lines: list[Line]) -> Region:
    if not sources:
        return Region((), (), ())
    real = [t for t in sources if geom.is_real(t)]
    frame = _frame([p for t in sources for p in t])
    cells = []
    for poly in arrangement(lines, frame):
        if len(poly) < 3:
            continue
        sample = Cell(poly, False).sample
        cells.append(Cell(poly, any(geom.in_triangle(sample, t) for t in real)))
    return Region(tuple(sources), tuple(lines), tuple(cells))


def drawing(r) -> Region:
    """Region covered by a unary relation (or an iterable of triangles)."""
    sources = _unary(r)
    return _region(sources, _carriers(sources))


# -- boundary ---------------------------------------------------------------------------


def _merge(segments: list[tuple[Point2, Point2]]) -> list[tuple[Point2, Point2]]:
    """Merge overlapping or touching collinear segments into maximal ones."""
    by_line: dict[Line, list[tuple[Point2, Point2]]] = {}
    for p, q in segments:
        by_line.setdefault(Line.through(p, q), []).append(tuple(sorted((p, q))))
    out = []
    for segs in by_line.values():
        segs.sort()
        cur_lo, cur_hi = segs[0]
        for lo, hi in segs[1:]:
            if lo <= cur_hi:
                cur_hi = max(cur_hi, hi)
            else:
                out.append((cur_lo, cur_hi))
                cur_lo, cur_hi = lo, hi
        out.append((cur_lo, cur_hi))
    return sorted(out)


def _cut_points(line: Line, lo: Point2, hi: Point2, lines: Iterable[Line], extra: Iterable[Point2] = ()) -> list[Point2]:
    pts = {lo, hi}
    for other in lines:
        x = geom.line_intersection(line, other)
        if x is not None and lo < x < hi:
            pts.add(x)
    pts.update(p for p in extra if line.contains(p) and lo < p < hi)
    return sorted(pts)


def _isolated_segments(reg: Region, lines: Iterable[Line]) -> list[tuple[Point2, Point2]]:
    lines = list(lines)
    pieces = []
    for t in reg.sources:
        if not geom.is_seg(t):
            continue
        lo, hi = geom.corner_points(t)
        line = Line.through(lo, hi)
        cuts = _cut_points(line, lo, hi, lines)
        for a, b in zip(cuts, cuts[1:]):
            if not reg.covered_2d(geom.midpoint(a, b)):
                pieces.append((a, b))
    return pieces


def boundary(reg: Region) -> BoundaryPieces:
    """Boundary segments of the 2-D part, uncovered segment pieces and uncovered points."""
    count: dict[tuple[Point2, Point2], int] = {}
    for cell in reg.inside_cells:
        vs = cell.vertices
        for i in range(len(vs)):
            e = tuple(sorted((vs[i], vs[(i + 1) % len(vs)])))
            count[e] = count.get(e, 0) + 1
    edges = _merge([e for e, k in count.items() if k == 1]) if count else []
    # an uncovered piece meets the closed 2-D part in at most its endpoints
    isolated = _merge(_isolated_segments(reg, reg.lines))
    seg_sources = [t for t in reg.sources if geom.is_seg(t)]
    points = sorted({
        t.c1 for t in reg.sources
        if geom.is_point(t) and not reg.covered_2d(t.c1) and not any(geom.in_triangle(t.c1, s) for s in seg_sources)
    })
    return BoundaryPieces(tuple(edges), tuple(isolated), tuple(points))


# -- AfTr -------------------------------------------------------------------------------

def aftr(r, name: str | None = None) -> Relation:
    """A finite set of triangles with the same drawing as ``r``.

    Carriers of the boundary segments cut the plane into convex cells; each
    cell inside the drawing contributes every triangle on three of its
    vertices.  Uncovered segment pieces, split where carriers cross them, are
    emitted as degenerate triangles: a source triangle with exactly that
    drawing when one exists, otherwise (a, midpoint, b).  Uncovered points are
    emitted as point triangles.
    """
    if isinstance(r, Relation) and name is None:
        name = r.name
    reg = drawing(r)
    pieces = boundary(reg)
    carriers = sorted({Line.through(p, q) for p, q in pieces.segments})
    out: set[Triangle] = set()
    carved = _region(list(reg.sources), carriers)
    for cell in carved.inside_cells:
        for a, b, c in combinations(cell.vertices, 3):
            out.add(canonical_triangle(Triangle(a, b, c)))
    by_drawing: dict = {}
    for t in reg.sources:
        if geom.is_seg(t):
            by_drawing.setdefault(geom.drawing_key(t), []).append(t)
    for lo, hi in pieces.isolated:
        line = Line.through(lo, hi)
        cuts = _cut_points(line, lo, hi, carriers)
        for a, b in zip(cuts, cuts[1:]):
            same = by_drawing.get((a, b))
            if same:
                out.update(canonical_triangle(t) for t in same)
            else:
                out.add(canonical_triangle(Triangle(a, geom.midpoint(a, b), b)))
    for p in pieces.points:
        out.add(Triangle(p, p, p))
    return Relation.of(name or "R", 1, [(t,) for t in sorted(out)])


def is_bounded(r) -> bool:
    """Some triangle contains every member: for a finite set, a triangle around the corner hull."""
    tris = _unary(r)
    if not tris:
        return True
    frame = _frame([p for t in tris for p in t])
    lo, _, hi, _ = frame
    # the triangle (lo, lo + 2w, lo + 2h) contains the frame rectangle
    w, h = hi.x - lo.x, hi.y - lo.y
    big = Triangle(lo, Point2(lo.x + 2 * w, lo.y), Point2(lo.x, lo.y + 2 * h))
    return all(geom.part_of(t, big) for t in tris)


def orbit_count(r) -> int:
    return len(_unary(r))


def is_finite(r) -> bool:
    """A materialized relation always holds finitely many orbits."""
    orbit_count(r)
    return True


# -- SVG --------------------------------------------------------------------------------

def format_number(q: Fraction) -> str:
    """Exact decimal when the expansion terminates, otherwise 12 significant digits."""
    q = Fraction(q)
    d = q.denominator
    for f in (2, 5):
        while d % f == 0:
            d //= f
    if d == 1:
        with localcontext() as ctx:
            ctx.prec = 200
            text = format(Decimal(q.numerator) / Decimal(q.denominator), "f")
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return "0" if text in ("-0", "") else text
    with localcontext() as ctx:
        ctx.prec = 12
        text = format(Decimal(q.numerator) / Decimal(q.denominator), "f")
    return text.rstrip("0").rstrip(".") if "." in text else text


_PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f")


def _layers(obj) -> list[tuple[str, list[Triangle]]]:
    if isinstance(obj, Database):
        return [(n, _unary(obj.relations[n])) for n in sorted(obj.relations) if obj.relations[n].arity == 1]
    if isinstance(obj, Relation):
        return [(obj.name, _unary(obj))]
    if isinstance(obj, Region):
        return [("region", sorted(c.vertices for c in obj.inside_cells))]
    return [("triangles", _unary(obj))]


def export_svg(obj) -> str:
    """SVG 1.1 text for a database, relation, region or iterable of triangles.

    The y axis points up, as in the plane.
    """
    layers = _layers(obj)
    pts = [p for _, polys in layers for poly in polys for p in poly]
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if pts:
        xs = [p.x for p in pts]
        ys = [-p.y for p in pts]
        w, h = max(xs) - min(xs), max(ys) - min(ys)
        pad = max(w, h) / 20 or Fraction(1, 2)
        px, py = (w / 20 or pad), (h / 20 or pad)
        box = (min(xs) - px, min(ys) - py, w + 2 * px, h + 2 * py)
        stroke = max(box[2], box[3]) / 200
    else:
        box = (Fraction(0), Fraction(0), Fraction(1), Fraction(1))
        stroke = Fraction(1, 200)
    lines.append('<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="%s">' % " ".join(format_number(v) for v in box))
    if pts:
        lines.append("<style>")
        lines.append("polygon { fill-opacity: 0.35; stroke-width: %s; stroke-linejoin: round; }" % format_number(stroke))
        for i, (name, _) in enumerate(layers):
            color = _PALETTE[i % len(_PALETTE)]
            lines.append(f".layer-{i} polygon {{ fill: {color}; stroke: {color}; }}")
        lines.append("</style>")
        for i, (name, polys) in enumerate(layers):
            lines.append(f'<g class="layer-{i}" id="{name}">')
            for poly in polys:
                coords = " ".join(f"{format_number(p.x)},{format_number(-p.y)}" for p in poly)
                lines.append(f'<polygon points="{coords}"/>')
            lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
