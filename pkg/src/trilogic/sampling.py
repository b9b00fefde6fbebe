"""Seeded random transformations with small rational entries."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

from .geom import Affinity
from .st import STTransform

GRID = (-3, -2, -1, 1, 2, 3)
DENOMS = (1, 2, 3)


def _entry(rng: random.Random, allow_zero: bool = True) -> Fraction:
    n = rng.choice(GRID + ((0,) if allow_zero else ()))
    return Fraction(n, rng.choice(DENOMS))


def random_affinity(rng: random.Random) -> Affinity:
    """A non-singular affinity; singular draws are rejected."""
    while True:
        a, b, c, d = (_entry(rng) for _ in range(4))
        if a * d - b * c != 0:
            return Affinity(a, b, c, d, _entry(rng), _entry(rng))


def random_st_transform(rng: random.Random, kind: str, times: Iterable[Fraction] = ()) -> STTransform:
    scale = Fraction(rng.choice((1, 2, 3)), rng.choice(DENOMS))
    offset = _entry(rng)
    if kind == "A":
        table = {t: random_affinity(rng) for t in sorted(times)}
        return STTransform("A", scale, offset, snapshot_table=table)
    g = random_affinity(rng)
    matrix = ((g.a, g.b), (g.c, g.d))
    rate = (_entry(rng), _entry(rng)) if kind == "AC" else (0, 0)
    return STTransform(kind, scale, offset, matrix, (g.e, g.f), rate)
