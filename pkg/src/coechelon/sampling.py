"""Seeded random elements for the invariant suites.

Everything draws from a caller-supplied :class:`random.Random`, so a suite run
is a function of its seed.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Sequence

from .scalars import GaussianRational
from .tensoralg import TruncTensor
from .truncation import FinSeq


def random_fraction(rng: random.Random, bound: int = 9, den: int = 7) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def random_gauss(rng: random.Random, bound: int = 9, den: int = 7) -> GaussianRational:
    return GaussianRational(random_fraction(rng, bound, den), random_fraction(rng, bound, den))


def nonzero_gauss(rng: random.Random, bound: int = 9, den: int = 7) -> GaussianRational:
    while True:
        z = random_gauss(rng, bound, den)
        if z:
            return z


def random_finseq(rng: random.Random, pool: Sequence, size: int) -> FinSeq:
    """``size`` distinct indices from ``pool`` with nonzero coefficients."""
    idx = rng.sample(list(pool), min(size, len(pool)))
    return FinSeq.of([(i, nonzero_gauss(rng)) for i in idx])


def random_tensor(rng: random.Random, pool: Sequence, size: int) -> TruncTensor:
    pool = list(pool)
    pairs = {(rng.choice(pool), rng.choice(pool)) for _ in range(size)}
    # a few diagonal entries so that pi and P see something
    for i in rng.sample(pool, min(2, len(pool))):
        pairs.add((i, i))
    return TruncTensor.of([(i, j, random_gauss(rng)) for i, j in sorted(pairs)])


def nat_pool(h: int) -> List[int]:
    return list(range(1, h + 1))


def grid_pool(h: int) -> List[tuple]:
    return [(i, j) for i in range(1, h + 1) for j in range(1, h + 1)]
