"""Finite tensors u = sum u_ij e_i (x) e_j and the algebra maps on them.

``pi`` is the multiplication map, ``diagonal_projection`` the projection P onto
the diagonal and ``section`` the right inverse a -> sum a_j e_j (x) e_j.  The
Rademacher decomposition writes a diagonal tensor as an average of 2^J
elementary tensors, which bounds the projective norm of P(x (x) y).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

import numpy as np

from . import weights as W
from .scalars import GaussianRational, XPos
from .serial import index_from_json, index_to_json
from .truncation import FinSeq, index_key, norm

J_MAX = 16
J_LIMIT = 24
NORM_RECHECK = 4       # terms whose norms are recomputed in full


class ResourceLimit(ValueError):
    """A 2^J expansion larger than the configured guard."""


@dataclass(frozen=True)
class TruncTensor:
    """Sparse coefficients on I x I, sorted, zeros dropped."""

    entries: Tuple[Tuple[object, object, GaussianRational], ...] = ()

    @staticmethod
    def of(data) -> "TruncTensor":
        items = data.items() if isinstance(data, dict) else (((i, j), c) for i, j, c in data)
        acc: Dict[Tuple, GaussianRational] = {}
        for (i, j), c in items:
            acc[(i, j)] = acc.get((i, j), GaussianRational()) + GaussianRational.of(c)
        rows = sorted(((i, j, c) for (i, j), c in acc.items() if c),
                      key=lambda e: (index_key(e[0]), index_key(e[1])))
        return TruncTensor(tuple(rows))

    @staticmethod
    def elementary(i, j, c=1) -> "TruncTensor":
        return TruncTensor.of({(i, j): c})

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def as_dict(self) -> Dict[Tuple, GaussianRational]:
        return {(i, j): c for i, j, c in self.entries}

    def __add__(self, other: "TruncTensor") -> "TruncTensor":
        return TruncTensor.of(list(self.entries) + list(other.entries))

    def __neg__(self) -> "TruncTensor":
        return TruncTensor(tuple((i, j, -c) for i, j, c in self.entries))

    def __sub__(self, other: "TruncTensor") -> "TruncTensor":
        return self + (-other)

    def scale(self, z) -> "TruncTensor":
        z = GaussianRational.of(z)
        return TruncTensor.of([(i, j, z * c) for i, j, c in self.entries])

    def has_zero_diagonal(self) -> bool:
        return all(i != j for i, j, _ in self.entries)

    def to_json(self) -> dict:
        return {"entries": [[index_to_json(i), index_to_json(j), str(c.re), str(c.im)]
                            for i, j, c in self.entries]}

    @staticmethod
    def from_json(d: dict) -> "TruncTensor":
        return TruncTensor.of([(index_from_json(i), index_from_json(j),
                                GaussianRational(Fraction(re), Fraction(im)))
                               for i, j, re, im in d["entries"]])


def multiply(x: FinSeq, y: FinSeq) -> FinSeq:
    """Coordinatewise product."""
    yd = y.as_dict()
    return FinSeq.of([(i, c * yd[i]) for i, c in x if i in yd])


def rank_one(x: FinSeq, y: FinSeq) -> TruncTensor:
    return TruncTensor.of([(i, j, a * b) for i, a in x for j, b in y])


def pi(u: TruncTensor) -> FinSeq:
    """The multiplication map: e_i (x) e_j -> e_i e_j, i.e. the diagonal."""
    return FinSeq.of([(i, c) for i, j, c in u if i == j])


def diagonal_projection(u: TruncTensor) -> TruncTensor:
    return TruncTensor(tuple(e for e in u.entries if e[0] == e[1]))


def section(a: FinSeq) -> TruncTensor:
    """sum a_j e_j (x) e_j, a right inverse of pi."""
    return TruncTensor.of([(i, i, c) for i, c in a])


def kernel_basis(indices) -> List[Tuple]:
    """The truncated basis {e_i (x) e_j : i != j} of ker pi over the given indices."""
    idx = sorted(set(indices), key=index_key)
    return [(i, j) for i in idx for j in idx if i != j]


# --------------------------------------------------------------------------
# Rademacher averaging


def sign_matrix(J: int) -> np.ndarray:
    """All 2^J sign patterns as rows; pattern k flips coordinate j when bit j of k is set."""
    k = np.arange(1 << J, dtype=np.int64)[:, None]
    bits = (k >> np.arange(J, dtype=np.int64)[None, :]) & 1
    return (1 - 2 * bits).astype(np.int64)


def _signed(support, coeffs, signs) -> FinSeq:
    return FinSeq.of([(i, c if s > 0 else -c) for i, c, s in zip(support, coeffs, signs)])


@dataclass(frozen=True)
class Decomposition:
    """sum over sign patterns eps of weight * (sum eps_j x_j e_j) (x) (sum eps_j y_j e_j)."""

    support: Tuple
    x: Tuple[GaussianRational, ...]
    y: Tuple[GaussianRational, ...]
    signs: np.ndarray = field(compare=False, repr=False)

    @property
    def J(self) -> int:
        return len(self.support)

    @property
    def weight(self) -> Fraction:
        return Fraction(1, 1 << self.J)

    def __len__(self) -> int:
        return 1 << self.J

    def terms(self) -> Iterator[Tuple[Fraction, FinSeq, FinSeq]]:
        w = self.weight
        for row in self.signs:
            yield w, _signed(self.support, self.x, row), _signed(self.support, self.y, row)

    def expand(self) -> TruncTensor:
        """Sum of all terms, coordinate by coordinate.

        Entry (a, b) collects w * sum_eps eps_a eps_b * x_a y_b; the integer
        sums over eps form the Gram matrix of the sign matrix.
        """
        gram = self.signs.T @ self.signs
        w = self.weight
        return TruncTensor.of([
            (self.support[a], self.support[b], self.x[a] * self.y[b] * (w * int(gram[a, b])))
            for a in range(self.J) for b in range(self.J) if gram[a, b]
        ])

    def expand_naive(self) -> TruncTensor:
        """Term-by-term expansion, for cross-checking :meth:`expand` on small J."""
        acc: Dict[Tuple, GaussianRational] = {}
        for w, xs, ys in self.terms():
            for (i, j, c) in rank_one(xs, ys):
                acc[(i, j)] = acc.get((i, j), GaussianRational()) + c * w
        return TruncTensor.of(acc)

    def target(self) -> TruncTensor:
        return section(multiply(FinSeq.of(zip(self.support, self.x)),
                                FinSeq.of(zip(self.support, self.y))))

    def to_json(self) -> dict:
        return {"support": [index_to_json(i) for i in self.support],
                "x": [[str(c.re), str(c.im)] for c in self.x],
                "y": [[str(c.re), str(c.im)] for c in self.y],
                "terms": len(self), "weight": str(self.weight)}


def rademacher_decomposition(x: FinSeq, y: FinSeq, J_max: int = J_MAX) -> Decomposition:
    """Average of (sum eps_j x_j e_j) (x) (sum eps_j y_j e_j) over all sign patterns.

    Its expansion is sum_j x_j y_j e_j (x) e_j = P(x (x) y).
    """
    if J_max > J_LIMIT:
        raise ResourceLimit(f"J_max = {J_max} exceeds the hard limit {J_LIMIT}")
    support = tuple(sorted(set(x.support) | set(y.support), key=index_key))
    J = len(support)
    if J > J_max:
        raise ResourceLimit(f"common support has J = {J} > J_max = {J_max} coordinates; "
                            "the expansion would need 2^J terms")
    xd, yd = x.as_dict(), y.as_dict()
    zero = GaussianRational()
    return Decomposition(support, tuple(xd.get(i, zero) for i in support),
                         tuple(yd.get(i, zero) for i in support), sign_matrix(J))


@dataclass(frozen=True)
class ProjectionCertificate:
    """||P(x (x) y)||_pi <= bound, witnessed by a Rademacher decomposition.

    Every term has factor norms equal to ||x||_{n,p} and ||y||_{n,p}; the
    weights sum to 1, so the bound is their product.
    """

    bound: XPos
    decomposition: Decomposition
    x_norm: XPos
    y_norm: XPos
    verified: bool

    def __iter__(self):
        return iter((self.bound, self.decomposition))

    def to_json(self) -> dict:
        return {"bound": str(self.bound), "x_norm": str(self.x_norm),
                "y_norm": str(self.y_norm), "verified": self.verified,
                "decomposition": self.decomposition.to_json()}


def projection_norm_certificate(F: W.WeightFamily, n: int, p, x: FinSeq, y: FinSeq,
                                J_max: int = J_MAX) -> ProjectionCertificate:
    dec = rademacher_decomposition(x, y, J_max)
    nx, ny = norm(F, n, p, x), norm(F, n, p, y)
    verified = dec.expand() == dec.target()
    # a weighted norm only sees |x_i| at each index, so equal |x_i|^2 gives equal norms;
    # the first few terms are also recomputed through norm() as a cross-check
    ax = {i: c.abs2() for i, c in x}
    ay = {i: c.abs2() for i, c in y}
    for k, (_, xs, ys) in enumerate(dec.terms()):
        if {i: c.abs2() for i, c in xs} != ax or {i: c.abs2() for i, c in ys} != ay:
            verified = False
            break
        if k < NORM_RECHECK and (norm(F, n, p, xs) != nx or norm(F, n, p, ys) != ny):
            verified = False
            break
    return ProjectionCertificate(nx * ny, dec, nx, ny, verified)
