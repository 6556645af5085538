"""Finitely supported sequences and the weighted norms of k_p(V) on them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from . import weights as W
from .scalars import ONE, P_INF, ZERO, GaussianRational, XPos, is_sup_order, parse_order
from .serial import gauss_from_json, gauss_to_json, index_from_json, index_to_json


def index_key(idx):
    """A total order on indices of N, N x N and disjoint unions."""
    if isinstance(idx, bool):
        raise TypeError("boolean index")
    if isinstance(idx, int):
        return (0, idx)
    if isinstance(idx, str):
        return (1, idx)
    if isinstance(idx, tuple):
        return (2, tuple(index_key(x) for x in idx))
    raise TypeError(f"unsupported index {idx!r}")


@dataclass(frozen=True)
class FinSeq:
    """A finitely supported sequence with exact Gaussian-rational coefficients.

    Entries are kept sorted by :func:`index_key` with zero coefficients dropped,
    so equal sequences compare equal.
    """

    entries: Tuple[Tuple[object, GaussianRational], ...] = ()

    @staticmethod
    def of(data) -> "FinSeq":
        items = data.items() if isinstance(data, dict) else data
        acc: Dict[object, GaussianRational] = {}
        for idx, c in items:
            acc[idx] = acc.get(idx, GaussianRational()) + GaussianRational.of(c)
        return FinSeq(tuple(sorted(((i, c) for i, c in acc.items() if c),
                                   key=lambda e: index_key(e[0]))))

    @staticmethod
    def unit(idx) -> "FinSeq":
        return FinSeq(((idx, GaussianRational(Fraction(1))),))

    @staticmethod
    def zero() -> "FinSeq":
        return FinSeq()

    @property
    def support(self) -> Tuple:
        return tuple(i for i, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def coeff(self, idx) -> GaussianRational:
        for i, c in self.entries:
            if i == idx:
                return c
        return GaussianRational()

    def as_dict(self) -> Dict[object, GaussianRational]:
        return dict(self.entries)

    def __add__(self, other: "FinSeq") -> "FinSeq":
        return FinSeq.of(list(self.entries) + list(other.entries))

    def __neg__(self) -> "FinSeq":
        return FinSeq(tuple((i, -c) for i, c in self.entries))

    def __sub__(self, other: "FinSeq") -> "FinSeq":
        return self + (-other)

    def scale(self, z) -> "FinSeq":
        z = GaussianRational.of(z)
        return FinSeq.of([(i, z * c) for i, c in self.entries])

    def restrict(self, keep) -> "FinSeq":
        """The entries whose index satisfies ``keep``."""
        return FinSeq(tuple((i, c) for i, c in self.entries if keep(i)))

    def to_json(self) -> list:
        return [[index_to_json(i)] + gauss_to_json(c) for i, c in self.entries]

    @staticmethod
    def from_json(rows) -> "FinSeq":
        return FinSeq.of([(index_from_json(r[0]), gauss_from_json(r[1:])) for r in rows])


def _term(F: W.WeightFamily, n: int, idx, c: GaussianRational) -> XPos:
    """|c| v_n(idx); a zero coefficient never meets an infinite weight."""
    return c.modulus() * W.eval_weight(F, n, idx)


def _check_order(p):
    p = parse_order(p)
    return p


def norm(F: W.WeightFamily, n: int, p, x: FinSeq) -> XPos:
    """||x||_{n,p}: the l_p norm of (x_i v_n(i)); sup norm for p in {0, inf}.

    Infinite exactly when x is nonzero somewhere v_n is infinite.
    """
    p = _check_order(p)
    if is_sup_order(p):
        best = ZERO
        for idx, c in x:
            t = _term(F, n, idx, c)
            if t.is_inf:
                return t
            if t.compare(best) == 1:
                best = t
        return best
    total = norm_power(F, n, p, x)
    if p == 1 or total.is_inf:
        return total
    return total ** (Fraction(1) / p)


def norm_power(F: W.WeightFamily, n: int, p, x: FinSeq) -> XPos:
    """The p-th power sum of |x_i|^p v_n(i)^p for finite p, exact when possible."""
    p = _check_order(p)
    if is_sup_order(p):
        raise ValueError("norm_power needs a finite order p >= 1")
    total = ZERO
    for idx, c in x:
        t = _term(F, n, idx, c)
        if t.is_inf:
            return t
        total = total + t ** p
    return total


def min_level(F: W.WeightFamily, p, x: FinSeq, levels: int = W.DEFAULT_LEVELS) -> Optional[int]:
    """Least n <= levels with ||x||_{n,p} finite, or None."""
    for n in range(1, levels + 1):
        if all(W.eval_weight(F, n, i).is_finite for i in x.support):
            return n
    return None


@dataclass(frozen=True)
class InclusionBound:
    """sup of v_m / v_n over the scanned indices where both are finite.

    ``exact`` is set when the scanned supremum is the supremum over all of I.
    """

    value: XPos
    exact: bool
    horizon: int
    reason: str = ""

    def to_json(self) -> dict:
        return {"value": str(self.value), "exact": self.exact, "horizon": self.horizon,
                "reason": self.reason}


def inclusion_bound(F: W.WeightFamily, n: int, m: int, p=P_INF,
                    horizon: int = W.DEFAULT_HORIZON) -> InclusionBound:
    """Norm of the inclusion l_p(v_n) -> l_p(v_m), from below, over the first indices."""
    if m <= n:
        raise ValueError("inclusion_bound needs m > n")
    _check_order(p)
    best = ZERO
    scanned = 0
    for idx in F.index_set.prefix(horizon):
        scanned += 1
        vn, vm = F.eval(n, idx), F.eval(m, idx)
        if vn.is_inf or vm.is_inf:
            continue
        r = vm / vn
        if r.compare(best) == 1:
            best = r
    exact, reason = _inclusion_exact(F, best, scanned)
    return InclusionBound(best, exact, scanned, reason)


def _inclusion_exact(F: W.WeightFamily, best: XPos, scanned: int) -> Tuple[bool, str]:
    if best.compare(ONE) == 0:
        return True, "the ratio never exceeds 1 since the weights decrease in n"
    if isinstance(F, W.Uniform):
        return True, "the ratio does not depend on the index"
    if isinstance(F, W.DualPowerSeries):
        return True, "(r_m / r_n)^alpha_j decreases in j, so the supremum is at j = 1"
    if isinstance(F, W.Table) and F.periodic and scanned >= F.block:
        return True, "periodic data: one full period was scanned"
    return False, "lower bound over the scanned indices"
