"""Extended nonnegative scalars and Gaussian rationals.

``XPos`` is the value type of weights and weighted norms.  Exact values are
stored as ``q ** (1/k)`` with ``q`` a nonnegative rational, which keeps
moduli of Gaussian rationals and p-norms with integer ``p`` exact.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

DEFAULT_TOL = 1e-12

EXACT = "exact"
INFINITY = "inf"
APPROX = "approx"


class IndeterminateComparison(ArithmeticError):
    """Raised when an approximate comparison falls inside the tolerance band."""


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("iroot of negative integer")
    if n < 2 or k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def exact_root(q: Fraction, k: int) -> Optional[Fraction]:
    """Return the rational k-th root of ``q`` if there is one."""
    if q < 0:
        return None
    a, b = iroot(q.numerator, k), iroot(q.denominator, k)
    if a ** k == q.numerator and b ** k == q.denominator:
        return Fraction(a, b)
    return None


def _divisors_desc(k: int):
    return [d for d in range(k, 0, -1) if k % d == 0]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to a rational")


@dataclass(frozen=True)
class XPos:
    """A value in [0, inf]: exact radical, symbolic infinity, or float."""

    kind: str
    value: Union[Fraction, float, None] = None
    root: int = 1

    # -- constructors -------------------------------------------------
    @staticmethod
    def exact(q) -> "XPos":
        q = as_fraction(q)
        if q < 0:
            raise ValueError(f"negative value {q}")
        return XPos(EXACT, q, 1)

    @staticmethod
    def radical(q, k: int) -> "XPos":
        """The exact value ``q ** (1/k)`` in normal form."""
        q = as_fraction(q)
        if q < 0:
            raise ValueError(f"negative radicand {q}")
        if k < 1:
            raise ValueError("root index must be >= 1")
        if q == 0 or q == 1:
            return XPos(EXACT, q, 1)
        for d in _divisors_desc(k):
            r = exact_root(q, d) if d > 1 else q
            if r is not None:
                return XPos(EXACT, r, k // d)
        return XPos(EXACT, q, k)  # pragma: no cover

    @staticmethod
    def inf() -> "XPos":
        return _INF

    @staticmethod
    def approx(x: float) -> "XPos":
        x = float(x)
        if math.isinf(x):
            return _INF
        if math.isnan(x) or x < 0:
            raise ValueError(f"invalid approximate value {x}")
        return XPos(APPROX, x, 1)

    @staticmethod
    def coerce(x) -> "XPos":
        if isinstance(x, XPos):
            return x
        if isinstance(x, float):
            return XPos.approx(x)
        return XPos.exact(x)

    # -- predicates ---------------------------------------------------
    @property
    def is_inf(self) -> bool:
        return self.kind == INFINITY

    @property
    def is_finite(self) -> bool:
        return self.kind != INFINITY

    @property
    def is_exact(self) -> bool:
        return self.kind != APPROX

    @property
    def is_rational(self) -> bool:
        return self.kind == EXACT and self.root == 1

    @property
    def is_zero(self) -> bool:
        return self.kind != INFINITY and self.value == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.value

    def __float__(self) -> float:
        if self.kind == INFINITY:
            return math.inf
        if self.kind == APPROX:
            return self.value
        if self.root == 1:
            return float(self.value)
        return float(self.value) ** (1.0 / self.root)

    # -- arithmetic ---------------------------------------------------
    def _lift(self, k: int) -> Fraction:
        return self.value ** (k // self.root)

    def __mul__(self, other) -> "XPos":
        other = XPos.coerce(other)
        if self.is_zero or other.is_zero:
            return ZERO
        if self.is_inf or other.is_inf:
            return _INF
        if self.kind == EXACT and other.kind == EXACT:
            k = math.lcm(self.root, other.root)
            return XPos.radical(self._lift(k) * other._lift(k), k)
        return XPos.approx(float(self) * float(other))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "XPos":
        other = XPos.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division of XPos by zero")
        if self.is_inf and other.is_inf:
            return ONE
        if other.is_inf:
            return ZERO
        if self.is_inf:
            return _INF
        if self.kind == EXACT and other.kind == EXACT:
            k = math.lcm(self.root, other.root)
            return XPos.radical(self._lift(k) / other._lift(k), k)
        return XPos.approx(float(self) / float(other))

    def __rtruediv__(self, other) -> "XPos":
        return XPos.coerce(other) / self

    def __add__(self, other) -> "XPos":
        other = XPos.coerce(other)
        if self.is_inf or other.is_inf:
            return _INF
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.is_rational and other.is_rational:
            return XPos(EXACT, self.value + other.value, 1)
        return XPos.approx(float(self) + float(other))

    __radd__ = __add__

    def __pow__(self, e) -> "XPos":
        if isinstance(e, int):
            if self.is_inf:
                return _INF if e > 0 else (ONE if e == 0 else ZERO)
            if e == 0:
                return ONE
            if self.kind == EXACT:
                if self.value == 0:
                    if e < 0:
                        raise ZeroDivisionError("0 ** negative")
                    return ZERO
                return XPos.radical(self.value ** e, self.root)
            return XPos.approx(self.value ** e)
        e = as_fraction(e)
        if e.denominator == 1:
            return self ** int(e)
        if self.is_inf:
            return _INF if e > 0 else ZERO
        if self.kind == EXACT:
            if self.value == 0:
                return ZERO
            return XPos.radical(self.value ** e.numerator, self.root * e.denominator)
        return XPos.approx(self.value ** float(e))

    def nth_root(self, k: int) -> "XPos":
        if self.is_inf:
            return _INF
        if self.kind == EXACT:
            return XPos.radical(self.value, self.root * k)
        return XPos.approx(self.value ** (1.0 / k))

    # -- comparison ---------------------------------------------------
    def compare(self, other, tol: float = DEFAULT_TOL) -> Optional[int]:
        """-1, 0, 1, or None when an approximate comparison is indeterminate."""
        other = XPos.coerce(other)
        if self.kind == EXACT and other.kind == EXACT and self.root == other.root == 1:
            a, b = self.value, other.value
            return (a > b) - (a < b)
        if self.is_inf or other.is_inf:
            return (self.is_inf > other.is_inf) - (self.is_inf < other.is_inf)
        if self.kind == EXACT and other.kind == EXACT:
            k = math.lcm(self.root, other.root)
            a, b = self._lift(k), other._lift(k)
            return (a > b) - (a < b)
        a, b = float(self), float(other)
        if abs(a - b) <= tol * max(1.0, abs(a), abs(b)):
            return None
        return 1 if a > b else -1

    def _decided(self, other) -> int:
        c = self.compare(other)
        if c is None:
            raise IndeterminateComparison(f"{self} vs {other} within tolerance")
        return c

    def __lt__(self, other):
        return self._decided(other) < 0

    def __le__(self, other):
        return self._decided(other) <= 0

    def __gt__(self, other):
        return self._decided(other) > 0

    def __ge__(self, other):
        return self._decided(other) >= 0

    # -- text form ----------------------------------------------------
    def __str__(self) -> str:
        if self.kind == INFINITY:
            return "inf"
        if self.kind == APPROX:
            return "~" + repr(self.value)
        if self.root == 1:
            return str(self.value)
        return f"({self.value})^(1/{self.root})"

    def __repr__(self) -> str:
        return f"XPos({str(self)!r})"

    @staticmethod
    def parse(text: str) -> "XPos":
        text = text.strip()
        if text == "inf":
            return _INF
        if text.startswith("~"):
            return XPos.approx(float(text[1:]))
        m = _RADICAL.fullmatch(text)
        if m:
            return XPos.radical(Fraction(m.group(1)), int(m.group(2)))
        return XPos.exact(Fraction(text))


_RADICAL = re.compile(r"\(([^()]+)\)\^\(1/(\d+)\)")
_INF = XPos(INFINITY, None, 1)
ZERO = XPos(EXACT, Fraction(0), 1)
ONE = XPos(EXACT, Fraction(1), 1)


def xmax(values, tol: float = DEFAULT_TOL) -> Optional[XPos]:
    """Maximum of XPos values; None for an empty input.

    Raises IndeterminateComparison when approximate entries tie within tol.
    """
    best = None
    for v in values:
        if best is None:
            best = v
            continue
        c = v.compare(best, tol)
        if c is None:
            raise IndeterminateComparison(f"{v} vs {best}")
        if c > 0:
            best = v
    return best


@dataclass(frozen=True)
class GaussianRational:
    """A complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return GaussianRational(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return GaussianRational(as_fraction(x[0]), as_fraction(x[1]))
        return GaussianRational(as_fraction(x), Fraction(0))

    def __add__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def modulus(self) -> XPos:
        return XPos.radical(self.abs2(), 2)

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


# --------------------------------------------------------------------------
# orders p of the spaces k_p(V): 0, a rational p >= 1, or infinity

P_INF = math.inf


def parse_order(p) -> Union[int, Fraction, float]:
    """Normalize an order: 0, a rational >= 1, or math.inf ('inf')."""
    if isinstance(p, str):
        text = p.strip().lower()
        if text in ("inf", "infinity", "oo"):
            return P_INF
        p = Fraction(text)
    if isinstance(p, float) and math.isinf(p):
        return P_INF
    q = as_fraction(p)
    if q == 0:
        return 0
    if q < 1:
        raise ValueError(f"order p must be 0, >= 1 or inf, got {p}")
    return q


def order_str(p) -> str:
    return "inf" if p == P_INF else str(p)


def is_sup_order(p) -> bool:
    """Orders 0 and inf use sup norms."""
    return p == 0 or p == P_INF
