"""Countable index sets and decidable subsets of them.

Indices are plain Python values: ``j`` (int >= 1) on N, ``(i, j)`` on N x N,
``("L", idx)`` / ``("R", idx)`` on a disjoint union.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import count, islice
from typing import Callable, FrozenSet, Iterator, Optional, Tuple

# Section kinds: how a predicate meets one row of N x N (or all of N).
EMPTY = "empty"
FINITE = "finite"          # finite and nonempty
FULL = "full"
COFINITE = "cofinite"      # complement finite and nonempty
MIXED = "mixed"            # infinite with infinite complement

_COMPLEMENT = {EMPTY: FULL, FULL: EMPTY, FINITE: COFINITE, COFINITE: FINITE, MIXED: MIXED}
INFINITE_KINDS = (FULL, COFINITE, MIXED)


@dataclass(frozen=True)
class Section:
    kind: str
    members: FrozenSet[int] = frozenset()  # the set (finite) or the excluded set (cofinite)

    @property
    def is_finite(self) -> bool:
        return self.kind in (EMPTY, FINITE)

    def complement(self) -> "Section":
        return Section(_COMPLEMENT[self.kind], self.members)


def _finite(members) -> Section:
    members = frozenset(members)
    return Section(FINITE if members else EMPTY, members)


# --------------------------------------------------------------------------
# index sets


class IndexSet:
    kind = "abstract"

    def __iter__(self) -> Iterator:
        raise NotImplementedError

    def prefix(self, h: int, scan_limit: Optional[int] = None) -> list:
        return list(islice(iter(self), h))

    def contains(self, idx) -> bool:
        raise NotImplementedError

    def is_infinite(self) -> Optional[bool]:
        return True

    def describe(self) -> str:
        return self.kind


class Nat(IndexSet):
    kind = "nat"

    def __iter__(self):
        return count(1)

    def contains(self, idx) -> bool:
        return isinstance(idx, int) and not isinstance(idx, bool) and idx >= 1

    def position(self, idx) -> int:
        return idx

    def __eq__(self, other):
        return isinstance(other, Nat)

    def __hash__(self):
        return hash("nat")


def square_position(i: int, j: int) -> int:
    """1-based position of (i, j) in the square ordering of N x N.

    Shell k = max(i, j) is walked as (1,k), (2,k), ..., (k,k), (k,k-1), ..., (k,1).
    """
    k = max(i, j)
    base = (k - 1) ** 2
    if j == k:
        return base + i
    return base + k + (k - j)


def square_index(pos: int) -> Tuple[int, int]:
    k = math.isqrt(pos - 1) + 1
    off = pos - (k - 1) ** 2
    if off <= k:
        return (off, k)
    return (k, k - (off - k))


class NatSquared(IndexSet):
    kind = "nat2"

    def __iter__(self):
        return (square_index(p) for p in count(1))

    def contains(self, idx) -> bool:
        return (
            isinstance(idx, tuple) and len(idx) == 2
            and all(isinstance(x, int) and x >= 1 for x in idx)
        )

    def position(self, idx) -> int:
        return square_position(*idx)

    def row(self, i: int) -> Iterator[Tuple[int, int]]:
        return ((i, j) for j in count(1))

    def __eq__(self, other):
        return isinstance(other, NatSquared)

    def __hash__(self):
        return hash("nat2")


@dataclass(frozen=True, eq=True)
class DisjointUnion(IndexSet):
    left: IndexSet
    right: IndexSet
    kind = "union"

    def __iter__(self):
        lit, rit = iter(self.left), iter(self.right)
        live = [("L", lit), ("R", rit)]
        while live:
            for entry in list(live):
                tag, it = entry
                try:
                    yield (tag, next(it))
                except StopIteration:
                    live.remove(entry)

    def contains(self, idx) -> bool:
        if not (isinstance(idx, tuple) and len(idx) == 2 and idx[0] in ("L", "R")):
            return False
        side = self.left if idx[0] == "L" else self.right
        return side.contains(idx[1])

    def is_infinite(self):
        a, b = self.left.is_infinite(), self.right.is_infinite()
        if a or b:
            return True
        if a is None or b is None:
            return None
        return False

    def describe(self):
        return f"union({self.left.describe()}, {self.right.describe()})"


@dataclass(frozen=True)
class Subset(IndexSet):
    base: IndexSet
    pred: "Predicate"
    kind = "subset"

    def __iter__(self):
        return (i for i in self.base if self.pred.contains(i))

    def prefix(self, h: int, scan_limit: Optional[int] = None) -> list:
        limit = scan_limit if scan_limit is not None else max(64 * h, 4096)
        out = []
        for idx in islice(iter(self.base), limit):
            if self.pred.contains(idx):
                out.append(idx)
                if len(out) >= h:
                    break
        return out

    def contains(self, idx) -> bool:
        return self.base.contains(idx) and self.pred.contains(idx)

    def is_infinite(self):
        return self.pred.is_infinite(self.base)

    def describe(self):
        return f"{self.base.describe()}|{self.pred.describe()}"


# --------------------------------------------------------------------------
# predicates


class Predicate:
    """A decidable subset of N or N x N with symbolic row knowledge where available."""

    def contains(self, idx) -> bool:
        raise NotImplementedError

    def row_section(self, k: int) -> Optional[Section]:
        """How the set meets row L_k of N x N; None when not known symbolically."""
        return None

    def row_tail(self) -> Optional[Tuple[int, str]]:
        """(K0, kind): every row k > K0 meets the set with this section kind."""
        return None

    def nat_section(self) -> Optional[Section]:
        """The set itself as a subset of N, when known symbolically."""
        return None

    def describe(self) -> str:
        raise NotImplementedError

    def is_infinite(self, base: IndexSet) -> Optional[bool]:
        if isinstance(base, Nat):
            s = self.nat_section()
            return None if s is None else s.kind in INFINITE_KINDS
        if isinstance(base, NatSquared):
            tail = self.row_tail()
            if tail is None:
                return None
            k0, kind = tail
            if kind != EMPTY:
                return True
            for k in range(1, k0 + 1):
                s = self.row_section(k)
                if s is None:
                    return None
                if not s.is_finite:
                    return True
            return False
        return None

    def all_rows_finite(self) -> Optional[bool]:
        tail = self.row_tail()
        if tail is None:
            return None
        k0, kind = tail
        if kind in INFINITE_KINDS:
            return False
        for k in range(1, k0 + 1):
            s = self.row_section(k)
            if s is None:
                return None
            if not s.is_finite:
                return False
        return True

    def first_infinite_row(self) -> Optional[int]:
        tail = self.row_tail()
        if tail is None:
            return None
        k0, kind = tail
        for k in range(1, k0 + 1):
            s = self.row_section(k)
            if s is not None and not s.is_finite:
                return k
        if kind in INFINITE_KINDS:
            return k0 + 1
        return None

    def meets_infinitely_many_rows(self) -> Optional[bool]:
        tail = self.row_tail()
        if tail is None:
            return None
        return tail[1] != EMPTY

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Not(And(Not(self), Not(other)))

    def __invert__(self):
        return Not(self)


def _last(idx) -> int:
    return idx[1] if isinstance(idx, tuple) else idx


@dataclass(frozen=True)
class All(Predicate):
    def contains(self, idx):
        return True

    def row_section(self, k):
        return Section(FULL)

    def row_tail(self):
        return (0, FULL)

    def nat_section(self):
        return Section(FULL)

    def describe(self):
        return "all"


@dataclass(frozen=True)
class Empty(Predicate):
    def contains(self, idx):
        return False

    def row_section(self, k):
        return Section(EMPTY)

    def row_tail(self):
        return (0, EMPTY)

    def nat_section(self):
        return Section(EMPTY)

    def describe(self):
        return "none"


@dataclass(frozen=True)
class Diagonal(Predicate):
    def contains(self, idx):
        return isinstance(idx, tuple) and idx[0] == idx[1]

    def row_section(self, k):
        return _finite({k})

    def row_tail(self):
        return (0, FINITE)

    def describe(self):
        return "diagonal"


@dataclass(frozen=True)
class Triangular(Predicate):
    """{(i, j) : j <= i}; row L_i meets it in {1, ..., i}."""

    def contains(self, idx):
        return isinstance(idx, tuple) and idx[1] <= idx[0]

    def row_section(self, k):
        return _finite(range(1, k + 1))

    def row_tail(self):
        return (0, FINITE)

    def describe(self):
        return "triangular"


@dataclass(frozen=True)
class Rows(Predicate):
    rows: FrozenSet[int] = frozenset()

    def contains(self, idx):
        return isinstance(idx, tuple) and idx[0] in self.rows

    def row_section(self, k):
        return Section(FULL if k in self.rows else EMPTY)

    def row_tail(self):
        return (max(self.rows, default=0), EMPTY)

    def describe(self):
        if len(self.rows) == 1:
            return f"row({next(iter(self.rows))})"
        return "rows(" + ", ".join(str(r) for r in sorted(self.rows)) + ")"


@dataclass(frozen=True)
class Parity(Predicate):
    """Indices whose last coordinate is even (or odd)."""

    even: bool = True

    def contains(self, idx):
        return (_last(idx) % 2 == 0) == self.even

    def row_section(self, k):
        return Section(MIXED)

    def row_tail(self):
        return (0, MIXED)

    def nat_section(self):
        return Section(MIXED)

    def describe(self):
        return "even" if self.even else "odd"


@dataclass(frozen=True)
class Finite(Predicate):
    """An explicit finite set of indices."""

    members: FrozenSet = frozenset()

    def contains(self, idx):
        return idx in self.members

    def row_section(self, k):
        return _finite(j for (i, j) in self._pairs() if i == k)

    def row_tail(self):
        pairs = self._pairs()
        return (max((i for i, _ in pairs), default=0), EMPTY)

    def _pairs(self):
        return [m for m in self.members if isinstance(m, tuple)]

    def nat_section(self):
        return _finite(m for m in self.members if isinstance(m, int))

    def describe(self):
        return "set(" + ", ".join(str(m) for m in sorted(self.members, key=str)) + ")"


@dataclass(frozen=True)
class Where(Predicate):
    """A predicate given by a DSL condition over i, j (on N both name the index)."""

    text: str = ""
    test: Callable = field(default=None, compare=False, hash=False)

    def contains(self, idx):
        if isinstance(idx, tuple):
            return bool(self.test(*idx))
        return bool(self.test(idx, idx))

    def describe(self):
        return f"where({self.text})"


@dataclass(frozen=True)
class Not(Predicate):
    inner: Predicate = None

    def contains(self, idx):
        return not self.inner.contains(idx)

    def row_section(self, k):
        s = self.inner.row_section(k)
        return None if s is None else s.complement()

    def row_tail(self):
        t = self.inner.row_tail()
        return None if t is None else (t[0], _COMPLEMENT[t[1]])

    def nat_section(self):
        s = self.inner.nat_section()
        return None if s is None else s.complement()

    def describe(self):
        return f"not({self.inner.describe()})"


def _and_kinds(a: str, b: str) -> Optional[str]:
    if EMPTY in (a, b):
        return EMPTY
    if a == FULL:
        return b
    if b == FULL:
        return a
    if a == COFINITE and b == COFINITE:
        return COFINITE
    if {a, b} == {COFINITE, MIXED}:
        return MIXED
    return None


@dataclass(frozen=True)
class And(Predicate):
    left: Predicate = None
    right: Predicate = None

    def contains(self, idx):
        return self.left.contains(idx) and self.right.contains(idx)

    def _combine(self, a: Optional[Section], b: Optional[Section], member) -> Optional[Section]:
        if a is not None and a.kind == EMPTY or b is not None and b.kind == EMPTY:
            return Section(EMPTY)
        # a finite side can be filtered exactly through the other side's membership test
        if a is not None and a.kind == FINITE:
            return _finite(j for j in a.members if member(self.right, j))
        if b is not None and b.kind == FINITE:
            return _finite(j for j in b.members if member(self.left, j))
        if a is None or b is None:
            return None
        if a.kind == FULL:
            return b
        if b.kind == FULL:
            return a
        if a.kind == COFINITE and b.kind == COFINITE:
            return Section(COFINITE, a.members | b.members)
        if {a.kind, b.kind} == {COFINITE, MIXED}:
            return Section(MIXED)
        return None

    def row_section(self, k):
        return self._combine(
            self.left.row_section(k), self.right.row_section(k),
            lambda p, j: p.contains((k, j)),
        )

    def nat_section(self):
        return self._combine(
            self.left.nat_section(), self.right.nat_section(),
            lambda p, j: p.contains(j),
        )

    def row_tail(self):
        a, b = self.left.row_tail(), self.right.row_tail()
        if a is not None and a[1] == EMPTY and b is None:
            return a
        if b is not None and b[1] == EMPTY and a is None:
            return b
        if a is None or b is None:
            return None
        kind = _and_kinds(a[1], b[1])
        if kind is None:
            return None
        return (max(a[0], b[0]), kind)

    def describe(self):
        return f"and({self.left.describe()}, {self.right.describe()})"


def complement(p: Predicate) -> Predicate:
    if isinstance(p, Not):
        return p.inner
    if isinstance(p, All):
        return Empty()
    if isinstance(p, Empty):
        return All()
    return Not(p)


def conjoin(p: Predicate, q: Predicate) -> Predicate:
    if isinstance(p, All):
        return q
    if isinstance(q, All):
        return p
    if isinstance(p, Empty) or isinstance(q, Empty):
        return Empty()
    return And(p, q)


def predicate_from_name(name: str, args: Tuple = ()) -> Predicate:
    """Built-in predicate vocabulary shared by the DSL and the CLI."""
    if name == "all":
        return All()
    if name in ("none", "empty"):
        return Empty()
    if name == "diagonal":
        return Diagonal()
    if name in ("triangular", "lower"):
        return Triangular()
    if name in ("row", "L", "rows"):
        return Rows(frozenset(int(a) for a in args))
    if name == "even":
        return Parity(True)
    if name == "odd":
        return Parity(False)
    raise ValueError(f"unknown predicate {name!r}")


def parse_predicate(text: str) -> Predicate:
    """Parse the CLI predicate syntax: ``diagonal``, ``row(3)``, ``not(rows(1,2))``."""
    text = text.strip()
    if text.startswith("not(") and text.endswith(")"):
        return complement(parse_predicate(text[4:-1]))
    if "(" in text and text.endswith(")"):
        name, rest = text.split("(", 1)
        args = tuple(int(a) for a in rest[:-1].split(",") if a.strip())
        return predicate_from_name(name.strip(), args)
    return predicate_from_name(text)
