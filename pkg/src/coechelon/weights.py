"""Weight families V = (v_n) on countable index sets.

Every family is immutable and evaluates ``v_n(i)`` to an :class:`XPos`.
Conditions (W1) pointwise eventual finiteness and (W2) monotone decrease in
``n`` are checked when a family is built: by a structural argument for the
kinds that carry one, by a finite scan for user tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Callable, Optional, Sequence, Tuple

from . import expr as E
from .indexsets import (
    All, DisjointUnion, IndexSet, Nat, NatSquared, Predicate, Subset, conjoin,
)
from .scalars import ONE, XPos

DEFAULT_LEVELS = 20
DEFAULT_HORIZON = 10_000
GRID_C_HORIZON = 1_000
DPS_R_HORIZON = 200


class FamilyError(ValueError):
    """A weight family violates (W1), (W2) or positivity, or is malformed."""

    def __init__(self, message: str, level=None, index=None):
        super().__init__(message)
        self.level = level
        self.index = index


@dataclass(frozen=True)
class Validation:
    method: str                 # "symbolic" or "horizon"
    levels: int = 0
    indices: int = 0
    notes: Tuple[str, ...] = ()

    def to_json(self):
        return {"method": self.method, "levels": self.levels, "indices": self.indices,
                "notes": list(self.notes)}


@dataclass(frozen=True)
class ExprFn:
    """A compiled DSL expression together with its source tree."""

    params: Tuple[str, ...]
    node: E.Node = field(compare=False)
    text: str = ""
    fn: Callable = field(default=None, compare=False, hash=False, repr=False)

    @staticmethod
    def build(params, node: E.Node) -> "ExprFn":
        return ExprFn(tuple(params), node, E.render(node), E.compile_expr(node, tuple(params)))

    @staticmethod
    def parse(params, source: str) -> "ExprFn":
        from .dsl import parse_expression
        return ExprFn.build(params, parse_expression(source))

    def __call__(self, *args):
        return self.fn(*args)

    def depends_on(self, name: str) -> bool:
        return name in E.free_names(self.node)


class WeightFamily:
    kind = "abstract"
    name: str
    index_set: IndexSet
    validation: Validation

    def eval(self, n: int, i) -> XPos:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind, "name": self.name}


def eval_weight(F: WeightFamily, n: int, i) -> XPos:
    """v_n(i) for level n >= 1 and an index i of F."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"level must be an integer >= 1, got {n!r}")
    return F.eval(n, i)


def _weight(v) -> XPos:
    try:
        return E.to_xpos(v)
    except E.NonPositiveWeight as exc:
        raise FamilyError(str(exc)) from exc


# --------------------------------------------------------------------------
# kinds


@dataclass(frozen=True, eq=False)
class Phi(WeightFamily):
    """v_n(j) = 1 for j <= n and infinity beyond: the algebra of finite sequences."""

    name: str = "phi"
    kind = "phi"

    @property
    def index_set(self):
        return Nat()

    @property
    def validation(self):
        return Validation("symbolic")

    def eval(self, n, j):
        return ONE if j <= n else XPos.inf()


@dataclass(frozen=True, eq=False)
class Uniform(WeightFamily):
    """Index-independent weights v_n(i) = g(n)."""

    g: ExprFn
    index_set: IndexSet = field(default_factory=Nat)
    name: str = "uniform"
    validation: Validation = field(default=None, compare=False)
    kind = "uniform"

    def __post_init__(self):
        if self.validation is None:
            object.__setattr__(self, "validation", _validate_uniform(self))

    def level_value(self, n: int) -> XPos:
        return _weight(self.g(n))

    def eval(self, n, i):
        return self.level_value(n)

    @property
    def constant(self) -> bool:
        return not self.g.depends_on(self.g.params[0]) if self.g.params else True

    def describe(self):
        return {"kind": self.kind, "name": self.name, "g": self.g.text,
                "index": self.index_set.describe()}


def _validate_uniform(F: Uniform, levels: int = DEFAULT_LEVELS) -> Validation:
    if F.constant:
        v = F.level_value(1)
        if v.is_inf:
            raise FamilyError("(W1) fails: constant weight is infinite", 1)
        return Validation("symbolic")
    prev = None
    finite_seen = False
    for n in range(1, levels + 1):
        v = F.level_value(n)
        finite_seen = finite_seen or v.is_finite
        if prev is not None and v.compare(prev) == 1:
            raise FamilyError(f"(W2) fails: g({n}) > g({n - 1})", n)
        prev = v
    if not finite_seen:
        raise FamilyError(f"(W1) fails: g(n) infinite for all n <= {levels}", levels)
    return Validation("horizon", levels, 0)


def growth_class(fn: ExprFn) -> Optional[tuple]:
    """Classify an exponent sequence alpha(j) that increases to infinity.

    Returns ("linear", a, b) for a*j + b, ("power", d, poly) for a generalized
    polynomial with leading exponent d, ("log", c, b) for c*log j + b, or None.
    """
    var = fn.params[0]
    p = E.genpoly(fn.node, var)
    if p is not None:
        pos = {e: c for e, c in p.items() if e != 0}
        if pos and all(e > 0 and c > 0 for e, c in pos.items()) and sum(p.values()) >= 0:
            if set(pos) == {Fraction(1)}:
                return ("linear", pos[Fraction(1)], p.get(Fraction(0), Fraction(0)))
            return ("power", max(pos), p)
    ll = E.loglinear(fn.node, var)
    if ll is not None and ll[0] > 0 and ll[1] >= 0:
        return ("log", ll[0], ll[1])
    return None


@dataclass(frozen=True, eq=False)
class DualPowerSeries(WeightFamily):
    """v_n(j) = r_n ** alpha_j with r_n strictly decreasing to R."""

    R: Fraction
    alpha: ExprFn
    r: ExprFn
    name: str = "dual_power_series"
    validation: Validation = field(default=None, compare=False)
    alpha_class: Optional[tuple] = field(default=None, compare=False)
    kind = "dual_power_series"

    def __post_init__(self):
        object.__setattr__(self, "alpha_class", growth_class(self.alpha))
        if self.validation is None:
            object.__setattr__(self, "validation", _validate_dps(self))

    @property
    def index_set(self):
        return Nat()

    def r_value(self, n: int):
        return self.r(n)

    def alpha_value(self, j: int):
        return self.alpha(j)

    def eval(self, n, j):
        return _weight(E.v_pow(self.r(n), self.alpha(j)))

    def describe(self):
        return {"kind": self.kind, "name": self.name, "R": str(self.R),
                "alpha": self.alpha.text, "r": self.r.text,
                "alpha_class": None if self.alpha_class is None else self.alpha_class[0]}


def _validate_dps(F: DualPowerSeries, r_horizon: int = DPS_R_HORIZON,
                  alpha_horizon: int = GRID_C_HORIZON) -> Validation:
    if F.R < 0:
        raise FamilyError("R must be nonnegative")
    notes = []
    R = F.R
    prev = None
    for n in range(1, r_horizon + 1):
        rn = F.r(n)
        if E.v_cmp(rn, Fraction(0)) <= 0:
            raise FamilyError(f"r({n}) is not positive", n)
        if E.v_cmp(rn, R) <= 0:
            raise FamilyError(f"r({n}) <= R: the sequence must stay above its limit", n)
        if prev is not None and E.v_cmp(rn, prev) >= 0:
            raise FamilyError(f"(W2) fails: r({n}) >= r({n - 1})", n)
        prev = rn
    notes.append(f"r strictly decreasing and > R checked for n <= {r_horizon}; limit R declared")
    if F.alpha_class is None:
        prev = None
        for j in range(1, alpha_horizon + 1):
            a = F.alpha(j)
            if E.to_float(a) < 0:
                raise FamilyError(f"alpha({j}) is negative", None, j)
            if prev is not None and E.v_cmp(a, prev) < 0:
                raise FamilyError(f"alpha is not increasing at j={j}", None, j)
            prev = a
        notes.append(f"alpha increasing checked for j <= {alpha_horizon}; divergence declared")
        return Validation("horizon", r_horizon, alpha_horizon, tuple(notes))
    return Validation("symbolic", r_horizon, 0, tuple(notes))


def decay_class(fn: ExprFn) -> Optional[tuple]:
    """("power", d, a) when c_j = a * j^(-d) with d > 0 and 0 < a <= 1."""
    p = E.genpoly(fn.node, fn.params[0])
    if p is not None and len(p) == 1:
        (e, a), = p.items()
        if e < 0 and 0 < a <= 1:
            return ("power", -e, a)
    return None


@dataclass(frozen=True, eq=False)
class Grid(WeightFamily):
    """Weights on N x N: v_n(i, j) = c_j ** n for i < n and 1 for i >= n."""

    c: ExprFn
    name: str = "grid"
    validation: Validation = field(default=None, compare=False)
    c_class: Optional[tuple] = field(default=None, compare=False)
    kind = "grid"

    def __post_init__(self):
        object.__setattr__(self, "c_class", decay_class(self.c))
        if self.validation is None:
            object.__setattr__(self, "validation", _validate_grid(self))

    @property
    def index_set(self):
        return NatSquared()

    def c_value(self, j: int) -> XPos:
        return _weight(self.c(j))

    def eval(self, n, idx):
        i, j = idx
        if i >= n:
            return ONE
        return self.c_value(j) ** n

    def describe(self):
        return {"kind": self.kind, "name": self.name, "c": self.c.text}


def _validate_grid(F: Grid, horizon: int = GRID_C_HORIZON) -> Validation:
    if not F.c.depends_on(F.c.params[0]):
        raise FamilyError("c_j must tend to 0; a constant sequence is not admissible")
    if F.c_class is not None:
        return Validation("symbolic")
    first = None
    for j in range(1, horizon + 1):
        cj = F.c_value(j)
        if cj.compare(ONE) == 1:
            raise FamilyError(f"c({j}) > 1", None, j)
        first = first or cj
    if not F.c_value(horizon).compare(first) == -1:
        raise FamilyError(f"c_j shows no decay up to j={horizon}")
    return Validation("horizon", 0, horizon,
                      (f"c in (0,1] checked for j <= {horizon}; c_j -> 0 declared",))


@dataclass(frozen=True, eq=False)
class Table(WeightFamily):
    """User-supplied weights: an explicit data head and/or an expression.

    ``data[k]`` lists v_1, v_2, ... at the k-th enumerated index; the last entry
    repeats for higher levels.  With ``periodic`` the data block repeats along
    the enumeration; otherwise ``expression`` gives the weights beyond the head.
    ``monotone`` declares that each v_n is nonincreasing along the enumeration
    beyond the head.
    """

    index_set: IndexSet
    expression: Optional[ExprFn] = None
    data: Tuple[Tuple[XPos, ...], ...] = ()
    periodic: bool = False
    monotone: bool = False
    name: str = "table"
    validation: Validation = field(default=None, compare=False)
    check_levels: int = field(default=DEFAULT_LEVELS, compare=False)
    check_indices: int = field(default=DEFAULT_HORIZON, compare=False)
    kind = "table"

    def __post_init__(self):
        if self.periodic and not self.data:
            raise FamilyError("a periodic table needs a data block")
        if not self.periodic and self.expression is None:
            raise FamilyError("a table needs an expression v(...) or periodic data")
        for row in self.data:
            if not row:
                raise FamilyError("empty data row")
        if self.validation is None:
            object.__setattr__(self, "validation",
                               _validate_table(self, self.check_levels, self.check_indices))

    @property
    def block(self) -> int:
        return len(self.data)

    @property
    def data_levels(self) -> int:
        return max((len(r) for r in self.data), default=1)

    def _position(self, idx) -> int:
        return self.index_set.position(idx)

    def eval(self, n, idx):
        if self.data:
            pos = self._position(idx)
            if self.periodic or pos <= self.block:
                row = self.data[(pos - 1) % self.block]
                return row[min(n, len(row)) - 1]
        args = (n,) + (tuple(idx) if isinstance(idx, tuple) else (idx,))
        return _weight(self.expression(*args))

    def describe(self):
        d = {"kind": self.kind, "name": self.name, "index": self.index_set.describe(),
             "periodic": self.periodic, "monotone": self.monotone}
        if self.expression is not None:
            d["v"] = self.expression.text
        if self.data:
            d["data"] = [[str(x) for x in row] for row in self.data]
        return d


def _validate_table(F: Table, levels: int, horizon: int) -> Validation:
    span = F.block if F.periodic else horizon
    levels = max(levels, F.data_levels + 1)
    if not F.data and not F.expression.depends_on("n"):
        levels = 1  # level-independent weights: (W2) holds with equality
    for idx in islice(iter(F.index_set), span):
        prev = None
        finite = False
        for n in range(1, levels + 1):
            v = F.eval(n, idx)
            finite = finite or v.is_finite
            if prev is not None and v.compare(prev) == 1:
                raise FamilyError(f"(W2) fails at level {n}, index {idx}: v_{n} > v_{n - 1}",
                                  n, idx)
            prev = v
        if not finite:
            raise FamilyError(f"(W1) fails at index {idx}: infinite for all n <= {levels}",
                              levels, idx)
    if F.monotone and not F.periodic:
        tail = list(islice(iter(F.index_set), F.block, horizon))
        for n in range(1, levels + 1):
            prev = None
            for idx in tail:
                v = F.eval(n, idx)
                if prev is not None and v.compare(prev) == 1:
                    raise FamilyError(f"declared monotone tail increases at level {n}, index {idx}",
                                      n, idx)
                prev = v
    if F.periodic:
        return Validation("symbolic", levels, F.block, ("periodic data: finite check is complete",))
    return Validation("horizon", levels, horizon)


@dataclass(frozen=True, eq=False)
class Restriction(WeightFamily):
    base: WeightFamily
    pred: Predicate
    name: str = ""
    kind = "restriction"

    @property
    def index_set(self):
        return Subset(self.base.index_set, self.pred)

    @property
    def validation(self):
        return self.base.validation

    def eval(self, n, i):
        return self.base.eval(n, i)

    def describe(self):
        return {"kind": self.kind, "name": self.name, "base": self.base.describe(),
                "subset": self.pred.describe()}


@dataclass(frozen=True, eq=False)
class DirectSum(WeightFamily):
    left: WeightFamily
    right: WeightFamily
    name: str = ""
    kind = "direct_sum"

    @property
    def index_set(self):
        return DisjointUnion(self.left.index_set, self.right.index_set)

    @property
    def validation(self):
        a, b = self.left.validation, self.right.validation
        if a.method == b.method == "symbolic":
            return Validation("symbolic")
        return Validation("horizon", max(a.levels, b.levels), max(a.indices, b.indices))

    def eval(self, n, idx):
        tag, i = idx
        return (self.left if tag == "L" else self.right).eval(n, i)

    def describe(self):
        return {"kind": self.kind, "name": self.name,
                "left": self.left.describe(), "right": self.right.describe()}


def restrict(F: WeightFamily, S: Predicate, name: str = "") -> WeightFamily:
    """The family V_S of restrictions to the subset S."""
    if isinstance(S, All):
        return F
    if isinstance(F, Restriction):
        return Restriction(F.base, conjoin(F.pred, S), name or F.name)
    return Restriction(F, S, name or f"{F.name}|{S.describe()}")


def direct_sum(F: WeightFamily, G: WeightFamily, name: str = "") -> DirectSum:
    """The family on the disjoint union that agrees with F on the left and G on the right."""
    return DirectSum(F, G, name or f"{F.name}+{G.name}")


# --------------------------------------------------------------------------
# convenience constructors used by tests and the CLI


def phi() -> Phi:
    return Phi()


def constant(value=1, index: str = "nat", name: str = "constant") -> Uniform:
    idx = Nat() if index == "nat" else NatSquared()
    return Uniform(ExprFn.parse(("n",), str(value)), idx, name)


def grid(c: str = "1/j", name: str = "grid") -> Grid:
    return Grid(ExprFn.parse(("j",), c), name)


def dual_power_series(R="0", alpha: str = "j", r: str = "1/2^n",
                      name: str = "dual_power_series") -> DualPowerSeries:
    return DualPowerSeries(Fraction(R), ExprFn.parse(("j",), alpha), ExprFn.parse(("n",), r), name)


def table(v: Optional[str] = None, index: str = "nat", data: Sequence[Sequence] = (),
          periodic: bool = False, monotone: bool = False, name: str = "table",
          levels: int = DEFAULT_LEVELS, horizon: int = DEFAULT_HORIZON) -> WeightFamily:
    idx = Nat() if index == "nat" else NatSquared()
    params = ("n", "j") if index == "nat" else ("n", "i", "j")
    expression = ExprFn.parse(params, v) if v is not None else None
    rows = tuple(tuple(XPos.parse(str(x)) if not isinstance(x, XPos) else x for x in row)
                 for row in data)
    return Table(idx, expression, rows, periodic, monotone, name,
                 check_levels=levels, check_indices=horizon)
