"""Finite certificates behind the amenability theorems.

* :func:`approx_binf` truncates a finitely supported ``a`` to the indices where
  v_n is at least a threshold t and checks the two bounds that make the
  truncation an approximation from l_inf (Theorem thm:kinf).
* :func:`unbounded_witness` picks indices j_1 < j_2 < ... along which every
  v_k stays large, which yields the dense-range homomorphisms onto l_p or l_1.
* :func:`no_split_witness` picks one index per row outside S on a grid family,
  the set R of Lemma no_decomp.

Every object lists its inequalities as :class:`Inequality` records, which
re-verify from their text form alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from . import conditions as C
from . import weights as W
from .indexsets import Empty, Predicate
from .scalars import ONE, P_INF, ZERO, XPos, is_sup_order, order_str, parse_order
from .serial import index_from_json, index_to_json
from .truncation import FinSeq, norm

GEQ_ONE = "GEQ_ONE"
GEQ_POW2 = "GEQ_POW2"
SCHEMA_VERSION = 1

_RELATIONS = {
    "<=": lambda c: c <= 0,
    "<": lambda c: c < 0,
    ">=": lambda c: c >= 0,
    ">": lambda c: c > 0,
    "==": lambda c: c == 0,
}


class WitnessError(ValueError):
    """A precondition of a witness construction fails."""


class EventuallyBoundedError(WitnessError):
    """Some v_n is bounded, so no unbounded-weight witness exists."""


@dataclass(frozen=True)
class Inequality:
    """``lhs relation rhs`` between two values written in XPos text form."""

    label: str
    lhs: str
    relation: str
    rhs: str
    exact: bool

    @staticmethod
    def make(label: str, lhs: XPos, relation: str, rhs: XPos) -> "Inequality":
        exact = all(x.is_exact or x.is_inf for x in (lhs, rhs))
        return Inequality(label, str(lhs), relation, str(rhs), exact)

    def holds(self) -> bool:
        c = XPos.parse(self.lhs).compare(XPos.parse(self.rhs))
        return c is not None and _RELATIONS[self.relation](c)

    def to_json(self) -> dict:
        return {"label": self.label, "lhs": self.lhs, "relation": self.relation,
                "rhs": self.rhs, "exact": self.exact}

    @staticmethod
    def from_json(d: dict) -> "Inequality":
        return Inequality(d["label"], d["lhs"], d["relation"], d["rhs"], d["exact"])


def _ineqs_json(items) -> list:
    return [q.to_json() for q in items]


def _ineqs_from(items) -> Tuple[Inequality, ...]:
    return tuple(Inequality.from_json(d) for d in items)


# --------------------------------------------------------------------------
# b^eps


@dataclass(frozen=True)
class ApproxResult:
    a: FinSeq
    b: FinSeq
    n: int
    m: int
    C: Fraction
    eps: Fraction
    threshold: XPos
    dropped: Tuple          # supp(a) minus J_1
    bounds: Tuple[Inequality, ...]
    trivial: bool = False

    @property
    def verified(self) -> bool:
        return all(q.holds() for q in self.bounds)

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "kind": "approx",
                "a": self.a.to_json(), "b": self.b.to_json(), "n": self.n, "m": self.m,
                "C": str(self.C), "eps": str(self.eps), "threshold": str(self.threshold),
                "dropped": [index_to_json(i) for i in self.dropped],
                "bounds": _ineqs_json(self.bounds), "trivial": self.trivial}

    @staticmethod
    def from_json(d: dict) -> "ApproxResult":
        return ApproxResult(FinSeq.from_json(d["a"]), FinSeq.from_json(d["b"]), d["n"], d["m"],
                            Fraction(d["C"]), Fraction(d["eps"]), XPos.parse(d["threshold"]),
                            tuple(index_from_json(i) for i in d["dropped"]),
                            _ineqs_from(d["bounds"]), d["trivial"])


def sup_abs(x: FinSeq) -> XPos:
    """The unweighted sup norm."""
    best = ZERO
    for _, c in x:
        v = c.modulus()
        if v.compare(best) == 1:
            best = v
    return best


def w3_constant(F: W.WeightFamily, n: int, levels: int = W.DEFAULT_LEVELS,
                horizon: int = W.DEFAULT_HORIZON) -> Tuple[int, Fraction]:
    """(m, C) with v_m <= C v_n^2 from a (W3) certificate."""
    v = C.check_w3(F, max(levels, n), horizon)
    if not v.holds:
        raise WitnessError(f"no (W3) certificate at level {n}: check_w3 gives {v.outcome}")
    for k, m, c in v.certificate["map"]:
        if k == n:
            return m, Fraction(c)
    raise WitnessError(f"no (W3) certificate at level {n}")  # pragma: no cover


def approx_binf(F: W.WeightFamily, a: FinSeq, n: int, eps, w3: Optional[Tuple[int, Fraction]] = None,
                levels: int = W.DEFAULT_LEVELS, horizon: int = W.DEFAULT_HORIZON) -> ApproxResult:
    """b = a restricted to J_1 = {j : v_n(j) >= t} with t = eps / (2 C ||a||_{n,inf}).

    Records ||b||_inf <= (2C/eps) ||a||_{n,inf}^2 and ||a - b||_{m,inf} < eps.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise WitnessError("eps must be positive")
    m, Cn = w3 if w3 is not None else w3_constant(F, n, levels, horizon)
    if not a:
        return ApproxResult(a, a, n, m, Cn, eps, XPos.inf(), (), (), trivial=True)
    an = norm(F, n, P_INF, a)
    if an.is_inf:
        raise WitnessError(f"a is not in l_inf(v_{n}): ||a||_{{{n},inf}} = inf")
    t = XPos.exact(eps) / (XPos.exact(2 * Cn) * an)
    keep = {i for i in a.support if W.eval_weight(F, n, i).compare(t) in (0, 1)}
    b = a.restrict(lambda i: i in keep)
    dropped = tuple(i for i in a.support if i not in keep)
    rhs = XPos.exact(2 * Cn / eps) * an ** 2
    bounds = (
        Inequality.make("||b||_inf <= (2C/eps) ||a||_{n,inf}^2", sup_abs(b), "<=", rhs),
        Inequality.make("||a - b||_{m,inf} < eps", norm(F, m, P_INF, a - b), "<",
                        XPos.exact(eps)),
    )
    return ApproxResult(a, b, n, m, Cn, eps, t, dropped, bounds)


# --------------------------------------------------------------------------
# unbounded weights


@dataclass(frozen=True)
class UnboundedWitness:
    family: str
    p: str
    mode: str
    indices: Tuple
    constants: Tuple[str, ...]       # C_1, ..., C_L
    inequalities: Tuple[Inequality, ...]
    horizon: int

    @property
    def verified(self) -> bool:
        return all(q.holds() for q in self.inequalities)

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "kind": "unbounded", "family": self.family,
                "p": self.p, "mode": self.mode,
                "indices": [index_to_json(i) for i in self.indices],
                "constants": list(self.constants),
                "inequalities": _ineqs_json(self.inequalities), "horizon": self.horizon}

    @staticmethod
    def from_json(d: dict) -> "UnboundedWitness":
        return UnboundedWitness(d["family"], d["p"], d["mode"],
                                tuple(index_from_json(i) for i in d["indices"]),
                                tuple(d["constants"]), _ineqs_from(d["inequalities"]),
                                d["horizon"])


def witness_threshold(mode: str, l: int) -> XPos:
    return ONE if mode == GEQ_ONE else XPos.exact(2 ** l)


def witness_constant(F: W.WeightFamily, mode: str, p, indices, k: int) -> XPos:
    """C_k from the indices j_1..j_k, with 1/inf = 0."""
    vals = [ONE / W.eval_weight(F, k, j) for j in indices[:k]]
    if mode == GEQ_ONE:
        best = ZERO
        for v in vals:
            v = v ** p
            if v.compare(best) == 1:
                best = v
        return best + ONE
    total = ZERO
    for v in vals:
        total = total + v
    return total + ONE


def unbounded_witness(F: W.WeightFamily, p, L: int = 10, horizon: int = W.DEFAULT_HORIZON,
                      levels: int = W.DEFAULT_LEVELS) -> UnboundedWitness:
    """Indices j_1 < ... < j_L with v_k(j_l) >= 1 (p finite) or >= 2^l (p in {0, inf}) for k <= l.

    Raises :class:`EventuallyBoundedError` when some v_n is provably bounded.
    The search takes the first admissible index in enumeration order; since
    v_k >= v_l for k <= l it is enough to test v_l.
    """
    p = parse_order(p)
    if L < 1:
        raise WitnessError("the witness length L must be at least 1")
    mode = GEQ_POW2 if is_sup_order(p) else GEQ_ONE
    bounded = C.check_eventually_lp(F, P_INF, levels, horizon)
    if bounded.holds:
        cert = bounded.certificate
        raise EventuallyBoundedError(
            f"V is eventually bounded (v_{cert['level']} <= {cert['bound']}), so no unbounded "
            "witness exists; by Theorem finite-order / Theorem thm:kinf the amenability "
            "question is decided by the bounded branch")
    chosen: List = []
    it = iter(F.index_set)
    scanned = 0
    for l in range(1, L + 1):
        t = witness_threshold(mode, l)
        found = None
        for idx in it:
            scanned += 1
            if scanned > horizon:
                break
            c = W.eval_weight(F, l, idx).compare(t)
            if c is not None and c >= 0:
                found = idx
                break
        if found is None:
            raise WitnessError(f"no index j_{l} with v_{l}(j) >= {t} among the first {horizon} "
                               "indices; the weights may be eventually bounded")
        chosen.append(found)
    ineqs = []
    for l, j in enumerate(chosen, start=1):
        t = witness_threshold(mode, l)
        for k in range(1, l + 1):
            ineqs.append(Inequality.make(f"v_{k}(j_{l}) >= {t}", W.eval_weight(F, k, j), ">=", t))
    consts = tuple(str(witness_constant(F, mode, p, chosen, k)) for k in range(1, L + 1))
    return UnboundedWitness(F.name, order_str(p), mode, tuple(chosen), consts, tuple(ineqs),
                            horizon)


def verify_unbounded(F: W.WeightFamily, w: UnboundedWitness) -> bool:
    """Recompute every recorded inequality and constant from the family."""
    p = parse_order(w.p)
    pos = []
    for l, j in enumerate(w.indices, start=1):
        t = witness_threshold(w.mode, l)
        for k in range(1, l + 1):
            c = W.eval_weight(F, k, j).compare(t)
            if c is None or c < 0:
                return False
        pos.append(j)
    if len(set(w.indices)) != len(w.indices):
        return False
    for k in range(1, len(w.indices) + 1):
        if str(witness_constant(F, w.mode, p, pos, k)) != w.constants[k - 1]:
            return False
    return w.verified


# --------------------------------------------------------------------------
# one index per row outside S


@dataclass(frozen=True)
class NoSplitWitness:
    family: str
    S: str
    R: Tuple[Tuple[int, int], ...]
    m_max: int
    lower_bounds: Tuple[Tuple[int, str], ...]    # (m, inf over R of v_m / v_1)
    inequalities: Tuple[Inequality, ...]

    @property
    def verified(self) -> bool:
        return all(q.holds() for q in self.inequalities)

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "kind": "nosplit", "family": self.family,
                "S": self.S, "R": [list(r) for r in self.R], "m_max": self.m_max,
                "lower_bounds": [list(b) for b in self.lower_bounds],
                "inequalities": _ineqs_json(self.inequalities)}

    @staticmethod
    def from_json(d: dict) -> "NoSplitWitness":
        return NoSplitWitness(d["family"], d["S"], tuple(tuple(r) for r in d["R"]), d["m_max"],
                              tuple((m, v) for m, v in d["lower_bounds"]),
                              _ineqs_from(d["inequalities"]))


def first_outside(S: Predicate, row: int) -> int:
    s = S.row_section(row)
    if s is not None and s.is_finite:
        j = 1
        while j in s.members:
            j += 1
        return j
    j = 1
    while S.contains((row, j)):
        j += 1
    return j


def no_split_witness(F: W.WeightFamily, S: Optional[Predicate] = None, m_max: int = 10,
                     rows: Optional[int] = None, horizon: int = W.DEFAULT_HORIZON) -> NoSplitWitness:
    """R = {(n, j_n)} outside S with v_m(n, j_n) = 1 for all n >= m.

    Needs k_inf(S, V_S) to be Banach, i.e. S meets every row finitely.
    """
    S = S if S is not None else Empty()
    grid, S = C.grid_and_subset(F, S)
    banach = C.check_banach_rows(grid, S, max(m_max, 1), horizon)
    if not banach.holds:
        raise WitnessError(f"Lemma fin_inter precondition fails: k_inf(S, V_S) Banach is "
                           f"{banach.outcome} ({banach.reason})")
    rows = rows if rows is not None else 2 * m_max
    R = tuple((n, first_outside(S, n)) for n in range(1, rows + 1))
    ineqs = []
    lows = []
    for m in range(1, m_max + 1):
        low = ONE
        for (n, j) in R:
            v = grid.eval(m, (n, j))
            if n >= m:
                ineqs.append(Inequality.make(f"v_{m}({n}, {j}) = 1", v, "==", ONE))
            r = v / grid.eval(1, (n, j))
            if r.compare(low) == -1:
                low = r
        ineqs.append(Inequality.make(f"inf_R v_{m} / v_1 > 0", low, ">", ZERO))
        lows.append((m, str(low)))
    return NoSplitWitness(F.name, S.describe(), R, m_max, tuple(lows), tuple(ineqs))


def verify_no_split(F: W.WeightFamily, w: NoSplitWitness, S: Predicate) -> bool:
    grid, S = C.grid_and_subset(F, S)
    for (n, j) in w.R:
        if S.contains((n, j)):
            return False
        for m in range(1, min(n, w.m_max) + 1):
            if grid.eval(m, (n, j)) != ONE:
                return False
    return w.verified
