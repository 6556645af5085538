"""Three-valued decision procedures for conditions on weight families.

Every checker returns a :class:`Verdict`.  ``Holds`` carries a certificate and
``Fails`` a witness, both JSON-native so that :func:`verify_verdict` can
re-evaluate them against the family.  ``Unknown`` records the search horizon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import islice
from typing import Optional, Sequence

from . import expr as E
from . import weights as W
from .indexsets import (
    EMPTY, All, Empty, Nat, NatSquared, Predicate, complement, conjoin, square_position,
)
from .scalars import (
    DEFAULT_TOL, ONE, P_INF, ZERO, XPos, is_sup_order, order_str, parse_order,
)
from .serial import index_from_json, index_to_json

HOLDS, FAILS, UNKNOWN = "Holds", "Fails", "Unknown"

CITE_W3 = "condition (W3): for each n some v_m/v_n^2 is bounded"
CITE_NN = "Example NN: v_2n <= v_n^2"
CITE_DPS_W3 = "Example dual_power: (W3) holds iff r > R implies r^2 > R"
CITE_LP = "definition: V is eventually in l_p iff some v_n lies in l_p(I)"
CITE_BOUNDED = "definition: V is eventually bounded iff some v_n is bounded"
CITE_C0 = "definition: V is eventually c_0 iff some v_n tends to 0"
CITE_PHI = "Example phi: v_n(j) = inf for j > n"
CITE_MONTEL = ("Lemma no_decomp: an infinite R with inf_R v_m/v_n > 0 for every m "
               "obstructs the Montel property")
CITE_SCHWARTZ = "Example dual_power_amen: for R = 0 the space DLambda_0(alpha) is Schwartz"
CITE_FIN_INTER = "Lemma fin_inter: k_inf(S, V_S) is Banach iff S meets every row L_n finitely"
CITE_DSUM = "direct sums: u_n = v_n on I and w_n on J"
CITE_SUBSET = "restriction to a subset S: sums and suprema over S are bounded by those over I"

LEVEL_SCAN = 10_000     # how far level searches may go
VERIFY_CAP = 400        # indices re-evaluated by the verifier per claim
WITNESS_STEPS = 6       # thresholds 2, 4, ..., 2^6 recorded in divergence witnesses
SUM_TERMS = 64          # terms recorded in a partial-sum divergence witness


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check with its certificate, witness or search horizon."""

    outcome: str
    check: str
    params: dict = field(default_factory=dict)
    certificate: Optional[dict] = None
    witness: Optional[dict] = None
    horizon: Optional[dict] = None
    rule_citation: str = ""
    reason: str = ""
    decidable: bool = True

    @property
    def holds(self) -> bool:
        return self.outcome == HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome == FAILS

    @property
    def unknown(self) -> bool:
        return self.outcome == UNKNOWN

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "check": self.check,
            "params": self.params,
            "certificate": self.certificate,
            "witness": self.witness,
            "horizon": self.horizon,
            "rule_citation": self.rule_citation,
            "reason": self.reason,
            "decidable": self.decidable,
        }

    @staticmethod
    def from_json(d: dict) -> "Verdict":
        return Verdict(d["outcome"], d["check"], d.get("params") or {}, d.get("certificate"),
                       d.get("witness"), d.get("horizon"), d.get("rule_citation", ""),
                       d.get("reason", ""), d.get("decidable", True))


@dataclass(frozen=True)
class _R:
    outcome: str
    certificate: Optional[dict] = None
    witness: Optional[dict] = None
    citation: str = ""
    reason: str = ""
    decidable: bool = True


def _holds(cert, citation, reason=""):
    return _R(HOLDS, certificate=cert, citation=citation, reason=reason)


def _fails(wit, citation, reason=""):
    return _R(FAILS, witness=wit, citation=citation, reason=reason)


def _unknown(reason, citation="", decidable=True):
    return _R(UNKNOWN, citation=citation, reason=reason, decidable=decidable)


@dataclass(frozen=True)
class Ctx:
    levels: int = W.DEFAULT_LEVELS
    horizon: int = W.DEFAULT_HORIZON
    tol: float = DEFAULT_TOL

    def horizon_json(self):
        return {"levels": self.levels, "indices": self.horizon}


def _finish(r: _R, check: str, params: dict, ctx: Ctx) -> Verdict:
    return Verdict(r.outcome, check, params, r.certificate, r.witness, ctx.horizon_json(),
                   r.citation, r.reason, r.decidable)


# --------------------------------------------------------------------------
# small helpers


def _s(x: XPos) -> str:
    return str(x)


def _j(idx):
    return index_to_json(idx)


def rational_ceiling(x: XPos) -> Fraction:
    """A rational upper bound for a finite XPos, equal to it when rational."""
    if x.is_rational:
        return x.value
    f = float(x)
    q = Fraction(f * (1 + 1e-9) + 1e-300).limit_denominator(10 ** 12)
    while XPos.exact(q).compare(x) == -1:
        q *= Fraction(1_000_001, 1_000_000)
    return q


def _pow(x: XPos, p) -> XPos:
    return x ** p


def _leq(a: XPos, b: XPos, tol: float) -> bool:
    c = a.compare(b, tol)
    return c is None or c <= 0


def _geq(a: XPos, b: XPos, tol: float) -> bool:
    c = a.compare(b, tol)
    return c is None or c >= 0


def _prefix(F: W.WeightFamily, h: int) -> list:
    return F.index_set.prefix(h)


def _first_finite_level(values_at, start: int = 1, limit: int = LEVEL_SCAN) -> Optional[int]:
    for n in range(start, limit + 1):
        if values_at(n):
            return n
    return None


def finite_members(F: W.WeightFamily) -> Optional[list]:
    """The index set of F when it is provably finite, else None."""
    if not isinstance(F, W.Restriction):
        return None
    base, pred = F.base.index_set, F.pred
    if isinstance(base, Nat):
        s = pred.nat_section()
        if s is not None and s.is_finite:
            return sorted(s.members)
        return None
    if isinstance(base, NatSquared):
        tail = pred.row_tail()
        if tail is None or tail[1] != EMPTY:
            return None
        out = []
        for k in range(1, tail[0] + 1):
            s = pred.row_section(k)
            if s is None or not s.is_finite:
                return None
            out.extend((k, j) for j in s.members)
        return sorted(out, key=lambda ij: square_position(*ij))
    return None


def _base_kind(F: W.WeightFamily) -> W.WeightFamily:
    while isinstance(F, W.Restriction):
        F = F.base
    return F


# --------------------------------------------------------------------------
# (W3)


def check_w3(F: W.WeightFamily, levels: int = W.DEFAULT_LEVELS,
             horizon: int = W.DEFAULT_HORIZON, tol: float = DEFAULT_TOL) -> Verdict:
    """Decide (W3): for every n there are m and C with v_m <= C v_n^2.

    Holds carries the map n -> (m, C) for n <= levels; Fails carries a level n
    and, for each m <= levels, indices along which v_m / v_n^2 exceeds 2, 4, 8, ...
    """
    ctx = Ctx(levels, horizon, tol)
    params = {"family": F.name, "levels": levels, "horizon": horizon}
    return _finish(_w3(F, ctx), "w3", params, ctx)


def _w3_cert(triples, proof: str, rule: str = "") -> dict:
    return {"map": [[n, m, str(C)] for n, m, C in triples], "proof": proof, "rule": rule}


def _w3(F, ctx: Ctx) -> _R:
    members = finite_members(F)
    if members is not None:
        return _w3_finite(F, members, ctx)
    if isinstance(F, W.Phi):
        return _holds(_w3_cert([(n, n, 1) for n in range(1, ctx.levels + 1)], "symbolic",
                               "m = n, C = 1: ratios are 1/1 or inf/inf"), CITE_PHI)
    if isinstance(F, W.Grid):
        return _holds(_w3_cert([(n, 2 * n, 1) for n in range(1, ctx.levels + 1)], "symbolic",
                               "m = 2n, C = 1"), CITE_NN)
    if isinstance(F, W.Uniform):
        return _w3_uniform(F, ctx)
    if isinstance(F, W.DualPowerSeries):
        return _w3_dps(F, ctx)
    if isinstance(F, W.Table):
        return _w3_table(F, ctx)
    if isinstance(F, W.Restriction):
        base = _w3(F.base, ctx)
        if base.outcome == HOLDS:
            return replace(base, citation=f"{base.citation}; {CITE_SUBSET}")
        if base.outcome == FAILS and F.pred.is_infinite(F.base.index_set):
            return _w3_dps_fail_on(F, base, ctx)
        return _unknown(f"base family: {base.outcome}; subset not decided", base.citation)
    if isinstance(F, W.DirectSum):
        a, b = _w3(F.left, ctx), _w3(F.right, ctx)
        for side, r in (("L", a), ("R", b)):
            if r.outcome == FAILS:
                return _fails({"side": side, **r.witness}, f"{r.citation}; {CITE_DSUM}")
        if a.outcome == HOLDS and b.outcome == HOLDS:
            ma = {t[0]: t for t in a.certificate["map"]}
            mb = {t[0]: t for t in b.certificate["map"]}
            triples = []
            for n in range(1, ctx.levels + 1):
                _, m1, c1 = ma[n]
                _, m2, c2 = mb[n]
                triples.append((n, max(m1, m2), max(Fraction(c1), Fraction(c2))))
            proof = "symbolic" if "horizon" not in (a.certificate["proof"],
                                                    b.certificate["proof"]) else "horizon"
            return _holds(_w3_cert(triples, proof, "m = max, C = max over the two parts"),
                          CITE_DSUM)
        return _unknown("a direct summand is undecided")
    return _unknown(f"no decision rule for kind {F.kind}")


def _w3_finite(F, members, ctx: Ctx) -> _R:
    if not members:
        return _holds(_w3_cert([(n, n, 1) for n in range(1, ctx.levels + 1)], "finite",
                               "empty index set"), CITE_W3)
    m0 = _first_finite_level(lambda n: all(F.eval(n, i).is_finite for i in members))
    triples = []
    for n in range(1, ctx.levels + 1):
        m = max(n, m0)
        worst = max((F.eval(m, i) / (F.eval(n, i) ** 2) for i in members),
                    key=float, default=ONE)
        triples.append((n, m, rational_ceiling(worst) if not worst.is_zero else 1))
    return _holds(_w3_cert(triples, "finite", f"finite index set of size {len(members)}"),
                  CITE_W3)


def _w3_uniform(F: W.Uniform, ctx: Ctx) -> _R:
    m0 = _first_finite_level(lambda n: F.level_value(n).is_finite)
    triples = []
    for n in range(1, ctx.levels + 1):
        g = F.level_value(n)
        if g.is_finite:
            triples.append((n, n, rational_ceiling(ONE / g)))
        else:
            triples.append((n, max(n, m0), 1))
    return _holds(_w3_cert(triples, "symbolic", "v_m / v_n^2 = g(m) / g(n)^2 is constant"),
                  CITE_W3)


def _w3_dps(F: W.DualPowerSeries, ctx: Ctx) -> _R:
    R = F.R
    if R >= 1:
        # r_n > R >= 1, so v_n / v_n^2 = r_n^(-alpha_j) <= 1
        return _holds(_w3_cert([(n, n, 1) for n in range(1, ctx.levels + 1)], "symbolic",
                               "R >= 1: m = n, C = 1"), CITE_DPS_W3)
    if R == 0:
        triples = []
        for n in range(1, ctx.levels + 1):
            target = E.v_mul(F.r(n), F.r(n))
            m = None
            for cand in range(n, ctx.horizon + 1):
                try:
                    if E.v_cmp(F.r(cand), target) <= 0:
                        m = cand
                        break
                except E.EvaluationError:
                    continue
            if m is None:
                return _unknown(f"no m <= {ctx.horizon} with r_m <= r_{n}^2 found", CITE_DPS_W3)
            triples.append((n, m, 1))
        return _holds(_w3_cert(triples, "symbolic", "R = 0: r_m <= r_n^2 gives ratio <= 1"),
                      CITE_DPS_W3)
    # 0 < R < 1: some r_n lies in (R, sqrt(R)], and then r_m > R >= r_n^2 for all m
    n_bad = None
    for n in range(1, ctx.horizon + 1):
        try:
            if E.v_cmp(E.v_mul(F.r(n), F.r(n)), R) <= 0:
                n_bad = n
                break
        except E.EvaluationError:
            continue
    if n_bad is None:
        return _unknown(f"0 < R < 1 but no r_n <= sqrt(R) among n <= {ctx.horizon}", CITE_DPS_W3)
    return _fails(_w3_dps_witness(F, n_bad, F.index_set.prefix, ctx), CITE_DPS_W3,
                  f"r_{n_bad} lies in (R, sqrt(R)], so r_m / r_{n_bad}^2 > 1 for every m")


def _w3_dps_witness(F, n: int, prefix, ctx: Ctx, candidates: Optional[list] = None) -> dict:
    seqs = []
    pool = candidates
    for m in range(1, ctx.levels + 1):
        points = []
        t = 1
        j_iter = iter(pool) if pool is not None else _doubling(ctx.horizon)
        for idx in j_iter:
            ratio = F.eval(m, idx) / (F.eval(n, idx) ** 2)
            while t <= WITNESS_STEPS and _geq(ratio, XPos.exact(2 ** t), 0.0) \
                    and ratio.compare(XPos.exact(2 ** t)) is not None:
                points.append([_j(idx), t, _s(ratio)])
                t += 1
            if t > WITNESS_STEPS:
                break
        seqs.append({"m": m, "points": points})
    wit = {"level": n, "sequences": seqs}
    if isinstance(F, W.DualPowerSeries):
        wit.update({"r_n": _value_str(F.r(n)), "R": str(F.R)})
    return wit


def _doubling(limit: int):
    j = 1
    while j <= limit:
        yield j
        j = j * 2 if j < 16 else j + max(1, j // 4)


def _value_str(v) -> str:
    if isinstance(v, E.Exp):
        return f"exp({v.q})"
    if v is E.INF:
        return "inf"
    return str(v)


def _w3_dps_fail_on(F: W.Restriction, base: _R, ctx: Ctx) -> _R:
    n = base.witness["level"]
    cand = F.index_set.prefix(min(ctx.horizon, 4096))
    dps = _base_kind(F)
    if not isinstance(dps, W.DualPowerSeries):
        return _unknown("base family fails (W3); subset not decided", base.citation)
    wit = _w3_dps_witness(F, n, None, ctx, candidates=cand)
    return _fails(wit, f"{base.citation}; alpha_j -> inf along every infinite subset",
                  base.reason)


def _w3_table(F: W.Table, ctx: Ctx) -> _R:
    if F.periodic:
        L = F.data_levels
        triples = []
        for n in range(1, ctx.levels + 1):
            m = max(n, L)
            worst = ZERO
            for row in F.data:
                vn, vm = row[min(n, len(row)) - 1], row[min(m, len(row)) - 1]
                r = vm / (vn ** 2)
                if r.compare(worst) == 1:
                    worst = r
            triples.append((n, m, rational_ceiling(worst) if not worst.is_zero else 1))
        return _holds(_w3_cert(triples, "symbolic", "periodic data: finitely many classes"),
                      CITE_W3)
    poly = static_poly(F)
    if poly is not None and max(poly) < 0:
        wit = _w3_dps_witness(F, 1, None, ctx, candidates=_tail_indices(F, ctx.horizon))
        wit["symbolic"] = f"v_m / v_1^2 >= c j^({-max(poly)}) on the tail for every m"
        return _fails(wit, CITE_W3, "level-independent weights tending to 0: "
                      "v_m / v_n^2 = 1 / v_n is unbounded")
    if isinstance(F.index_set, Nat):
        triples = []
        for n in range(1, ctx.levels + 1):
            found = None
            for m in range(n, max(2 * n, ctx.levels) + 1):
                C = _genpoly_w3_bound(F, n, m)
                if C is not None:
                    found = (n, m, C)
                    break
            if found is None:
                return _unknown(f"no symbolic bound for v_m / v_{n}^2 with m <= "
                                f"{max(2 * n, ctx.levels)}; table data beyond the horizon "
                                "cannot be bounded", CITE_W3)
            triples.append(found)
        return _holds(_w3_cert(triples, "symbolic",
                               "positive generalized polynomials: deg v_m <= 2 deg v_n"), CITE_W3)
    return _unknown("no symbolic rule for tables on N x N", CITE_W3)


def static_poly(F: W.WeightFamily) -> Optional[dict]:
    """The tail of a level-independent expression table on N as a generalized polynomial."""
    if not isinstance(F, W.Table) or F.periodic or not isinstance(F.index_set, Nat):
        return None
    if F.expression.depends_on(F.expression.params[0]):
        return None
    return _level_poly(F, 1)


def _tail_indices(F: W.Table, limit: int) -> list:
    return [j for j in _doubling(limit) if j > F.block]


def _level_poly(F: W.Table, n: int) -> Optional[dict]:
    """v_n on the expression part as a positive generalized polynomial in j."""
    if F.expression is None:
        return None
    node = E.substitute(F.expression.node, {F.expression.params[0]: Fraction(n)})
    p = E.genpoly(node, F.expression.params[-1])
    if not p or any(c <= 0 for c in p.values()):
        return None
    return p


def _head_ratio(F: W.Table, n: int, m: int) -> Optional[XPos]:
    worst = ZERO
    for pos in range(1, F.block + 1):
        idx = list(islice(iter(F.index_set), pos - 1, pos))[0]
        r = F.eval(m, idx) / (F.eval(n, idx) ** 2)
        if r.is_inf:
            return None
        if r.compare(worst) == 1:
            worst = r
    return worst


def _genpoly_w3_bound(F: W.Table, n: int, m: int) -> Optional[Fraction]:
    pn, pm = _level_poly(F, n), _level_poly(F, m)
    if pn is None or pm is None:
        return None
    top = max(pn)
    if max(pm) > 2 * top:
        return None
    C = sum(pm.values()) / pn[top] ** 2
    if F.data:
        h = _head_ratio(F, n, m)
        if h is None:
            return None
        C = max(C, rational_ceiling(h))
    return C


# --------------------------------------------------------------------------
# eventually in l_p


def check_eventually_lp(F: W.WeightFamily, p, levels: int = W.DEFAULT_LEVELS,
                        horizon: int = W.DEFAULT_HORIZON, tol: float = DEFAULT_TOL) -> Verdict:
    """Decide whether some v_n lies in l_p (p >= 1), l_inf (p = inf) or c_0 (p = 0).

    The c_0 variant decides whether the unit sequence lies in k_0(V).
    """
    p = parse_order(p)
    ctx = Ctx(levels, horizon, tol)
    params = {"family": F.name, "p": order_str(p), "levels": levels, "horizon": horizon}
    return _finish(_lp(F, p, ctx), "eventually_lp", params, ctx)


def _lp_cite(p) -> str:
    if p == P_INF:
        return CITE_BOUNDED
    if p == 0:
        return CITE_C0
    return CITE_LP


def _lp_cert(n, bound, method, exact, **extra) -> dict:
    d = {"level": n, "bound": bound if isinstance(bound, str) else str(bound),
         "method": method, "exact": exact}
    d.update(extra)
    return d


def _lp(F, p, ctx: Ctx) -> _R:
    members = finite_members(F)
    if members is not None:
        return _lp_finite(F, members, p, ctx)
    if isinstance(F, W.Phi):
        pts = [[n, _j(n + 1), "inf"] for n in range(1, ctx.levels + 1)]
        return _fails({"infinite_values": pts, "symbolic": "v_n(j) = inf for every j > n"},
                      f"{_lp_cite(p)}; {CITE_PHI}",
                      "each v_n takes the value inf, so no v_n is bounded or summable")
    if isinstance(F, W.Uniform):
        return _lp_uniform(F, p, ctx)
    if isinstance(F, W.Grid):
        return _lp_grid(F, p, ctx)
    if isinstance(F, W.DualPowerSeries):
        return _lp_dps(F, p, ctx)
    if isinstance(F, W.Table):
        return _lp_table(F, p, ctx)
    if isinstance(F, W.Restriction):
        return _lp_restriction(F, p, ctx)
    if isinstance(F, W.DirectSum):
        a, b = _lp(F.left, p, ctx), _lp(F.right, p, ctx)
        for side, r in (("L", a), ("R", b)):
            if r.outcome == FAILS:
                return _fails({"side": side, **r.witness}, f"{r.citation}; {CITE_DSUM}",
                              r.reason)
        if a.outcome == HOLDS and b.outcome == HOLDS:
            ca, cb = a.certificate, b.certificate
            n = max(ca["level"], cb["level"])
            xa, xb = XPos.parse(ca["bound"]), XPos.parse(cb["bound"])
            if is_sup_order(p):
                bound = xa if xa.compare(xb) != -1 else xb
            else:
                bound = xa + xb
            return _holds(_lp_cert(n, bound, "direct sum of the two certificates",
                                   ca["exact"] and cb["exact"], parts=[ca, cb]),
                          f"{_lp_cite(p)}; {CITE_DSUM}")
        return _unknown("a direct summand is undecided", _lp_cite(p))
    return _unknown(f"no decision rule for kind {F.kind}", _lp_cite(p))


def _divergence_points(F, n: int, p, indices: Sequence, ctx: Ctx) -> dict:
    """Finite evidence that v_n is not in l_p / c_0 / l_inf along the given indices."""
    record = {"n": n}
    if is_sup_order(p):
        pts = []
        t = 1 if p == P_INF else 0
        for idx in indices:
            v = F.eval(n, idx)
            if v.is_inf:
                pts.append([_j(idx), "inf"])
                break
            if p == 0:
                # not tending to 0: values stay above a fixed positive level
                if len(pts) < WITNESS_STEPS:
                    pts.append([_j(idx), _s(v)])
                continue
            while t <= WITNESS_STEPS and _geq(v, XPos.exact(2 ** t), 0.0):
                pts.append([_j(idx), _s(v)])
                t += 1
            if t > WITNESS_STEPS:
                break
        record["points"] = pts
        return record
    terms, sums = [], []
    total = ZERO
    for h, idx in enumerate(islice(indices, SUM_TERMS), start=1):
        v = F.eval(n, idx)
        if v.is_inf:
            record["points"] = [[_j(idx), "inf"]]
            return record
        terms.append([_j(idx), _s(v)])
        total = total + _pow(v, p)
        if h & (h - 1) == 0:
            sums.append([h, _s(total)])
    record["terms"] = terms
    record["partial_sums"] = sums
    return record


def _lp_finite(F, members, p, ctx: Ctx) -> _R:
    n = _first_finite_level(lambda k: all(F.eval(k, i).is_finite for i in members))
    vals = [F.eval(n, i) for i in members]
    if is_sup_order(p):
        bound = max(vals, key=float, default=ZERO)
    else:
        bound = ZERO
        for v in vals:
            bound = bound + _pow(v, p)
    return _holds(_lp_cert(n, bound, "finite index set", bound.is_exact,
                           size=len(members)), _lp_cite(p))


def _lp_uniform(F: W.Uniform, p, ctx: Ctx) -> _R:
    n0 = _first_finite_level(lambda n: F.level_value(n).is_finite)
    if p == P_INF:
        return _holds(_lp_cert(n0, F.level_value(n0), "constant weight", True), CITE_BOUNDED)
    idx = _prefix(F, min(ctx.horizon, 1024))
    levels = [_divergence_points(F, n, p, idx, ctx) for n in range(1, min(ctx.levels, 4) + 1)]
    return _fails({"levels": levels,
                   "symbolic": "v_n is a positive constant on an infinite set"},
                  _lp_cite(p), "a positive constant is neither summable nor null")


def _lp_grid(F: W.Grid, p, ctx: Ctx) -> _R:
    if p == P_INF:
        return _holds(_lp_cert(1, ONE, "v_1 = 1 everywhere and c_j <= 1", True), CITE_BOUNDED)
    levels = []
    for n in range(1, min(ctx.levels, 4) + 1):
        row = [(n, j) for j in range(1, min(ctx.horizon, 1024) + 1)]
        levels.append(_divergence_points(F, n, p, row, ctx))
    return _fails({"levels": levels,
                   "symbolic": "v_n(i, j) = 1 for all i >= n, an infinite set"},
                  _lp_cite(p), "v_n equals 1 on every row L_i with i >= n")


def _dps_level_below_one(F: W.DualPowerSeries, strict: bool, ctx: Ctx) -> Optional[int]:
    for n in range(1, ctx.horizon + 1):
        try:
            c = E.v_cmp(F.r(n), Fraction(1), ctx.tol)
        except E.EvaluationError:
            continue
        if c < 0 or (c == 0 and not strict):
            return n
    return None


def _lp_dps(F: W.DualPowerSeries, p, ctx: Ctx) -> _R:
    cite = f"{_lp_cite(p)}; Example dual_power_amen"
    if F.R >= 1:
        idx = list(_doubling(min(ctx.horizon, 4096)))
        levels = [_divergence_points(F, n, P_INF if p == 0 else p, idx, ctx)
                  for n in range(1, min(ctx.levels, 3) + 1)]
        return _fails({"levels": levels,
                       "symbolic": "r_n > R >= 1 and alpha_j -> inf, so r_n^alpha_j -> inf"},
                      cite, "the weights (r^alpha_j) are unbounded for every r > R >= 1")
    if p == P_INF or p == 0:
        n = _dps_level_below_one(F, strict=(p == 0), ctx=ctx)
        if n is None:
            return _unknown(f"no r_n {'<' if p == 0 else '<='} 1 among n <= {ctx.horizon}",
                            cite)
        extra = {}
        if p == 0:
            extra["decay"] = _decay_points(F, n, ctx)
        return _holds(_lp_cert(n, F.eval(n, 1), "alpha increasing and r_n <= 1: "
                               "sup attained at j = 1", True, **extra), cite)
    return _lp_dps_series(F, p, ctx, cite)


def _decay_points(F, n: int, ctx: Ctx, indices=None) -> list:
    pts, t = [], 1
    it = indices if indices is not None else _doubling(ctx.horizon)
    for idx in it:
        v = F.eval(n, idx)
        while t <= WITNESS_STEPS and _leq(v, XPos.exact(Fraction(1, 2 ** t)), 0.0):
            pts.append([_j(idx), _s(v)])
            t += 1
        if t > WITNESS_STEPS:
            break
    return pts


def _xpos_value(v) -> XPos:
    return E.to_xpos(v)


def _lp_dps_series(F: W.DualPowerSeries, p, ctx: Ctx, cite: str) -> _R:
    cls = F.alpha_class
    if cls is None:
        return _unknown("alpha has no recognised growth class; partial sums cannot prove "
                        "convergence", cite)
    kind = cls[0]
    if kind in ("linear", "power"):
        n = _dps_level_below_one(F, strict=True, ctx=ctx)
        if n is None:
            return _unknown(f"no r_n < 1 among n <= {ctx.horizon}", cite)
        r = F.r(n)
        if kind == "linear":
            a, b = cls[1], cls[2]
            q = E.v_pow(r, p * a)
            head = E.v_pow(r, p * (a + b))
            bound = E.v_div(head, E.v_sub(Fraction(1), q))
            return _holds(_lp_cert(n, _xpos_value(bound), "geometric series",
                                   E.is_exact(bound), formula="r^(p(a+b)) / (1 - r^(pa))",
                                   a=str(a), b=str(b)), cite)
        d, poly = cls[1], cls[2]
        lead = poly[d]
        c0 = poly.get(Fraction(0), Fraction(0))
        shift = E.v_pow(r, p * c0)
        if d >= 1:
            q = E.v_pow(r, p * lead)
            bound = E.v_mul(shift, E.v_div(q, E.v_sub(Fraction(1), q)))
            return _holds(_lp_cert(n, _xpos_value(bound),
                                   "comparison with a geometric series (j^d >= j)",
                                   E.is_exact(bound), degree=str(d)), cite)
        lam = -float(p) * float(lead) * math.log(E.to_float(r))
        integral = math.gamma(1 + 1 / float(d)) / lam ** (1 / float(d))
        bound = E.to_float(shift) * integral
        return _holds(_lp_cert(n, XPos.approx(bound * (1 + 1e-9)),
                               "comparison with the integral of exp(-lambda x^d)", False,
                               degree=str(d)), cite)
    # logarithmic alpha: v_n(j)^p = r^(pb) j^(-s) with s = -p c log r_n
    c, b = cls[1], cls[2]
    for n in range(1, ctx.horizon + 1):
        logr = E.v_log(F.r(n))
        s = E.v_mul(E.v_neg(logr), p * c)
        try:
            if E.v_cmp(s, Fraction(1), ctx.tol) <= 0:
                continue
        except E.EvaluationError:
            continue
        shift = E.v_pow(F.r(n), p * b)
        zeta = E.v_add(Fraction(1), E.v_div(Fraction(1), E.v_sub(s, Fraction(1))))
        bound = E.v_mul(shift, zeta)
        return _holds(_lp_cert(n, _xpos_value(bound), "p-series: sum j^(-s) <= 1 + 1/(s-1)",
                               E.is_exact(bound), s=_value_str(s)), cite)
    # no level found; fails exactly when R >= exp(-1/(pc))
    if F.R > 0:
        thr = math.exp(-1 / (float(p) * float(c)))
        if float(F.R) >= thr * (1 + ctx.tol):
            idx = list(_doubling(min(ctx.horizon, 4096)))
            levels = [_divergence_points(F, n, p, idx, ctx) for n in range(1, 3)]
            return _fails({"levels": levels,
                           "symbolic": f"r_n > R >= exp(-1/(p c)) = {thr:.6g}, so the "
                                       "p-series exponent stays <= 1"},
                          cite, "sum of j^(-s) with s <= 1 diverges at every level")
    return _unknown(f"no level n <= {ctx.horizon} with p-series exponent > 1", cite)


def _lp_table(F: W.Table, p, ctx: Ctx) -> _R:
    cite = _lp_cite(p)
    if F.periodic:
        L = F.data_levels
        if p == P_INF:
            bound = max((row[min(L, len(row)) - 1] for row in F.data), key=float)
            return _holds(_lp_cert(L, bound, "periodic data: maximum over one period", True),
                          cite)
        idx = _prefix(F, min(ctx.horizon, 1024))
        levels = [_divergence_points(F, n, p, idx, ctx) for n in range(1, min(ctx.levels, 4) + 1)]
        return _fails({"levels": levels,
                       "symbolic": "periodic positive values recur infinitely often"},
                      cite, "periodic positive weights are neither summable nor null")
    head_level = _first_finite_level(
        lambda n: all(row[min(n, len(row)) - 1].is_finite for row in F.data)) if F.data else 1
    head_vals = lambda n: [row[min(n, len(row)) - 1] for row in F.data]  # noqa: E731
    if isinstance(F.index_set, Nat):
        for n in range(head_level, ctx.levels + 1):
            poly = _level_poly(F, n)
            if poly is None:
                continue
            top = max(poly)
            A = sum(poly.values())
            if is_sup_order(p):
                if top > 0 or (p == 0 and top == 0):
                    continue
                bound = XPos.exact(A)
                hv = max(head_vals(n), key=float, default=ZERO)
                if hv.compare(bound) == 1:
                    bound = hv
                extra = {"poly": _poly_str(poly)}
                if p == 0:
                    extra["decay"] = _decay_points(F, n, ctx)
                return _holds(_lp_cert(n, bound, "generalized polynomial with exponents <= 0",
                                       True, **extra), cite)
            s = -p * top
            if s <= 1:
                continue
            tail = _pow(XPos.exact(A), p) * XPos.exact(1 + 1 / (s - 1))
            head = ZERO
            for v in head_vals(n):
                head = head + _pow(v, p)
            return _holds(_lp_cert(n, head + tail, "p-series comparison: v_n(j)^p <= A^p j^(-s)",
                                   (head + tail).is_exact, poly=_poly_str(poly), s=str(s)), cite)
    poly = static_poly(F)
    if poly is not None:
        top = max(poly)
        diverges = top > 0 if p == P_INF else (top >= 0 if p == 0 else p * top >= -1)
        if diverges:
            idx = _tail_indices(F, ctx.horizon) if is_sup_order(p) else \
                list(islice(iter(F.index_set), F.block, F.block + SUM_TERMS))
            return _fails({"levels": [_divergence_points(F, 1, p, idx, ctx)],
                           "poly": _poly_str(poly),
                           "symbolic": f"every v_n equals {_poly_str(poly)} on the tail"},
                          cite, "level-independent weights with leading exponent "
                          f"{top} are not eventually in the class")
    if p == P_INF and F.monotone:
        n = head_level
        first_tail = list(islice(iter(F.index_set), F.block, F.block + 1))[0]
        cand = head_vals(n) + [F.eval(n, first_tail)]
        bound = max(cand, key=float)
        if bound.is_finite:
            return _holds(_lp_cert(n, bound, "declared nonincreasing tail: the supremum is "
                                   "attained on the head or the first tail index", True,
                                   conditional="monotone tail declaration"), cite)
    return _unknown("table weights beyond the horizon cannot be bounded or summed; "
                    "partial sums alone never prove convergence", cite)


def _poly_str(poly: dict) -> str:
    return " + ".join(f"{c}*j^({e})" for e, c in sorted(poly.items(), reverse=True))


def _lp_restriction(F: W.Restriction, p, ctx: Ctx) -> _R:
    base = _lp(F.base, p, ctx)
    if base.outcome == HOLDS:
        return replace(base, citation=f"{base.citation}; {CITE_SUBSET}")
    root = _base_kind(F)
    infinite = F.pred.is_infinite(F.base.index_set)
    if isinstance(root, W.Grid) and not isinstance(F.base, W.Restriction) and p != P_INF:
        return _lp_grid_subset(F, root, p, ctx)
    if base.outcome == FAILS and infinite:
        if isinstance(root, (W.Phi, W.Uniform)) or (isinstance(root, W.DualPowerSeries)
                                                     and root.R >= 1) \
                or (isinstance(root, W.Table) and root.periodic):
            idx = F.index_set.prefix(min(ctx.horizon, 1024))
            levels = [_divergence_points(F, n, p if p != 0 else P_INF, idx, ctx)
                      if not isinstance(root, (W.Uniform, W.Table)) or p != 0
                      else _divergence_points(F, n, p, idx, ctx)
                      for n in range(1, min(ctx.levels, 3) + 1)]
            return _fails({"levels": levels, "symbolic": base.witness.get("symbolic", "")
                           + " (along every infinite subset)"},
                          f"{base.citation}; {CITE_SUBSET}", base.reason)
    return _unknown(f"base family: {base.outcome}; the subset is not decided", base.citation)


def _lp_grid_subset(F: W.Restriction, grid: W.Grid, p, ctx: Ctx) -> _R:
    cite = f"{_lp_cite(p)}; Example NN"
    tail = F.pred.row_tail()
    if tail is None:
        return _unknown("the subset's rows are not known symbolically", cite)
    K0, kind = tail
    if kind != EMPTY:
        levels = []
        for n in range(1, min(ctx.levels, 3) + 1):
            pts = []
            for i in range(n, n + 64):
                s = F.pred.row_section(i)
                if s is None or s.kind == EMPTY:
                    continue
                j = _first_member(F.pred, i, ctx.horizon)
                if j is not None:
                    pts.append([[i, j], _s(grid.eval(n, (i, j)))])
                if len(pts) >= 8:
                    break
            levels.append({"n": n, "points": pts})
        return _fails({"levels": levels,
                       "symbolic": "the subset meets infinitely many rows, where v_n = 1 "
                                   "on rows i >= n"},
                      cite, "v_n = 1 at infinitely many points of the subset")
    n = K0 + 1
    rows = [k for k in range(1, K0 + 1)
            if F.pred.row_section(k) is not None and F.pred.row_section(k).kind != EMPTY]
    if p == 0:
        return _holds(_lp_cert(n, ONE, "only rows < n meet the subset, where v_n = c_j^n -> 0",
                               True, rows=rows, decay=_decay_points(
                                   F, n, ctx, F.index_set.prefix(min(ctx.horizon, 4096)))),
                      cite)
    if grid.c_class is None:
        return _unknown("the decay rate of c_j is not known symbolically", cite)
    _, d, a = grid.c_class
    while d * n * p <= 1:
        n += 1
    s = d * n * p
    per_row = _pow(XPos.exact(a), n * p) * XPos.exact(1 + 1 / (s - 1))
    bound = per_row * XPos.exact(max(len(rows), 1))
    return _holds(_lp_cert(n, bound, "rows < n only; p-series comparison for c_j = a j^(-d)",
                           bound.is_exact, rows=rows, s=str(s)), cite)


def _first_member(pred: Predicate, i: int, limit: int) -> Optional[int]:
    s = pred.row_section(i)
    if s is not None and s.kind == "finite":
        return min(s.members)
    for j in range(1, limit + 1):
        if pred.contains((i, j)):
            return j
    return None


# --------------------------------------------------------------------------
# Montel obstruction


def check_montel_obstruction(F: W.WeightFamily, S: Optional[Predicate] = None,
                             levels: int = W.DEFAULT_LEVELS, horizon: int = W.DEFAULT_HORIZON,
                             tol: float = DEFAULT_TOL) -> Verdict:
    """Look for an infinite R in T = I minus S with inf_R v_m / v_n > 0 for every m.

    Holds means an obstruction was found (k_inf(T, V_T) is not Montel).
    """
    S = S if S is not None else Empty()
    ctx = Ctx(levels, horizon, tol)
    params = {"family": F.name, "S": S.describe(), "levels": levels, "horizon": horizon}
    return _finish(_montel(F, complement(S), ctx), "montel_obstruction", params, ctx)


def _montel(F, T: Predicate, ctx: Ctx) -> _R:
    if isinstance(F, W.Restriction):
        return _montel(F.base, conjoin(T, F.pred), ctx)
    if isinstance(T, Empty):
        return _fails({"empty": True}, CITE_MONTEL, "T is empty: there is no infinite R in T")
    if isinstance(F, W.DirectSum):
        if not isinstance(T, All):
            return _unknown("subsets of a direct sum are not supported", CITE_MONTEL)
        a, b = _montel(F.left, T, ctx), _montel(F.right, T, ctx)
        for side, r in (("L", a), ("R", b)):
            if r.outcome == HOLDS:
                cert = dict(r.certificate)
                cert["side"] = side
                cert["R_prefix"] = [[side, x] for x in cert["R_prefix"]]
                return _holds(cert, f"{r.citation}; {CITE_DSUM}", r.reason)
        if a.outcome == FAILS and b.outcome == FAILS:
            return _fails({"left": a.witness, "right": b.witness}, CITE_MONTEL,
                          "neither summand has an obstruction")
        return _unknown("a direct summand is undecided", CITE_MONTEL)
    base = F.index_set
    if T.is_infinite(base) is False:
        return _fails({"finite_T": True}, CITE_MONTEL, "T is finite: there is no infinite R")
    if isinstance(F, W.Phi):
        return _fails({"finite_levels": [[n, n] for n in range(1, ctx.levels + 1)]},
                      f"{CITE_MONTEL}; {CITE_PHI}",
                      "each v_n is finite at only n indices, so every infinite R has "
                      "ratio 0 somewhere at every level")
    if isinstance(F, W.DualPowerSeries):
        pts = _decay_ratio_points(F, 1, 2, [i for i in _doubling(min(ctx.horizon, 4096))
                                            if T.contains(i)])
        return _fails({"n": 1, "m": 2, "points": pts,
                       "symbolic": "v_m / v_n = (r_m / r_n)^alpha_j -> 0"},
                      CITE_SCHWARTZ, "every ratio v_m / v_n with m > n tends to 0")
    if isinstance(F, W.Uniform):
        if T.is_infinite(base) is not True:
            return _unknown("cannot decide whether T is infinite", CITE_MONTEL)
        n0 = _first_finite_level(lambda n: F.level_value(n).is_finite)
        R = [i for i in islice((i for i in base if T.contains(i)), ctx.levels)]
        bounds = [[m, _s(F.level_value(m) / F.level_value(n0))] for m in range(1, ctx.levels + 1)]
        return _holds({"base_level": n0, "R_prefix": [_j(i) for i in R],
                       "lower_bounds": bounds, "scope": "all of R"},
                      CITE_MONTEL, "v_m / v_n is a positive constant")
    if isinstance(F, W.Grid):
        return _montel_grid(F, T, ctx)
    if isinstance(F, W.Table) and F.periodic:
        if T.is_infinite(base) is not True:
            return _unknown("cannot decide whether T is infinite", CITE_MONTEL)
        n0 = F.data_levels
        R = [i for i in islice((i for i in base if T.contains(i)), ctx.levels)]
        bounds = []
        for m in range(1, ctx.levels + 1):
            low = min((row[min(m, len(row)) - 1] / row[min(n0, len(row)) - 1]
                       for row in F.data), key=float)
            bounds.append([m, _s(low)])
        return _holds({"base_level": n0, "R_prefix": [_j(i) for i in R],
                       "lower_bounds": bounds, "scope": "every index (finitely many classes)"},
                      CITE_MONTEL, "periodic weights: ratios take finitely many positive values")
    if isinstance(F, W.Table) and static_poly(F) is not None and isinstance(T, All):
        R = list(islice(iter(F.index_set), F.block, F.block + ctx.levels))
        return _holds({"base_level": 1, "R_prefix": [_j(i) for i in R],
                       "lower_bounds": [[m, "1"] for m in range(1, ctx.levels + 1)],
                       "scope": "every tail index: the weights do not depend on n"},
                      CITE_MONTEL, "level-independent weights: v_m / v_1 = 1 on the tail")
    return _unknown(f"no Montel rule for kind {F.kind}", CITE_MONTEL)


def _decay_ratio_points(F, n: int, m: int, indices) -> list:
    pts, t = [], 1
    for idx in indices:
        r = F.eval(m, idx) / F.eval(n, idx)
        while t <= WITNESS_STEPS and _leq(r, XPos.exact(Fraction(1, 2 ** t)), 0.0):
            pts.append([_j(idx), _s(r)])
            t += 1
        if t > WITNESS_STEPS:
            break
    return pts


def _montel_grid(F: W.Grid, T: Predicate, ctx: Ctx) -> _R:
    many = T.meets_infinitely_many_rows()
    if many is None:
        return _unknown("cannot decide whether T meets infinitely many rows", CITE_MONTEL)
    if not many:
        rows = [k for k in range(1, T.row_tail()[0] + 1)
                if T.row_section(k) is not None and T.row_section(k).kind != EMPTY]
        pts = []
        if rows:
            k = rows[0]
            pts = _decay_ratio_points(F, 1, k + 1, [(k, j) for j in _doubling(ctx.horizon)
                                                    if T.contains((k, j))])
        return _fails({"rows": rows, "points": pts,
                       "symbolic": "an infinite R inside finitely many rows has infinitely "
                                   "many points in one row L_k, where v_m / v_1 = c_j^m -> 0"},
                      CITE_MONTEL, "T lies in finitely many rows")
    R = []
    for n in range(1, ctx.levels + ctx.horizon + 1):
        s = T.row_section(n)
        if s is not None and s.kind == EMPTY:
            continue
        j = _first_member(T, n, ctx.horizon)
        if j is not None:
            R.append((n, j))
        if len(R) >= ctx.levels and n >= ctx.levels:
            break
    bounds = []
    for m in range(1, ctx.levels + 1):
        low = ONE
        for idx in R:
            r = F.eval(m, idx) / F.eval(1, idx)
            if r.compare(low) == -1:
                low = r
        bounds.append([m, _s(low)])
    return _holds({"base_level": 1, "R_prefix": [_j(i) for i in R], "lower_bounds": bounds,
                   "scope": "all of R: rows beyond the prefix have ratio 1 for every m <= levels"},
                  CITE_MONTEL, "v_m(n, j_n) = 1 for all n >= m")


# --------------------------------------------------------------------------
# Banach rows


def grid_and_subset(F: W.WeightFamily, S: Predicate):
    if isinstance(F, W.Grid):
        return F, S
    if isinstance(F, W.Restriction):
        g, s = grid_and_subset(F.base, S)
        return g, conjoin(s, F.pred)
    raise TypeError(f"banach rows needs a grid family, got kind {F.kind}")


def check_banach_rows(F: W.WeightFamily, S: Predicate, levels: int = W.DEFAULT_LEVELS,
                      horizon: int = W.DEFAULT_HORIZON, tol: float = DEFAULT_TOL) -> Verdict:
    """Decide whether k_inf(S, V_S) is Banach for a grid family.

    Holds carries the constants C_n = max over S_n of v_n / v_(n+1), where S_n is
    the part of S in rows 1..n; Fails carries a row k meeting S infinitely.
    """
    grid, S = grid_and_subset(F, S)
    ctx = Ctx(levels, horizon, tol)
    params = {"family": F.name, "S": S.describe(), "levels": levels, "horizon": horizon}
    return _finish(_banach(grid, S, ctx), "banach_rows", params, ctx)


def section_rows(S: Predicate, n: int) -> Optional[list]:
    """S_n: the points of S in rows 1..n, or None if some row is not known finite."""
    out = []
    for k in range(1, n + 1):
        s = S.row_section(k)
        if s is None or not s.is_finite:
            return None
        out.extend((k, j) for j in sorted(s.members))
    return out


def banach_constant(grid: W.WeightFamily, S_n: list, n: int) -> XPos:
    C = ONE
    for idx in S_n:
        r = grid.eval(n, idx) / grid.eval(n + 1, idx)
        if r.compare(C) == 1:
            C = r
    return C


def _banach(grid: W.Grid, S: Predicate, ctx: Ctx) -> _R:
    finite = S.all_rows_finite()
    if finite is None:
        k = S.first_infinite_row()
        if k is None:
            return _unknown("the subset's rows are not known symbolically", CITE_FIN_INTER)
    if finite:
        table = []
        for n in range(1, ctx.levels + 1):
            S_n = section_rows(S, n)
            table.append([n, _s(banach_constant(grid, S_n, n)), len(S_n)])
        return _holds({"C": table, "rule": "v_n = v_(n+1) = 1 outside S_n"}, CITE_FIN_INTER)
    k = S.first_infinite_row()
    n = k + 1
    pts, t = [], 1
    for j in _doubling(ctx.horizon):
        if not S.contains((k, j)):
            continue
        r = grid.eval(n, (k, j)) / grid.eval(n + 1, (k, j))
        c = r.compare(XPos.exact(2 ** t), ctx.tol)
        if c is None:
            return _unknown(f"row {k} meets S infinitely but c_j is approximate near a "
                            "threshold", CITE_FIN_INTER)
        while t <= WITNESS_STEPS and r.compare(XPos.exact(2 ** t)) in (0, 1):
            pts.append([[k, j], t, _s(r)])
            t += 1
        if t > WITNESS_STEPS:
            break
    return _fails({"row": k, "n": n, "points": pts,
                   "symbolic": f"v_{n} / v_{n + 1} = 1 / c_j on row {k}, unbounded as c_j -> 0"},
                  CITE_FIN_INTER, f"S meets row L_{k} in an infinite set")


# --------------------------------------------------------------------------
# re-checking


def verify_verdict(F: W.WeightFamily, v: Verdict, limit: int = VERIFY_CAP,
                   tol: float = DEFAULT_TOL, S: Optional[Predicate] = None) -> bool:
    """Re-evaluate the points a certificate or witness refers to.

    Banach-row verdicts need the subset; it is parsed from the verdict when
    ``S`` is not given.
    """
    if v.outcome == UNKNOWN:
        return v.horizon is not None
    if v.check == "w3":
        return _verify_w3(F, v, limit, tol)
    if v.check == "eventually_lp":
        return _verify_lp(F, v, limit, tol)
    if v.check == "montel_obstruction":
        return _verify_montel(F, v, tol)
    if v.check == "banach_rows":
        return _verify_banach(F, v, tol, S)
    raise ValueError(f"unknown check {v.check!r}")


def _side(F, side):
    if side is None:
        return F
    if not isinstance(F, W.DirectSum):
        raise ValueError("witness refers to a direct-sum side")
    return F.left if side == "L" else F.right


def _verify_w3(F, v: Verdict, limit: int, tol: float) -> bool:
    if v.holds:
        idx = _prefix(F, limit)
        for n, m, C in v.certificate["map"]:
            C = XPos.exact(Fraction(C))
            for i in idx:
                if not _leq(F.eval(m, i) / (F.eval(n, i) ** 2), C, tol):
                    return False
        return bool(v.certificate["map"])
    wit = v.witness
    G = _side(F, wit.get("side"))
    n = wit["level"]
    ok = bool(wit["sequences"])
    for seq in wit["sequences"]:
        m = seq["m"]
        for idx, t, ratio in seq["points"]:
            r = G.eval(m, index_from_json(idx)) / (G.eval(n, index_from_json(idx)) ** 2)
            ok = ok and _geq(r, XPos.exact(2 ** t), tol)
    return ok


def _verify_lp(F, v: Verdict, limit: int, tol: float) -> bool:
    p = parse_order(v.params["p"])
    if v.holds:
        cert = v.certificate
        if "parts" in cert:
            return (_verify_lp(F.left, replace(v, certificate=cert["parts"][0]), limit, tol)
                    and _verify_lp(F.right, replace(v, certificate=cert["parts"][1]), limit, tol))
        n, bound = cert["level"], XPos.parse(cert["bound"])
        idx = _prefix(F, limit)
        if is_sup_order(p):
            ok = all(_leq(F.eval(n, i), bound, tol) for i in idx)
            for j, val in cert.get("decay", []):
                ok = ok and F.eval(n, index_from_json(j)) == XPos.parse(val)
            return ok
        total = ZERO
        for i in idx:
            total = total + _pow(F.eval(n, i), p)
        return _leq(total, bound, max(tol, 1e-9))
    wit = v.witness
    G = _side(F, wit.get("side"))
    ok = True
    for n, j, val in wit.get("infinite_values", []):
        ok = ok and G.eval(n, index_from_json(j)).is_inf
    for lev in wit.get("levels", []):
        n = lev["n"]
        for j, val in lev.get("points", []):
            ok = ok and G.eval(n, index_from_json(j)) == XPos.parse(val)
        if "partial_sums" in lev:
            total, marks = ZERO, dict(lev["partial_sums"])
            for h, (j, val) in enumerate(lev["terms"], start=1):
                x = G.eval(n, index_from_json(j))
                if x != XPos.parse(val):
                    return False
                total = total + _pow(x, p)
                if h in marks and total.compare(XPos.parse(marks[h]), max(tol, 1e-9)) not in (0, None):
                    return False
    return ok


def _verify_montel(F, v: Verdict, tol: float) -> bool:
    if v.holds:
        cert = v.certificate
        n0 = cert["base_level"]
        R = [index_from_json(i) for i in cert["R_prefix"]]
        if not R:
            return False
        for m, low in cert["lower_bounds"]:
            low = XPos.parse(low)
            if low.is_zero:
                return False
            for i in R:
                if not _geq(F.eval(m, i) / F.eval(n0, i), low, tol):
                    return False
        return True
    wit = v.witness
    for j, val in wit.get("points", []):
        n, m = wit.get("n", 1), wit.get("m")
        if m is None:
            continue
        if F.eval(m, index_from_json(j)) / F.eval(n, index_from_json(j)) != XPos.parse(val):
            return False
    return bool(wit)


def _verify_banach(F, v: Verdict, tol: float, S: Optional[Predicate]) -> bool:
    from .indexsets import parse_predicate
    grid, S = grid_and_subset(F, S if S is not None else parse_predicate(v.params["S"]))
    if v.holds:
        for n, C, size in v.certificate["C"]:
            S_n = section_rows(S, n)
            if S_n is None or len(S_n) != size:
                return False
            C = XPos.parse(C)
            if banach_constant(grid, S_n, n) != C:
                return False
            for idx in S_n:
                if not _leq(grid.eval(n, idx), C * grid.eval(n + 1, idx), tol):
                    return False
        return True
    wit = v.witness
    n = wit["n"]
    for idx, t, ratio in wit["points"]:
        i = index_from_json(idx)
        if not S.contains(i) or not _geq(grid.eval(n, i) / grid.eval(n + 1, i),
                                         XPos.exact(2 ** t), tol):
            return False
    return bool(wit["points"])
