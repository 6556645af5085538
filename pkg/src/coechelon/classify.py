"""Rule engine from condition verdicts to amenability properties of k_p(V).

For finite p every property of Theorem finite-order follows the verdict
"V is eventually in l_1".  For p in {0, inf} Theorem thm:kinf ties topological
amenability to "V is eventually bounded"; contractibility and amenability are
only decided by one-directional rules, and the remaining cases are reported
as Unknown with the gap marked non-decidable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import conditions as C
from . import weights as W
from .scalars import DEFAULT_TOL, P_INF, is_sup_order, order_str, parse_order

SCHEMA_VERSION = 1

HOLDS, FAILS, UNKNOWN = C.HOLDS, C.FAILS, C.UNKNOWN

PROPERTIES = ("is_algebra", "eventually_bounded", "eventually_l1", "unital",
              "bounded_and_nuclear", "nuclear", "montel_obstruction",
              "topologically_amenable", "amenable", "contractible")

T_FINITE = "Theorem finite-order"
T_KINF = "Theorem thm:kinf"
R_EQUIV = "equivalences for 1 <= p < inf: eventually l_p <=> eventually l_1 <=> unital <=> " \
          "eventually bounded and nuclear"
R_SAME_SPACE = "if V is eventually in l_1 then k_p(V) = k_q(V) for all orders p, q"
R_UNITAL_INF = "k_inf(V) is unital iff the unit sequence lies in some l_inf(v_n)"
R_UNITAL_ZERO = "k_0(V) is unital iff the unit sequence lies in some c_0(v_n)"
R_CONTR_UNITAL = "Example dirsum: a contractible algebra is unital"
R_CONTR_TOPAM = "Example contr_topamen: contractible implies topologically amenable"
R_AM_TOPAM = "Corollary am-top-am: amenable implies topologically amenable"
R_CONTR_AM = "contractible implies amenable"
R_SCHWARTZ = "Example dual_power_amen: DLambda_0(alpha) is a unital Schwartz algebra, hence " \
             "contractible"
R_MONTEL = "a contractible co-echelon algebra of order inf is a Montel space (Example dirsum)"
R_NO_DECOMP = "Lemma no_decomp"
R_GAP_CONTR = "no criterion for contractibility at this order beyond the one-directional rules"
R_GAP_AM = "Remark flat-top-flat: amenable versus topologically amenable is open here"
R_GAP_NUC = "nuclearity is not decided independently of eventually l_1"


@dataclass(frozen=True)
class PropertyVerdict:
    outcome: str
    chain: Tuple[str, ...]
    evidence: Tuple[str, ...] = ()     # names of the underlying checks
    reason: str = ""
    decidable: bool = True

    def to_json(self) -> dict:
        return {"outcome": self.outcome, "citation_chain": list(self.chain),
                "evidence": list(self.evidence), "reason": self.reason,
                "decidable": self.decidable}

    @staticmethod
    def from_json(d: dict) -> "PropertyVerdict":
        return PropertyVerdict(d["outcome"], tuple(d["citation_chain"]), tuple(d["evidence"]),
                               d["reason"], d["decidable"])


@dataclass(frozen=True)
class ClassificationReport:
    family: str
    kind: str
    p: str
    properties: Dict[str, PropertyVerdict]
    checks: Dict[str, C.Verdict]
    annotations: Tuple[str, ...] = ()
    config: Dict[str, object] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def outcome(self, name: str) -> Optional[str]:
        v = self.properties.get(name)
        return None if v is None else v.outcome

    @property
    def undecided(self) -> List[str]:
        """Properties left Unknown for lack of horizon (not for a known gap)."""
        return [k for k, v in self.properties.items() if v.outcome == UNKNOWN and v.decidable]

    def to_json(self) -> dict:
        return {"schema_version": self.schema_version, "family": self.family,
                "kind": self.kind, "p": self.p,
                "properties": {k: v.to_json() for k, v in self.properties.items()},
                "checks": {k: v.to_json() for k, v in self.checks.items()},
                "annotations": list(self.annotations), "config": dict(self.config)}

    @staticmethod
    def from_json(d: dict) -> "ClassificationReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {d.get('schema_version')!r}")
        return ClassificationReport(
            d["family"], d["kind"], d["p"],
            {k: PropertyVerdict.from_json(v) for k, v in d["properties"].items()},
            {k: C.Verdict.from_json(v) for k, v in d["checks"].items()},
            tuple(d["annotations"]), dict(d["config"]), d["schema_version"])


def _from_check(v: C.Verdict, name: str, *chain: str) -> PropertyVerdict:
    return PropertyVerdict(v.outcome, tuple(chain) + ((v.rule_citation,) if v.rule_citation else ()),
                           (name,), v.reason, v.decidable)


def _same(pv: PropertyVerdict, *chain: str) -> PropertyVerdict:
    return PropertyVerdict(pv.outcome, tuple(chain) + pv.chain, pv.evidence, pv.reason,
                           pv.decidable)


def _gap(reason: str, *chain: str, evidence=()) -> PropertyVerdict:
    return PropertyVerdict(UNKNOWN, tuple(chain), tuple(evidence), reason, decidable=False)


def _is_grid(F: W.WeightFamily) -> bool:
    return isinstance(F, W.Grid)


def _schwartz_unital_rule(F: W.WeightFamily) -> bool:
    return isinstance(F, W.DualPowerSeries) and F.R == 0


def classify(F: W.WeightFamily, p, levels: int = W.DEFAULT_LEVELS,
             horizon: int = W.DEFAULT_HORIZON, tol: float = DEFAULT_TOL) -> ClassificationReport:
    """Classify k_p(V); stops after is_algebra when (W3) fails."""
    p = parse_order(p)
    cfg = {"levels": levels, "horizon": horizon, "tol": tol}
    checks: Dict[str, C.Verdict] = {}
    props: Dict[str, PropertyVerdict] = {}

    w3 = checks["w3"] = C.check_w3(F, levels, horizon, tol)
    props["is_algebra"] = _from_check(w3, "w3", "condition (W3) makes k_p(V) an algebra")
    if w3.fails:
        return ClassificationReport(F.name, F.kind, order_str(p), props, checks,
                                    ("(W3) fails: k_p(V) is not closed under multiplication",),
                                    cfg)

    bounded = checks["eventually_bounded"] = C.check_eventually_lp(F, P_INF, levels, horizon, tol)
    l1 = checks["eventually_l1"] = C.check_eventually_lp(F, 1, levels, horizon, tol)
    props["eventually_bounded"] = _from_check(bounded, "eventually_bounded")
    props["eventually_l1"] = _from_check(l1, "eventually_l1")
    annotations: List[str] = []

    if not is_sup_order(p):
        base = _from_check(l1, "eventually_l1", f"{T_FINITE} (v)", R_EQUIV)
        for name, item in (("topologically_amenable", "(i)"), ("amenable", "(ii)"),
                           ("contractible", "(iii)"), ("unital", "(iv)"),
                           ("bounded_and_nuclear", "(vi)")):
            props[name] = _same(base, f"{T_FINITE} {item} <=> (v)")
        props["nuclear"] = _nuclear_finite(l1, bounded)
        montel = checks["montel_obstruction"] = C.check_montel_obstruction(
            F, None, levels, horizon, tol)
        props["montel_obstruction"] = _from_check(montel, "montel_obstruction")
        if l1.holds:
            annotations.append(R_SAME_SPACE)
    else:
        _classify_sup(F, p, levels, horizon, tol, checks, props, annotations)
    if _is_grid(F):
        annotations.extend(_grid_annotations(p))
    order = {k: i for i, k in enumerate(PROPERTIES)}
    props = dict(sorted(props.items(), key=lambda kv: order[kv[0]]))
    return ClassificationReport(F.name, F.kind, order_str(p), props, checks,
                                tuple(annotations), cfg)


def _nuclear_finite(l1: C.Verdict, bounded: C.Verdict) -> PropertyVerdict:
    # (vi) is "eventually bounded and nuclear"; nuclearity alone is read off it
    if l1.holds:
        return PropertyVerdict(HOLDS, (f"{T_FINITE} (v) => (vi)",), ("eventually_l1",))
    if l1.fails and bounded.holds:
        return PropertyVerdict(FAILS, (f"{T_FINITE} (vi) <=> (v)",),
                               ("eventually_l1", "eventually_bounded"),
                               "V is eventually bounded but not eventually in l_1")
    if l1.fails and bounded.fails:
        return _gap("(vi) fails through its boundedness clause; nuclearity is not decided",
                    R_GAP_NUC, evidence=("eventually_l1", "eventually_bounded"))
    return PropertyVerdict(UNKNOWN, (f"{T_FINITE} (vi) <=> (v)",),
                           ("eventually_l1", "eventually_bounded"), "eventually l_1 undecided")


def _classify_sup(F, p, levels, horizon, tol, checks, props, annotations):
    bounded, l1 = checks["eventually_bounded"], checks["eventually_l1"]
    topam = _from_check(bounded, "eventually_bounded", f"{T_KINF} (i)/(ii) <=> (iii)")
    props["topologically_amenable"] = topam

    if p == P_INF:
        props["unital"] = _from_check(bounded, "eventually_bounded", R_UNITAL_INF)
    else:
        c0 = checks["eventually_c0"] = C.check_eventually_lp(F, 0, levels, horizon, tol)
        props["unital"] = _from_check(c0, "eventually_c0", R_UNITAL_ZERO)
    unital = props["unital"]

    montel = checks["montel_obstruction"] = C.check_montel_obstruction(F, None, levels, horizon, tol)
    props["montel_obstruction"] = _from_check(montel, "montel_obstruction")

    if l1.holds:
        props["nuclear"] = PropertyVerdict(HOLDS, (R_SAME_SPACE, f"{T_FINITE} (v) => (vi)"),
                                           ("eventually_l1",))
    else:
        props["nuclear"] = _gap(R_GAP_NUC, R_GAP_NUC, evidence=("eventually_l1",))

    # contractible
    if l1.holds:
        contr = PropertyVerdict(HOLDS, (R_SAME_SPACE, f"{T_FINITE} (v) => (iii)"),
                                ("eventually_l1",), "V is eventually in l_1")
    elif _schwartz_unital_rule(F) and unital.outcome == HOLDS:
        contr = PropertyVerdict(HOLDS, (R_SCHWARTZ,), ("eventually_bounded",),
                                "dual power series space with R = 0")
    elif topam.outcome == FAILS:
        contr = PropertyVerdict(FAILS, (R_CONTR_TOPAM,) + topam.chain, topam.evidence,
                                "not topologically amenable")
    elif unital.outcome == FAILS:
        contr = PropertyVerdict(FAILS, (R_CONTR_UNITAL,) + unital.chain, unital.evidence,
                                "not unital")
    elif p == P_INF and montel.holds:
        contr = PropertyVerdict(FAILS, (R_MONTEL, R_NO_DECOMP), ("montel_obstruction",),
                                "an infinite R with ratios bounded below: not Montel")
    else:
        contr = _gap(R_GAP_CONTR, R_GAP_CONTR, evidence=("eventually_bounded",
                                                         "montel_obstruction"))
    props["contractible"] = contr

    # amenable
    if contr.outcome == HOLDS:
        props["amenable"] = PropertyVerdict(HOLDS, (R_CONTR_AM,) + contr.chain, contr.evidence)
    elif topam.outcome == FAILS:
        props["amenable"] = PropertyVerdict(FAILS, (R_AM_TOPAM,) + topam.chain, topam.evidence,
                                            "not topologically amenable")
    elif topam.outcome == HOLDS:
        props["amenable"] = _gap("topologically amenable; amenability is not settled",
                                 R_GAP_AM, evidence=("eventually_bounded",))
        annotations.append("open: whether topological amenability implies amenability "
                           "(Remark flat-top-flat)")
    else:
        props["amenable"] = PropertyVerdict(UNKNOWN, topam.chain, topam.evidence,
                                            "topological amenability undecided")


def _grid_annotations(p) -> List[str]:
    if p == 0:
        return ["k_0(N^2, V) is not complete (Lemma no_decomp_2)",
                "k_0(N^2, V) is not a direct sum of a normed algebra and a contractible "
                "co-echelon algebra (Lemma no_decomp_2)"]
    if p == P_INF:
        return ["no decomposition N^2 = S u T with k_inf(S, V_S) Banach and k_inf(T, V_T) "
                "contractible (Lemma no_decomp)",
                "conjectured, not proved: k_inf(N^2, V) is not a direct sum of a normed algebra "
                "and a contractible co-echelon algebra"]
    return []


# --------------------------------------------------------------------------
# rendering


def _certificate_summary(v: C.Verdict) -> str:
    if v.holds and v.check == "w3":
        triples = v.certificate["map"][:4]
        more = ", ..." if len(v.certificate["map"]) > 4 else ""
        return "(n, m, C) = " + ", ".join(f"({n}, {m}, {c})" for n, m, c in triples) + more
    if v.holds and v.check == "eventually_lp":
        return f"level {v.certificate['level']}, bound {v.certificate['bound']} " \
               f"({v.certificate['method']})"
    if v.holds and v.check == "montel_obstruction":
        R = v.certificate["R_prefix"][:4]
        return f"R starts {R}, base level {v.certificate['base_level']}"
    if v.fails and v.witness is not None:
        sym = v.witness.get("symbolic")
        if sym:
            return sym
        if "level" in v.witness:
            return f"witness at level {v.witness['level']}"
        return v.reason
    if v.unknown:
        return f"horizon {v.horizon['levels']} levels, {v.horizon['indices']} indices: {v.reason}"
    return v.reason


def explain(report: ClassificationReport) -> str:
    """Plain-text rendering; identical reports give identical text."""
    lines = [f"family {report.family} ({report.kind}), order p = {report.p}"]
    width = max((len(k) for k in report.properties), default=0)
    for name, pv in report.properties.items():
        tag = pv.outcome if pv.decidable or pv.outcome != UNKNOWN else "Unknown (gap)"
        lines.append(f"  {name.ljust(width)}  {tag}")
        for c in pv.chain:
            lines.append(f"      cites: {c}")
        for ev in pv.evidence:
            if ev in report.checks:
                lines.append(f"      {ev}: {_certificate_summary(report.checks[ev])}")
        if pv.reason and pv.outcome != HOLDS:
            lines.append(f"      reason: {pv.reason}")
    for a in report.annotations:
        lines.append(f"  note: {a}")
    return "\n".join(lines) + "\n"
