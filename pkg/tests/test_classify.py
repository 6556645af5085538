import pytest

from coechelon import library
from coechelon import weights as W
from coechelon.classify import (
    FAILS, HOLDS, UNKNOWN, ClassificationReport, PropertyVerdict, classify, explain,
)
from coechelon.scalars import P_INF

ORDERS = [0, 1, 2, P_INF]
FINITE_ORDER_SIX = ("topologically_amenable", "amenable", "contractible", "unital",
                    "eventually_l1", "bounded_and_nuclear")


def _report(name, p):
    return classify(library.load_builtin(name), p)


def test_phi_not_topologically_amenable():
    r = classify(W.phi(), 1)
    assert r.outcome("topologically_amenable") == FAILS
    assert any("finite-order (i) <=> (v)" in c for c in r.properties["topologically_amenable"].chain)


def test_s_prime_contractible_at_infinity():
    assert _report("s_prime", P_INF).outcome("contractible") == HOLDS


def test_grid_at_infinity():
    r = _report("grid", P_INF)
    assert r.outcome("topologically_amenable") == HOLDS
    assert r.outcome("unital") == HOLDS
    assert r.outcome("contractible") == FAILS
    assert "montel_obstruction" in r.properties["contractible"].evidence
    assert not r.undecided


def test_hadamard_R1_not_topologically_amenable():
    assert _report("germs_amen", P_INF).outcome("topologically_amenable") == FAILS


def test_w3_failure_stops_the_report():
    r = _report("dual_power", 1)
    assert list(r.properties) == ["is_algebra"] and r.outcome("is_algebra") == FAILS


@pytest.mark.parametrize("name", library.builtin_names())
@pytest.mark.parametrize("p", ORDERS)
def test_report_invariants(name, p):
    r = _report(name, p)
    if r.outcome("is_algebra") == FAILS:
        return
    if p not in (0, P_INF):
        assert len({r.outcome(k) for k in FINITE_ORDER_SIX}) == 1
    else:
        assert r.outcome("topologically_amenable") == r.checks["eventually_bounded"].outcome
    if r.outcome("contractible") == HOLDS:
        assert r.outcome("topologically_amenable") == HOLDS
        assert r.outcome("amenable") == HOLDS
    if r.outcome("amenable") == HOLDS:
        assert r.outcome("topologically_amenable") == HOLDS
    if r.outcome("topologically_amenable") == FAILS:
        assert r.outcome("contractible") == FAILS and r.outcome("amenable") == FAILS
    assert ClassificationReport.from_json(r.to_json()) == r


def test_dirsum_second_algebra():
    F = W.direct_sum(W.constant(1), library.load_builtin("dual_power_amen"))
    r = classify(F, P_INF)
    assert r.outcome("topologically_amenable") == HOLDS
    assert r.outcome("contractible") == FAILS


def test_gap_unknowns_are_not_horizon_unknowns():
    r = _report("grid", P_INF)
    amen = r.properties["amenable"]
    assert amen.outcome == UNKNOWN and not amen.decidable
    assert "flat-top-flat" in amen.chain[0]


def test_grid_annotations():
    assert any("no_decomp_2" in a and "not complete" in a for a in _report("grid", 0).annotations)
    assert any("conjectured" in a for a in _report("grid", P_INF).annotations)


def test_explain():
    text = explain(_report("grid", P_INF))
    assert text.startswith("family grid (grid), order p = inf\n")
    assert "(n, m, C) = (1, 2, 1), (2, 4, 1)" in text
    assert "finite-order (i) <=> (v)" in explain(classify(W.phi(), 1))
    empty = ClassificationReport("x", "phi", "1", {}, {})
    assert explain(empty) == "family x (phi), order p = 1\n"
    assert explain(_report("grid", P_INF)) == text


def test_property_verdict_json():
    v = PropertyVerdict(UNKNOWN, ("a", "b"), ("w3",), "why", False)
    assert PropertyVerdict.from_json(v.to_json()) == v


def test_report_schema_version_is_checked():
    d = _report("phi", 1).to_json()
    d["schema_version"] = 99
    with pytest.raises(ValueError):
        ClassificationReport.from_json(d)
