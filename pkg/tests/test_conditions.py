from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coechelon import conditions as C
from coechelon import library
from coechelon import weights as W
from coechelon.indexsets import All, Diagonal, Empty, Rows
from coechelon.scalars import P_INF, XPos

L1 = Rows(frozenset({1}))


@pytest.mark.parametrize("c", ["1/j", "1/j^2", "1/(j+1)", "1/2^j", "1/log(j+2)"])
def test_grid_w3_doubling_certificate(c):
    v = C.check_w3(W.grid(c))
    assert v.holds
    assert [tuple(t) for t in v.certificate["map"]] == [(n, 2 * n, "1") for n in range(1, 21)]
    assert C.verify_verdict(W.grid(c), v)


def test_constant_family_w3():
    v = C.check_w3(W.constant(1))
    assert v.holds and v.certificate["map"][0] == [1, 1, "1"]


def test_dual_power_quarter_fails_w3_with_r_in_window():
    F = library.load_builtin("dual_power")
    v = C.check_w3(F)
    assert v.fails
    R, r = Fraction(v.witness["R"]), Fraction(v.witness["r_n"])
    assert R < r <= Fraction(1, 2)          # sqrt(1/4) = 1/2
    assert C.verify_verdict(F, v)


def test_dps_series_bound_is_geometric_sum():
    F = library.load_builtin("dual_power_amen")
    v = C.check_eventually_lp(F, 1)
    assert v.holds and v.certificate["level"] == 1
    r = Fraction(1, 2)
    assert Fraction(v.certificate["bound"]) == r / (1 - r)


def test_phi_is_not_eventually_summable():
    # each v_n takes the value inf, so no v_n is a member of l_p(I)
    v = C.check_eventually_lp(W.phi(), 1)
    assert v.fails
    assert C.check_eventually_lp(W.phi(), P_INF).fails


def test_grid_bounded_at_first_level():
    v = C.check_eventually_lp(W.grid(), P_INF)
    assert v.holds and v.certificate["level"] == 1 and v.certificate["bound"] == "1"


def test_montel_obstruction_cases():
    G = W.grid()
    v = C.check_montel_obstruction(G, Diagonal())
    assert v.holds and C.verify_verdict(G, v)
    assert C.check_montel_obstruction(library.load_builtin("dual_power_amen")).fails
    assert C.check_montel_obstruction(G, All()).fails


def test_banach_rows():
    G = W.grid()
    first_row = C.check_banach_rows(G, L1)
    assert first_row.fails and C.verify_verdict(G, first_row, S=L1)
    diag = C.check_banach_rows(G, Diagonal())
    assert diag.holds and C.verify_verdict(G, diag, S=Diagonal())
    for n, Cn, size in diag.certificate["C"][:6]:
        # C_n = max over S_n of v_n / v_{n+1}, recomputed from the grid formula
        direct = max(G.eval(n, (k, k)) / G.eval(n + 1, (k, k)) for k in range(1, n + 1))
        assert XPos.parse(Cn) == direct
    empty = C.check_banach_rows(G, Empty())
    assert empty.holds and all(c == "1" for _, c, _ in empty.certificate["C"])


@pytest.mark.parametrize("name", library.builtin_names())
def test_every_builtin_verdict_reverifies(name):
    F = library.load_builtin(name)
    checks = [C.check_w3(F), C.check_eventually_lp(F, 1), C.check_eventually_lp(F, 2),
              C.check_eventually_lp(F, 0), C.check_eventually_lp(F, P_INF)]
    if F.index_set.kind == "nat2" or name in ("NN", "grid"):
        checks.append(C.check_montel_obstruction(F))
    for v in checks:
        assert C.verify_verdict(F, v), (v.check, v.outcome)
        assert C.Verdict.from_json(v.to_json()) == v


def test_verifier_rejects_a_tampered_certificate():
    F = W.grid()
    v = C.check_w3(F)
    bad = C.Verdict(v.outcome, v.check, v.params,
                    {**v.certificate, "map": [[1, 1, "1/2"]]}, None, v.horizon,
                    v.rule_citation, v.reason)
    assert not C.verify_verdict(F, bad)


exps = st.sampled_from(["1", "1/j", "1/j^2", "j", "1 + 1/(n*j)", "1/(n*j)", "2^(-j)",
                        "1/j^(n+1)", "j/n"])


@given(exps, st.lists(st.lists(st.sampled_from(["inf", "4", "2", "1", "1/2"]), min_size=1,
                               max_size=3), max_size=3))
def test_random_tables_do_not_flip_with_more_horizon(expr, rows):
    rows = [sorted(r, key=lambda x: -float(XPos.parse(x))) for r in rows]
    try:
        F = W.table(expr, data=rows, levels=4, horizon=200)
    except W.FamilyError:
        return
    small = [C.check_w3(F, 4, 200), C.check_eventually_lp(F, 1, 4, 200),
             C.check_eventually_lp(F, P_INF, 4, 200)]
    big = [C.check_w3(F, 8, 400), C.check_eventually_lp(F, 1, 8, 400),
           C.check_eventually_lp(F, P_INF, 8, 400)]
    for a, b in zip(small, big):
        assert {a.outcome, b.outcome} != {C.HOLDS, C.FAILS}
