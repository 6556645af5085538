import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coechelon import library
from coechelon import sampling as S
from coechelon import weights as W
from coechelon.indexsets import Diagonal, Empty, Rows, Triangular
from coechelon.scalars import P_INF, XPos
from coechelon.truncation import FinSeq, norm
from coechelon.witnesses import (
    GEQ_ONE, GEQ_POW2, ApproxResult, EventuallyBoundedError, NoSplitWitness, UnboundedWitness,
    WitnessError, approx_binf, no_split_witness, unbounded_witness, verify_no_split,
    verify_unbounded, w3_constant,
)

GRID = W.grid()
ROW = library.load_builtin("unboundedrow")          # v_n(j) = j


def test_grid_approx_example():
    a = FinSeq.of({(1, 1): 1, (1, 9): 1})
    r = approx_binf(GRID, a, 2, Fraction(1, 10))
    assert (r.m, r.C) == (4, 1)
    # ||a||_{2,inf} = max(1, 1/81) = 1, so t = 1/20 and v_2(1, 9) = 1/81 < t
    assert r.threshold == XPos.exact(Fraction(1, 20))
    assert r.dropped == ((1, 9),)
    assert r.verified
    # the two bounds, recomputed by hand
    assert r.b == FinSeq.of({(1, 1): 1})
    assert norm(GRID, 4, P_INF, a - r.b) == XPos.exact(Fraction(1, 9 ** 4))


def test_constant_family_keeps_everything():
    F = W.constant(1)
    a = FinSeq.of({1: 3, 5: Fraction(-1, 2)})
    for eps in (Fraction(1), Fraction(1, 100)):
        r = approx_binf(F, a, 1, eps)
        assert r.b == a and not r.dropped and r.verified


def test_zero_element_is_trivial():
    r = approx_binf(GRID, FinSeq.zero(), 1, 1)
    assert r.trivial and r.b == FinSeq.zero()


def test_approx_rejects_bad_input():
    with pytest.raises(WitnessError):
        approx_binf(GRID, FinSeq.unit((1, 1)), 1, 0)
    with pytest.raises(WitnessError):
        approx_binf(W.phi(), FinSeq.unit(5), 2, 1)         # ||a||_{2,inf} = inf
    with pytest.raises(WitnessError):
        w3_constant(library.load_builtin("dual_power"), 1)


@given(st.integers(0, 10 ** 6), st.sampled_from(["grid", "dual_power_amen"]))
def test_support_grows_as_eps_shrinks(seed, name):
    F = library.load_builtin(name)
    rng = random.Random(seed)
    a = S.random_finseq(rng, F.index_set.prefix(40), rng.randint(1, 8))
    n = rng.randint(1, 3)
    prev = None
    for k in range(6):
        r = approx_binf(F, a, n, Fraction(1, 2 ** k))
        assert r.verified
        if prev is not None:
            assert set(prev) <= set(r.b.support)
        prev = r.b.support


def test_unbounded_powers_of_two():
    w = unbounded_witness(ROW, P_INF, L=10)
    assert w.mode == GEQ_POW2
    assert list(w.indices) == [2 ** l for l in range(1, 11)]
    assert verify_unbounded(ROW, w)
    # C_k = sum_{l <= k} 2^-l + 1 = 2 - 2^-k
    assert [Fraction(c) for c in w.constants] == [2 - Fraction(1, 2 ** k) for k in range(1, 11)]


def test_unbounded_finite_order():
    w = unbounded_witness(ROW, 1, L=5)
    assert w.mode == GEQ_ONE and list(w.indices) == [1, 2, 3, 4, 5]
    assert verify_unbounded(ROW, w)
    # C_k = max_{l <= k} 1/v_k(j_l) + 1 = 1/1 + 1
    assert set(w.constants) == {"2"}


def test_phi_witnesses():
    F = W.phi()
    assert list(unbounded_witness(F, 1, L=6).indices) == [1, 2, 3, 4, 5, 6]
    assert list(unbounded_witness(F, P_INF, L=6).indices) == [2, 3, 4, 5, 6, 7]


def test_bounded_families_are_refused():
    for F in (library.load_builtin("bounded"), GRID, W.restrict(GRID, Rows(frozenset({1})))):
        with pytest.raises(EventuallyBoundedError, match="eventually bounded"):
            unbounded_witness(F, P_INF)


def test_tampered_unbounded_witness_is_rejected():
    w = unbounded_witness(ROW, P_INF, L=4)
    bad = UnboundedWitness(w.family, w.p, w.mode, (1,) + w.indices[1:], w.constants,
                           w.inequalities, w.horizon)
    assert not verify_unbounded(ROW, bad)


@pytest.mark.parametrize("S,expected", [
    (Empty(), [1] * 20),
    (Diagonal(), [2] + [1] * 19),
    (Triangular(), [n + 1 for n in range(1, 21)]),
])
def test_no_split_rows(S, expected):
    w = no_split_witness(GRID, S, m_max=10)
    assert [j for _, j in w.R] == expected
    assert all(not S.contains(r) for r in w.R)
    for m in range(1, 11):
        assert all(GRID.eval(m, r) == XPos.exact(1) for r in w.R if r[0] >= m)
    assert verify_no_split(GRID, w, S)
    assert NoSplitWitness.from_json(w.to_json()) == w


def test_no_split_needs_banach_rows():
    with pytest.raises(WitnessError, match="fin_inter"):
        no_split_witness(GRID, Rows(frozenset({1})))


def test_witness_json_round_trips():
    w = unbounded_witness(ROW, 2, L=4)
    assert UnboundedWitness.from_json(w.to_json()) == w
    r = approx_binf(GRID, FinSeq.of({(1, 1): 1, (1, 9): 2}), 2, Fraction(1, 10))
    assert ApproxResult.from_json(r.to_json()) == r
