from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coechelon import library
from coechelon import weights as W
from coechelon.indexsets import Rows
from coechelon.scalars import ONE, P_INF, ZERO, GaussianRational, XPos
from coechelon.truncation import FinSeq, inclusion_bound, min_level, norm, norm_power

PHI, GRID = W.phi(), W.grid()
ORDERS = [0, 1, 2, P_INF]

rats = st.fractions(min_value=-20, max_value=20, max_denominator=12).filter(bool)


@st.composite
def real_seqs(draw, pool=tuple(range(1, 30))):
    idx = draw(st.lists(st.sampled_from(pool), unique=True, max_size=6))
    return FinSeq.of([(i, draw(rats)) for i in idx])


def test_norm_examples():
    assert norm(PHI, 2, P_INF, FinSeq.unit(3)).is_inf
    assert norm(PHI, 3, 1, FinSeq.unit(3)) == ONE
    for p in ORDERS:
        assert norm(GRID, 4, p, FinSeq.zero()) == ZERO


def test_norm_power_is_exact_for_p2():
    F = W.constant(1)
    x = FinSeq.of([(1, 3), (2, 4)])
    assert norm_power(F, 1, 2, x) == XPos.exact(25)
    assert norm(F, 1, 2, x) == XPos.exact(5)
    with pytest.raises(ValueError):
        norm_power(F, 1, P_INF, x)


def test_min_level_examples():
    assert min_level(PHI, 1, FinSeq.unit(3)) == 3
    assert min_level(GRID, P_INF, FinSeq.unit((5, 2))) == 1
    assert min_level(PHI, 1, FinSeq.zero()) == 1
    assert min_level(PHI, 1, FinSeq.unit(30)) is None


def test_inclusion_bound_examples():
    b = inclusion_bound(PHI, 1, 2)
    assert b.value == ONE and b.exact
    row = W.restrict(GRID, Rows(frozenset({1})))
    b = inclusion_bound(row, 2, 3, horizon=50)
    assert b.value == ONE                       # sup_j c_j = c_1 = 1
    assert inclusion_bound(W.constant(1), 1, 5).value == ONE
    dps = library.load_builtin("dual_power_amen")
    b = inclusion_bound(dps, 1, 2)
    assert b.exact and b.value == XPos.exact(Fraction(1, 2))


GRID_POOL = tuple((i, j) for i in range(1, 5) for j in range(1, 5))


@given(real_seqs(), real_seqs(pool=GRID_POOL), st.integers(1, 6), st.integers(0, 4),
       st.sampled_from(ORDERS))
def test_norm_decreases_in_level(x, g, n, k, p):
    for F, x in ((GRID, g), (library.load_builtin("dual_power_amen"), x), (PHI, x)):
        a, b = norm(F, n + k, p, x), norm(F, n, p, x)
        assert a.compare(b, 1e-9) in (-1, 0, None)
        if a.is_exact and b.is_exact:
            assert a.compare(b) in (-1, 0)


@given(real_seqs(pool=GRID_POOL), real_seqs(pool=GRID_POOL),
       st.integers(1, 5), st.sampled_from(ORDERS), rats)
def test_triangle_inequality_and_homogeneity(x, y, n, p, z):
    lhs = float(norm(GRID, n, p, x + y))
    rhs = float(norm(GRID, n, p, x)) + float(norm(GRID, n, p, y))
    assert lhs <= rhs * (1 + 1e-12) + 1e-12
    scaled = norm(GRID, n, p, x.scale(z))
    expect = XPos.exact(abs(z)) * norm(GRID, n, p, x)
    assert scaled.compare(expect, 1e-9) in (0, None)


@given(real_seqs(), st.integers(1, 25))
def test_norm_infinite_exactly_on_infinite_support(x, n):
    meets = any(PHI.eval(n, i).is_inf for i in x.support)
    assert norm(PHI, n, 1, x).is_inf == meets


@given(real_seqs(), real_seqs())
def test_min_level_monotone_under_support_growth(x, y):
    a, b = min_level(PHI, 1, x, 40), min_level(PHI, 1, x + y, 40)
    if b is not None:
        assert a is not None and a <= b


@given(real_seqs(pool=tuple((i, j) for i in range(1, 4) for j in range(1, 4))))
def test_finseq_json_round_trip(x):
    assert FinSeq.from_json(x.to_json()) == x


def test_finseq_arithmetic():
    x = FinSeq.of({1: 2, 2: GaussianRational(Fraction(1), Fraction(1))})
    assert (x - x) == FinSeq.zero()
    assert x.restrict(lambda i: i == 1) == FinSeq.of({1: 2})
    assert x.coeff(7) == GaussianRational()
