from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coechelon import library
from coechelon import weights as W
from coechelon.dsl import DslError, parse_families, parse_family
from coechelon.indexsets import (
    Diagonal, NatSquared, Parity, Rows, Triangular, parse_predicate, square_index,
    square_position,
)
from coechelon.scalars import ONE, XPos

GRID = parse_family("family grid { c(j) = 1/j }")


def test_phi_declaration_and_values():
    F = parse_family("family phi")
    assert isinstance(F, W.Phi)
    assert F.eval(2, 5).is_inf
    assert W.eval_weight(F, 5, 5) == ONE


def test_grid_branches():
    assert W.eval_weight(GRID, 2, (1, 5)) == XPos.exact(Fraction(1, 25))
    for c in ("1/j", "1/j^2", "1/2^j"):
        assert W.eval_weight(W.grid(c), 3, (7, 4)) == ONE


def test_nonpositive_weight_is_rejected():
    with pytest.raises(DslError, match="not positive"):
        parse_family("family table { v(n,i) = 0 }")


def test_w2_violation_reports_a_point():
    with pytest.raises(DslError, match=r"\(W2\) fails"):
        parse_family("family table { v(n,j) = j^n }")


def test_syntax_error_has_a_span():
    with pytest.raises(DslError) as info:
        parse_family("family t { v(n,j) = ( }")
    assert info.value.span == (1, 23)


def test_several_declarations_and_references():
    fams = parse_families("""
        family left { kind = uniform; g(n) = 1 }
        family right { kind = dps; R = 0; alpha(j) = j; r(n) = 1/2^n }
        family both { base = dsum(left, right) }
    """)
    assert list(fams) == ["left", "right", "both"]
    assert isinstance(fams["both"], W.DirectSum)


def test_restrict_grid_to_first_row():
    F = W.restrict(W.grid(), Rows(frozenset({1})))
    assert F.index_set.prefix(3) == [(1, 1), (1, 2), (1, 3)]
    assert F.eval(1, (1, 5)) == ONE
    assert F.eval(3, (1, 5)) == XPos.exact(Fraction(1, 125))


def test_restrict_to_everything_is_identity():
    assert W.restrict(GRID, parse_predicate("all")) is GRID


def test_restrict_phi_to_even_indices():
    F = W.restrict(W.phi(), Parity(True))
    assert F.index_set.prefix(3) == [2, 4, 6]
    assert F.eval(3, 2) == ONE and F.eval(3, 4).is_inf


def test_direct_sum_cases():
    D = W.direct_sum(W.phi(), W.grid())
    assert D.eval(4, ("R", (2, 3))) == XPos.exact(Fraction(1, 81))
    assert D.eval(2, ("L", 5)).is_inf
    S = W.direct_sum(GRID, GRID)
    for idx in GRID.index_set.prefix(20):
        assert S.eval(3, ("L", idx)) == GRID.eval(3, idx) == S.eval(3, ("R", idx))


def test_dirsum_builtin_is_the_first_dirsum_algebra():
    F = library.load_builtin("dirsum")
    left = [i for i in F.index_set.prefix(40) if i[0] == "L"]
    assert all(F.eval(7, i) == ONE for i in left)


def test_square_ordering_is_a_bijection():
    seen = [square_index(k) for k in range(1, 401)]
    assert len(set(seen)) == 400
    assert all(square_position(*ij) == k for k, ij in enumerate(seen, 1))
    assert NatSquared().prefix(4) == [(1, 1), (1, 2), (2, 2), (2, 1)]


@pytest.mark.parametrize("name", library.builtin_names())
def test_builtins_are_decreasing_in_level(name):
    F = library.load_builtin(name)
    for idx in F.index_set.prefix(300):
        vals = [F.eval(n, idx) for n in range(1, 21)]
        assert all(b.compare(a) in (-1, 0) for a, b in zip(vals, vals[1:]))
        assert any(v.is_finite for v in vals) or F.eval(400, idx).is_finite


@given(st.integers(1, 10), st.integers(1, 30), st.integers(1, 30))
def test_grid_square_domination(n, i, j):
    for c in ("1/j", "1/(j+1)", "1/2^j"):
        F = W.grid(c)
        assert F.eval(2 * n, (i, j)).compare(F.eval(n, (i, j)) ** 2) in (-1, 0)


@given(st.integers(1, 20), st.integers(1, 200))
def test_evaluation_is_pure(n, j):
    F = library.load_builtin("s_prime")
    assert F.eval(n, j) == F.eval(n, j)


def test_s_prime_values_are_exact():
    F = library.load_builtin("s_prime")
    assert F.eval(2, 3) == XPos.exact(Fraction(1, 9))


def test_predicates():
    assert Diagonal().contains((3, 3)) and not Diagonal().contains((3, 4))
    T = Triangular()
    assert T.contains((3, 2)) and not T.contains((3, 4))
    assert parse_predicate("not(row(1))").contains((2, 5))
    with pytest.raises(ValueError):
        parse_predicate("bogus")


def test_builtin_sources_are_listed():
    names = library.builtin_names()
    assert {"phi", "grid", "NN", "dirsum", "s_prime", "germs_amen"} <= set(names)
    with pytest.raises(KeyError):
        library.builtin_source("nope")
