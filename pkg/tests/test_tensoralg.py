import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coechelon import sampling as S
from coechelon import weights as W
from coechelon.scalars import ONE, P_INF, ZERO
from coechelon.tensoralg import (
    J_LIMIT, ResourceLimit, TruncTensor, diagonal_projection, kernel_basis, multiply, pi,
    projection_norm_certificate, rademacher_decomposition, rank_one, section, sign_matrix,
)
from coechelon.truncation import FinSeq, norm

e = FinSeq.unit


def test_multiply_examples():
    assert multiply(e(2), e(2)) == e(2)
    assert multiply(e(2), e(3)) == FinSeq.zero()
    assert multiply(FinSeq.of({1: 1, 2: 1}), FinSeq.of({1: 2, 2: 3})) == FinSeq.of({1: 2, 2: 3})


def test_pi_and_projection_examples():
    assert pi(TruncTensor.elementary(1, 1)) == e(1)
    assert pi(TruncTensor.elementary(1, 2)) == FinSeq.zero()
    assert pi(TruncTensor.of({(1, 1): 2, (1, 2): 5})) == FinSeq.of({1: 2})
    assert diagonal_projection(TruncTensor.elementary(1, 2)) == TruncTensor()
    u = TruncTensor.of({(1, 1): 1, (1, 2): 1, (2, 2): 4})
    assert diagonal_projection(u) == TruncTensor.of({(1, 1): 1, (2, 2): 4})


def test_section_examples():
    assert section(e(5)) == TruncTensor.elementary(5, 5)
    assert section(FinSeq.zero()) == TruncTensor()


def test_kernel_basis():
    assert kernel_basis([2, 1]) == [(1, 2), (2, 1)]


def test_rademacher_small_cases():
    x = FinSeq.of({1: 3})
    y = FinSeq.of({1: Fraction(1, 2)})
    dec = rademacher_decomposition(x, y)
    assert len(dec) == 2 and dec.expand() == TruncTensor.of({(1, 1): Fraction(3, 2)})
    ones = FinSeq.of({1: 1, 2: 1})
    dec = rademacher_decomposition(ones, ones)
    assert len(dec) == 4 and dec.weight == Fraction(1, 4)
    assert dec.expand_naive() == TruncTensor.of({(1, 1): 1, (2, 2): 1})


def test_sign_matrix_rows_are_all_patterns():
    M = sign_matrix(4)
    assert M.shape == (16, 4)
    assert len({tuple(r) for r in M}) == 16
    assert (M.T @ M == 16 * __import__("numpy").eye(4, dtype=int)).all()


def test_resource_guard():
    x = FinSeq.of({i: 1 for i in range(1, 6)})
    with pytest.raises(ResourceLimit):
        rademacher_decomposition(x, x, J_max=4)
    with pytest.raises(ResourceLimit):
        rademacher_decomposition(x, x, J_max=J_LIMIT + 1)


@given(st.integers(1, 7), st.integers(0, 10 ** 6))
def test_expansion_matches_naive_and_target(J, seed):
    rng = random.Random(seed)
    support = rng.sample(range(1, 40), J)
    x = FinSeq.of([(i, S.random_gauss(rng)) for i in support])
    y = FinSeq.of([(i, S.random_gauss(rng)) for i in support])
    dec = rademacher_decomposition(x, y)
    assert dec.expand() == dec.expand_naive() == diagonal_projection(rank_one(x, y))


@given(st.integers(0, 10 ** 6))
def test_projection_identities(seed):
    rng = random.Random(seed)
    pool = S.nat_pool(8)
    u = S.random_tensor(rng, pool, rng.randint(0, 15))
    a = S.random_finseq(rng, pool, rng.randint(0, 6))
    P = diagonal_projection
    assert P(P(u)) == P(u)
    assert pi(P(u)) == pi(u)
    assert P(section(a)) == section(a)
    assert (u - P(u)).has_zero_diagonal()
    assert pi(section(a)) == a
    x, y = S.random_finseq(rng, pool, 4), S.random_finseq(rng, pool, 4)
    assert pi(rank_one(x, y)) == multiply(x, y)
    z = S.random_finseq(rng, pool, 4)
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))
    assert multiply(x, y) == multiply(y, x)
    assert TruncTensor.from_json(u.to_json()) == u


@given(st.integers(0, 10 ** 6), st.sampled_from([0, 1, 2, P_INF]))
def test_sign_flips_preserve_norms(seed, p):
    rng = random.Random(seed)
    F = W.grid()
    pool = W.grid().index_set.prefix(20)
    x = S.random_finseq(rng, pool, 3)
    y = S.random_finseq(rng, pool, 3)
    cert = projection_norm_certificate(F, 3, p, x, y)
    assert cert.verified
    for _, xs, _ in cert.decomposition.terms():
        assert norm(F, 3, p, xs) == norm(F, 3, p, x)


def test_projection_certificate_examples():
    F = W.grid()
    x = e((1, 1))
    bound, dec = projection_norm_certificate(F, 2, P_INF, x, x)
    assert bound == F.eval(2, (1, 1)) ** 2 and len(dec) == 2
    bound, _ = projection_norm_certificate(F, 2, P_INF, FinSeq.zero(), x)
    assert bound == ZERO
    xy = FinSeq.of({(1, 1): 1, (1, 2): 1})
    bound, dec = projection_norm_certificate(F, 2, P_INF, xy, xy)
    assert bound == ONE and len(dec) == 4
