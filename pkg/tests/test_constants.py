"""Euler-product constants: certified brackets, cross-identities, and the
partial-sum behavior of the Q-weighted series."""

import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from murmurations.arith import build_sieve
from murmurations.constants import (euler_constant, primes_upto,
                                    q_table, q_weighted_sums, qcount_partial,
                                    qsqrt_product, qsqrt_sum_upper_bound,
                                    zeta, zeta_3_2_partial)
from murmurations.multfns import Q

SIEVE = build_sieve(3000)

KINDS = ("alpha", "beta", "gamma", "A", "B", "dimC", "Delta")


def test_zeta_against_mpmath():
    mp.mp.dps = 25
    for n in (2, 3, 4, 6):
        assert zeta(n) == pytest.approx(float(mp.zeta(n)), abs=1e-12)


def test_zeta_3_2_partial_tail():
    mp.mp.dps = 25
    for S in (100, 10000):
        partial, tail = zeta_3_2_partial(S)
        assert tail == 2.0 / math.sqrt(S)
        assert abs(partial - float(mp.zeta(1.5))) < tail


@pytest.mark.parametrize("kind", KINDS)
def test_tail_brackets_refinements(kind):
    coarse = euler_constant(kind, 10 ** 3)
    fine = euler_constant(kind, 10 ** 5)
    assert coarse.tail_bound > fine.tail_bound >= 0
    assert abs(coarse.value - fine.value) <= coarse.tail_bound


@given(st.sampled_from(KINDS), st.integers(100, 5000),
       st.integers(100, 5000))
@settings(max_examples=40, deadline=None)
def test_tail_monotone_in_pmax(kind, p1, p2):
    lo, hi = sorted((p1, p2))
    assert euler_constant(kind, hi).tail_bound <= \
        euler_constant(kind, lo).tail_bound + 1e-18


def test_primes_upto_matches_sieve():
    assert list(primes_upto(100)) == [p for p in range(2, 101)
                                      if all(p % q for q in range(2, p))]


def test_q_table_matches_exact():
    t = q_table(300)
    for d in range(1, 301):
        assert t[d] == pytest.approx(float(Q(d, SIEVE)), rel=1e-14)


def test_qcount_routes_agree():
    assert qcount_partial(60, SIEVE) == pytest.approx(
        float(q_table(60).sum()), rel=1e-13)


def test_q_sum_identities():
    # certified identities behind the Bessel-form tail collapse
    alpha = euler_constant("alpha")
    beta = euler_constant("beta")
    gamma = euler_constant("gamma")
    qsum, qdsum, _ = q_weighted_sums(10 ** 6)
    assert abs(qsum - beta.value / alpha.value) < 1e-5
    assert abs(alpha.value / gamma.value * qdsum - 1.0 / math.pi) < 1e-5


def test_qsqrt_upper_bound_dominates_partials():
    bound = qsqrt_sum_upper_bound(10 ** 5)
    for T in (10 ** 3, 10 ** 5):
        assert q_weighted_sums(T)[2] < bound
    # and the bound tightens with more primes
    assert qsqrt_sum_upper_bound(10 ** 6) <= bound
    assert qsqrt_product(10 ** 6) == pytest.approx(3.0907, abs=1e-3)


def test_bad_inputs():
    with pytest.raises(ValueError):
        euler_constant("nope")
    with pytest.raises(ValueError):
        euler_constant("alpha", 1)
    with pytest.raises(ValueError):
        qsqrt_sum_upper_bound(50)
