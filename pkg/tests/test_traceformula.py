"""Trace values: exact rationality, table-vs-direct agreement, and the
averaging pipelines."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from murmurations.arith import build_sieve, is_prime
from murmurations.classnumbers import hurwitz_sieve
from murmurations.density import DensityConfig, murmuration_density
from murmurations.traceformula import (TraceParams, _square_divisors,
                                       dimension_main, dyadic_average,
                                       interval_average, trace_TpWN)

SIEVE = build_sieve(20000)


def _params(N, P, k):
    return TraceParams(N=N, P=P, k=k)


def test_params_validation():
    with pytest.raises(ValueError):
        _params(6, 5, 3)          # odd weight
    with pytest.raises(ValueError):
        _params(6, 9, 2)          # composite P
    with pytest.raises(ValueError):
        _params(10, 5, 2)         # P | N
    with pytest.raises(ValueError):
        _params(0, 5, 2)
    with pytest.raises(ValueError):
        trace_TpWN(_params(12, 5, 2), sieve=SIEVE)  # N not square-free


@given(st.integers(1, 2000), st.integers(2, 90))
@settings(max_examples=120, deadline=None)
def test_k2_trace_is_integer(N, pidx):
    P = pidx
    while not is_prime(P) or P == 2:
        P += 1
    if N % P == 0 or not SIEVE.is_squarefree(N):
        return
    t = trace_TpWN(_params(N, P, 2), sieve=SIEVE)
    assert isinstance(t, Fraction)
    assert t.denominator == 1


def test_table_route_matches_direct():
    table = hurwitz_sieve(3, 4 * 97 * 30 + 10)
    for N in (1, 2, 3, 5, 6, 7, 11, 13, 15, 21, 26, 29, 30):
        for P in (5, 7, 97):
            if N % P == 0:
                continue
            with_table = trace_TpWN(_params(N, P, 2), table=table,
                                    sieve=SIEVE)
            direct = trace_TpWN(_params(N, P, 2), sieve=SIEVE)
            assert with_table == direct


def test_table_out_of_range_raises():
    table = hurwitz_sieve(3, 50)
    with pytest.raises(LookupError):
        trace_TpWN(_params(1, 101, 2), table=table, sieve=SIEVE)


def test_square_divisors():
    assert _square_divisors(1, SIEVE) == [1]
    assert _square_divisors(36, SIEVE) == [1, 2, 3, 6]
    assert _square_divisors(720, SIEVE) == [1, 2, 3, 4, 6, 12]


def test_dimension_main():
    assert dimension_main(1, 2, SIEVE) == Fraction(1, 12)
    assert dimension_main(11, 2, SIEVE) == Fraction(10, 12)
    assert dimension_main(35, 4, SIEVE) == Fraction(3 * 24, 12)
    with pytest.raises(ValueError):
        dimension_main(1, 3, SIEVE)


def test_interval_average_assembly():
    # numerator/denominator are plain sums over the admitted levels
    X, Y, P, k = 100, 30, 11, 2
    rep = interval_average(X, Y, P, k, sieve=SIEVE)
    levels = [N for N in range(X, X + Y + 1)
              if N % P and SIEVE.is_squarefree(N)]
    num = sum(trace_TpWN(_params(N, P, k), sieve=SIEVE) for N in levels)
    den = sum(dimension_main(N, k, SIEVE) for N in levels)
    assert rep.levels == len(levels)
    assert rep.numerator == pytest.approx(float(num), rel=1e-12)
    assert rep.denominator == pytest.approx(float(den), rel=1e-12)
    assert rep.average == pytest.approx(float(num) / float(den), rel=1e-12)
    assert rep.predicted == pytest.approx(
        murmuration_density(DensityConfig(k=k), P / X), rel=1e-12)
    assert rep.residual == pytest.approx(rep.average - rep.predicted)


def test_dyadic_average_window():
    rep = dyadic_average(50, 2.0, 101, 2, sieve=SIEVE)
    levels = [N for N in range(50, 101)
              if N % 101 and SIEVE.is_squarefree(N)]
    assert rep.levels == len(levels)
    assert rep.kind == "dyadic"


def test_interval_average_requires_Y_below_X():
    with pytest.raises(ValueError):
        interval_average(100, 100, 11, 2, sieve=SIEVE)
    with pytest.raises(ValueError):
        dyadic_average(100, 1.0, 11, 2, sieve=SIEVE)
