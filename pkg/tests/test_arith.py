"""Arithmetic kernel against independent oracles (sympy, brute force)."""

import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from murmurations.arith import (build_sieve, count_squarefree_twisted,
                                is_prime, kronecker, squarefree_flags,
                                squarefree_in_class_count, sum_mu2_phi)

SIEVE = build_sieve(100000)


# -- kronecker --------------------------------------------------------------

@given(st.integers(-300, 300), st.integers(-300, 300))
def test_kronecker_matches_sympy(a, n):
    # sympy's kronecker_symbol handles the full extension
    from sympy.functions.combinatorial.numbers import kronecker_symbol
    assert kronecker(a, n) == kronecker_symbol(a, n)


def test_kronecker_euler_criterion():
    for p in (3, 5, 7, 11, 13, 101, 997):
        for a in range(1, p):
            expect = pow(a, (p - 1) // 2, p)
            expect = -1 if expect == p - 1 else expect
            assert kronecker(a, p) == expect


@given(st.integers(-200, 200), st.integers(-200, 200),
       st.integers(1, 200))
def test_kronecker_multiplicative_in_top(a, b, n):
    assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


# -- primality & sieve ------------------------------------------------------

@given(st.integers(0, 10 ** 6))
def test_is_prime_matches_sympy_small(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(10 ** 12, 10 ** 13))
@settings(max_examples=25)
def test_is_prime_matches_sympy_large(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(2, 99999))
def test_factor_reconstructs(n):
    prod = 1
    for p, e in SIEVE.factor(n):
        assert is_prime(p)
        prod *= p ** e
    assert prod == n


@given(st.integers(1, 99999))
def test_mu_phi_match_sympy(n):
    assert SIEVE.mu(n) == sympy.mobius(n)
    assert SIEVE.euler_phi(n) == sympy.totient(n)


@given(st.integers(1, 99999))
def test_squarefree_flag_consistent(n):
    assert SIEVE.is_squarefree(n) == (SIEVE.mu(n) != 0)


def test_squarefree_flags_bulk():
    flags = squarefree_flags(5000, SIEVE)
    for n in range(1, 5001):
        assert bool(flags[n]) == SIEVE.is_squarefree(n)


# -- square-free counting sums ----------------------------------------------

def test_sum_mu2_phi_bruteforce():
    for Z in (1, 10, 137, 2000):
        brute = sum(SIEVE.euler_phi(n) for n in range(1, Z + 1)
                    if SIEVE.is_squarefree(n))
        assert sum_mu2_phi(Z, SIEVE) == brute


def test_count_squarefree_twisted_bruteforce():
    for Z, m in ((100, 1), (500, 6), (1234, 35), (2000, 30)):
        brute = sum(1 for n in range(1, Z + 1)
                    if SIEVE.is_squarefree(n) and math.gcd(n, m) == 1)
        assert count_squarefree_twisted(Z, m, SIEVE) == brute


@given(st.integers(2, 40), st.integers(100, 3000))
@settings(max_examples=30)
def test_squarefree_in_class_bruteforce(m, X):
    Y = X // 2
    for a in range(m):
        if math.gcd(a, m) != 1:
            continue
        brute = sum(1 for n in range(X, X + Y + 1)
                    if n % m == a and SIEVE.is_squarefree(n))
        assert squarefree_in_class_count(X, Y, a, m, SIEVE) == brute
        break


def test_squarefree_in_class_requires_coprime():
    with pytest.raises(ValueError):
        squarefree_in_class_count(100, 50, 2, 4, SIEVE)
