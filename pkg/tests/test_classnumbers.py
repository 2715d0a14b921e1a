"""Class numbers: form counting, weighted variants, the square-divisor
reconstruction, serialization, and the certified analytic route."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from murmurations.arith import build_sieve
from murmurations.classnumbers import (HurwitzTable, LTruncationPolicy,
                                       class_number_via_L,
                                       fundamental_decomposition,
                                       gauss_h_bruteforce, gauss_h_certified,
                                       gauss_h_weighted, hurwitz_H1,
                                       hurwitz_sieve, l_truncation_error_bound,
                                       load_table, save_table)

SIEVE = build_sieve(200000)

# Textbook values: class numbers of the first imaginary quadratic fields.
KNOWN_H = {3: 1, 4: 1, 7: 1, 8: 1, 11: 1, 15: 2, 19: 1, 20: 2, 23: 3,
           24: 2, 31: 3, 35: 2, 39: 4, 40: 2, 43: 1, 47: 5, 163: 1}

# Weighted tabulation including non-fundamental discriminants.
KNOWN_H1 = {3: Fraction(1, 3), 4: Fraction(1, 2), 7: 1, 8: 1, 11: 1,
            12: Fraction(4, 3), 15: 2, 16: Fraction(3, 2), 19: 1, 20: 2,
            23: 3, 24: 2, 27: Fraction(4, 3), 28: 2}


def _valid_ds(lo, hi):
    return [d for d in range(lo, hi) if d % 4 in (0, 3)]


def test_known_class_numbers():
    for d, h in KNOWN_H.items():
        assert gauss_h_bruteforce(d, SIEVE) == h


def test_known_weighted_tabulation():
    for d, v in KNOWN_H1.items():
        assert hurwitz_H1(d, SIEVE) == v


def test_weighted_gauss_automorphism_weights():
    assert gauss_h_weighted(3, SIEVE) == Fraction(1, 3)
    assert gauss_h_weighted(4, SIEVE) == Fraction(1, 2)
    assert gauss_h_weighted(7, SIEVE) == 1


def test_invalid_discriminants_rejected():
    for d in (-3, 0):
        with pytest.raises(ValueError):
            hurwitz_H1(d, SIEVE)
    # -d = 2, 3 mod 4 is not a discriminant: the tabulated value is zero
    for d in (1, 2, 5, 6):
        assert hurwitz_H1(d, SIEVE) == 0


def test_square_divisor_reconstruction_small():
    # H_1(-d) equals the weighted class numbers summed over square divisors
    for d in _valid_ds(3, 2000):
        total = Fraction(0)
        f = 1
        while f * f <= d:
            if d % (f * f) == 0 and (d // (f * f)) % 4 in (0, 3):
                total += gauss_h_weighted(d // (f * f), SIEVE)
            f += 1
        assert hurwitz_H1(d, SIEVE) == total


def test_sieve_matches_per_value():
    table = hurwitz_sieve(3, 3000)
    for d in _valid_ds(3, 3001):
        assert table[d] == hurwitz_H1(d, SIEVE)


def test_table_round_trip(tmp_path):
    table = hurwitz_sieve(3, 500)
    path = tmp_path / "h.murh1"
    save_table(table, path)
    back = load_table(path)
    assert back.dmin == table.dmin and back.dmax == table.dmax
    for d in _valid_ds(3, 501):
        assert back[d] == table[d]


def test_table_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.murh1"
    path.write_bytes(b"NOPE1" + bytes(32))
    with pytest.raises(ValueError):
        load_table(path)


def test_fundamental_decomposition():
    for d in _valid_ds(3, 3000):
        d0, f = fundamental_decomposition(d, SIEVE)
        assert d0 < 0 and -d0 * f * f == d
        assert d0 % 4 in (0, 1)
        # fundamental part is invariant: re-decomposing gives conductor 1
        assert fundamental_decomposition(-d0, SIEVE) == (d0, 1)


@given(st.integers(0, 12500), st.sampled_from([3, 4]))
@settings(max_examples=60, deadline=None)
def test_certified_matches_bruteforce(i, off):
    d = 4 * i + off
    assert gauss_h_certified(d, SIEVE) == gauss_h_bruteforce(d, SIEVE)


def test_certified_large_fundamental():
    # h(-163) = 1 is the classical tail case; also a mid-size sanity point
    assert gauss_h_certified(163, SIEVE) == 1
    assert gauss_h_certified(120004, SIEVE) == gauss_h_bruteforce(120004,
                                                                 SIEVE)


def test_class_number_via_L_policy():
    policy = LTruncationPolicy()
    for d in (163, 9347, 40387):
        est = class_number_via_L(d, policy, SIEVE)
        tol = min(0.49, l_truncation_error_bound(d, policy.T))
        assert est == pytest.approx(gauss_h_bruteforce(d, SIEVE), abs=tol)


def test_paper_scaled_cutoff():
    policy = LTruncationPolicy(mode="paper-scaled")
    assert policy.cutoff(X=10 ** 4, Y=10 ** 3, P=10 ** 4) == \
        math.ceil(10 ** 2.5 * 10 ** (5 / 3) * 10 ** (-1 / 3))
    with pytest.raises(ValueError):
        policy.cutoff()


def test_l_truncation_bound_monotone():
    b = [l_truncation_error_bound(10 ** 6, T) for T in (10, 100, 1000)]
    assert b[0] > b[1] > b[2] > 0
