"""Integer substrate: smallest-prime-factor sieve, Kronecker symbols, and
the elementary multiplicative/summatory functions everything else consumes.

The sieve is built once and then immutable; all operations are pure given
the sieve.  Exact sums are plain Python integers (arbitrary precision), so
there is no overflow concern at any scale used here.
"""

from __future__ import annotations

import math
import random
from array import array
from dataclasses import dataclass, field
from fractions import Fraction


# ---------------------------------------------------------------------------
# Kronecker symbol (full extension: n may be zero, negative, or even).
# Reciprocity-based so it works far beyond any sieve range.
# ---------------------------------------------------------------------------

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), fully extended.

    Completely multiplicative in both arguments; (a|2) is 0 for even a and
    +-1 by a mod 8 otherwise; (a|0) is 1 iff a = +-1.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker(a, -n)
    if n % 2 == 0 and a % 2 == 0:
        return 0
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    if a < 0:
        if n % 4 == 3:
            result = -result
        a = -a
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ---------------------------------------------------------------------------
# Deterministic primality (Miller-Rabin with fixed witness set) and
# factorization helpers that remain valid beyond the sieve range.
# ---------------------------------------------------------------------------

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid for all n < 3.3 * 10^24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    while True:
        x = random.randrange(2, n - 1)
        c = random.randrange(1, n - 1)
        y, g = x, 1
        while g == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            g = math.gcd(abs(x - y), n)
        if g != n:
            return g


# ---------------------------------------------------------------------------
# Smallest-prime-factor sieve
# ---------------------------------------------------------------------------

@dataclass
class FactorSieve:
    """Smallest-prime-factor table for 2..limit, plus derived helpers.

    spf[n] is the least prime dividing n; spf[p] = p for prime p.
    Immutable after construction and safe to share across threads.
    """

    limit: int
    spf: array
    _primes: list[int] | None = field(default=None, repr=False)

    def primes(self) -> list[int]:
        """All primes up to the sieve limit, ascending."""
        if self._primes is None:
            spf = self.spf
            self._primes = [p for p in range(2, self.limit + 1) if spf[p] == p]
        return self._primes

    def factor(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization of n >= 1 as (p, exponent) pairs, p ascending.

        Within the sieve range this walks spf; beyond it, trial division by
        sieved primes followed by deterministic primality / Pollard rho.
        """
        if n < 1:
            raise ValueError("factor() requires n >= 1")
        out: list[tuple[int, int]] = []
        if n <= self.limit:
            spf = self.spf
            while n > 1:
                p = spf[n]
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
            return out
        for p in self.primes():
            if p * p > n:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
                if n <= self.limit:
                    out.extend(self.factor(n))
                    out.sort()
                    return out
        if n > 1:
            out.extend(sorted(_factor_hard(n).items()))
            out.sort()
        return out

    def mu(self, n: int) -> int:
        """Moebius function."""
        result = 1
        for _, e in self.factor(n):
            if e > 1:
                return 0
            result = -result
        return result

    def euler_phi(self, n: int) -> int:
        """Euler totient."""
        result = n
        for p, _ in self.factor(n):
            result -= result // p
        return result

    def is_squarefree(self, n: int) -> bool:
        return all(e == 1 for _, e in self.factor(n))

    def radical(self, n: int) -> int:
        result = 1
        for p, _ in self.factor(n):
            result *= p
        return result

    def eta(self, m: int) -> Fraction:
        """eta(m) = m/psi(m) = prod_{p | m} p/(p+1); depends only on rad(m)."""
        result = Fraction(1)
        for p, _ in self.factor(m):
            result *= Fraction(p, p + 1)
        return result


def _factor_hard(n: int) -> dict[int, int]:
    """Factor n with no small prime factors (recursion via Pollard rho)."""
    if n == 1:
        return {}
    if is_prime(n):
        return {n: 1}
    d = _pollard_rho(n)
    out = _factor_hard(d)
    for p, e in _factor_hard(n // d).items():
        out[p] = out.get(p, 0) + e
    return out


def build_sieve(limit: int) -> FactorSieve:
    """Smallest-prime-factor sieve for 2..limit."""
    if limit < 2:
        raise ValueError("sieve limit must be >= 2")
    spf = array("q", range(limit + 1))
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == i:
            step = i
            start = i * i
            for j in range(start, limit + 1, step):
                if spf[j] == j:
                    spf[j] = i
    return FactorSieve(limit=limit, spf=spf)


# ---------------------------------------------------------------------------
# Square-free counting and summatory functions
# ---------------------------------------------------------------------------

def squarefree_flags(Z: int, sieve: FactorSieve) -> bytearray:
    """flags[n] = 1 iff n is square-free, for 0 <= n <= Z (flags[0] = 0)."""
    if Z > sieve.limit:
        raise ValueError("Z exceeds sieve limit")
    flags = bytearray([1]) * (Z + 1)
    flags[0] = 0
    for p in sieve.primes():
        p2 = p * p
        if p2 > Z:
            break
        flags[p2::p2] = bytes(len(range(p2, Z + 1, p2)))
    return flags


def sum_mu2_phi(Z: int, sieve: FactorSieve) -> int:
    """Exact Sum_{n <= Z} mu(n)^2 phi(n).

    Main term Z^2/(2 zeta(2)) * prod_p (1 - 1/(p^2+p)); the exact value is
    used to probe that asymptotic.
    """
    flags = squarefree_flags(Z, sieve)
    # phi over square-free n only, via a divide-out sieve kept exact.
    total = 0
    spf = sieve.spf
    for n in range(1, Z + 1):
        if not flags[n]:
            continue
        m, phi = n, n
        while m > 1:
            p = spf[m]
            phi -= phi // p
            while m % p == 0:
                m //= p
        total += phi
    return total


def count_squarefree_twisted(Z: int, m: int, sieve: FactorSieve) -> int:
    """Count of square-free N <= Z coprime to m (principal character twist).

    Main term Z * eta(m) / zeta(2).
    """
    flags = squarefree_flags(Z, sieve)
    if m == 1:
        return sum(flags)
    ps = [p for p, _ in sieve.factor(m)]
    total = 0
    for n in range(1, Z + 1):
        if flags[n] and all(n % p for p in ps):
            total += 1
    return total


def squarefree_in_class_count(X: int, Y: int, a: int, m: int,
                              sieve: FactorSieve) -> int:
    """Count of square-free N in [X, X+Y] with N congruent to a mod m.

    Main term (Y/zeta(2)) * eta(m)/phi(m) (Hooley's equidistribution).
    """
    if math.gcd(a, m) != 1:
        raise ValueError("a must be coprime to m")
    if X + Y > sieve.limit:
        raise ValueError("interval exceeds sieve limit")
    lo = X + ((a - X) % m)
    total = 0
    for n in range(lo, X + Y + 1, m):
        if sieve.is_squarefree(n):
            total += 1
    return total
