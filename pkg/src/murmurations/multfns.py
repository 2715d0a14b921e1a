"""Character sums attached to the congruence d^2 | r^2 N - 4P.

Each closed form here ships with an independent brute-force evaluator of
the defining sum; the 2-adic case work is intricate enough that the brute
forces are first-class operations, not test scaffolding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import FactorSieve, kronecker


# ---------------------------------------------------------------------------
# Remainder sets mod d^2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RemainderSet:
    """Residues t mod d^2 with r^2 t = 4P (mod d^2) compatible with
    square-free N; empty exactly when (r, d) is non-admissible."""

    r: int
    d: int
    P: int
    residues: tuple[int, ...]
    admissible: bool


def is_admissible(r: int, d: int) -> bool:
    """Whether the residue set mod d^2 is nonempty (P-independent)."""
    if r % 2 == 1:
        return d % 2 == 1 and math.gcd(d, r) == 1
    l = r // 2
    if d % 2 == 1:
        return math.gcd(d, l) == 1
    return math.gcd(l, d // 2) == 1


def _residues(r: int, d: int, P: int) -> tuple[int, ...]:
    m = d * d
    if r % 2 == 1:
        if d % 2 == 0 or math.gcd(d, r) != 1:
            return ()
        return (4 * P * pow(r, -2, m) % m,)
    l = r // 2
    if d % 2 == 1:
        if math.gcd(d, l) != 1:
            return ()
        return (P * pow(l, -2, m) % m if m > 1 else 0,)
    b = d // 2
    if math.gcd(l, b) != 1:
        return ()
    if b % 2 == 1:
        if l % 2 == 1:
            return (P * pow(l, -2, m) % m,)
        return (P * pow(l * l - b * b, -1, m) % m,)
    # l odd, b even: two distinct residues
    t1 = P * pow(l * l, -1, m) % m
    t2 = P * pow(l * l - b * b, -1, m) % m
    return tuple(sorted({t1, t2}))


def remainder_set(r: int, d: int, P: int, *,
                  enforce_regime: bool = True) -> RemainderSet:
    """The residue set mod d^2, per the parity/gcd case analysis.

    enforce_regime checks d^2 <= 4P (the range in which these sets feed the
    trace average); the combinatorial definition itself only needs P an odd
    prime not dividing d.
    """
    if P < 3 or P % 2 == 0:
        raise ValueError("P must be an odd prime")
    if d % P == 0:
        raise ValueError("P must not divide d")
    if enforce_regime and d * d > 4 * P:
        raise ValueError("outside the regime d^2 <= 4P")
    res = _residues(r, d, P)
    if m := d:  # residues must be coprime to d
        assert all(math.gcd(t, m) == 1 or m == 1 for t in res)
    return RemainderSet(r=r, d=d, P=P, residues=res, admissible=bool(res))


# ---------------------------------------------------------------------------
# theta_r
# ---------------------------------------------------------------------------

def _check_v2(n: int, name: str) -> int:
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v in (1, 2):
        raise ValueError(f"2-adic valuation of {name} must not be 1 or 2")
    return v


def theta(r: int, m: int, P: int, sieve: FactorSieve) -> int:
    """Closed form of theta_r(m) = sum_a (a|m)((a r^2 - 4P)|m).

    Multiplicative in m; requires v_2(m) not in {1, 2} and gcd(m, P) = 1
    (use theta_bruteforce outside that range).  The value is independent
    of P.
    """
    _check_v2(m, "m")
    if math.gcd(m, P) != 1:
        raise ValueError("closed form needs gcd(m, P) = 1; use theta_bruteforce")
    result = 1
    for p, a in sieve.factor(m):
        if p == 2:
            if r % 2 == 0:
                return 0
            result *= (-1) ** a * 2 ** (a - 1)
        elif r % p == 0:
            if a % 2:
                return 0
            result *= p ** (a - 1) * (p - 1)
        else:
            if a % 2:
                result *= -(p ** (a - 1))
            else:
                result *= p ** (a - 1) * (p - 2)
    return result


def theta_bruteforce(r: int, m: int, P: int) -> int:
    """Direct evaluation of the defining character sum."""
    _check_v2(m, "m")
    r2 = r * r
    fourP = 4 * P
    return sum(kronecker(a, m) * kronecker(a * r2 - fourP, m)
               for a in range(m))


# ---------------------------------------------------------------------------
# phi_circ
# ---------------------------------------------------------------------------

def _is_square(n: int) -> bool:
    s = math.isqrt(n)
    return s * s == n


def _g_divides_d_infinity(g: int, d: int, sieve: FactorSieve) -> bool:
    while g > 1:
        e = math.gcd(g, d)
        if e == 1:
            return False
        while (e2 := math.gcd(g, e)) > 1:
            g //= e2
    return True


def phi_circ(r: int, d: int, g: int, P: int, sieve: FactorSieve) -> int:
    """Closed form of phi^o_{r,d}(g) per the five-case 2-adic table.

    Zero for non-admissible (r, d); requires g | d^infinity and
    v_2(g) not in {1, 2}.  P-independent.
    """
    _check_v2(g, "g")
    if not _g_divides_d_infinity(g, d, sieve):
        raise ValueError("g must divide a power of d")
    if not is_admissible(r, d):
        return 0
    sq = 1 if _is_square(g) else 0
    phi_g = sieve.euler_phi(g)
    if d % 2 == 1:
        return phi_g * sq
    if d % 4 == 2:
        if g % 2 == 1:
            return phi_g * sq
        if r % 4 == 2:
            return 0
        return 2 * phi_g * sq  # 4 | r (r odd is non-admissible with even d)
    return 2 * phi_g * sq  # 4 | d


def phi_circ_bruteforce(r: int, d: int, g: int, P: int,
                        sieve: FactorSieve) -> int:
    """Defining sum over a mod d^2 g with a mod d^2 in the residue set."""
    _check_v2(g, "g")
    if not _g_divides_d_infinity(g, d, sieve):
        raise ValueError("g must divide a power of d")
    rs = remainder_set(r, d, P, enforce_regime=False)
    if not rs.admissible:
        return 0
    d2 = d * d
    r2 = r * r
    total = 0
    for t in rs.residues:
        for v in range(g):
            a = t + v * d2
            s, rem = divmod(a * r2 - 4 * P, d2)
            assert rem == 0
            total += kronecker(a, g) * kronecker(s, g)
    return total


# ---------------------------------------------------------------------------
# nu, Q, and the triple sum
# ---------------------------------------------------------------------------

def Q(d: int, sieve: FactorSieve) -> Fraction:
    """Q(d) = mu^2(d) prod_{p|d} p^2/(p^4 - 2p^2 - p + 1)."""
    result = Fraction(1)
    for p, e in sieve.factor(d):
        if e > 1:
            return Fraction(0)
        result *= Fraction(p * p, p ** 4 - 2 * p * p - p + 1)
    return result


def nu(r: int, sieve: FactorSieve) -> Fraction:
    """nu(r) = prod_{p|r} (1 + p^2/(p^4 - 2p^2 - p + 1)) = sum_{d|r} Q(d)."""
    result = Fraction(1)
    for p, _ in sieve.factor(r):
        result *= 1 + Fraction(p * p, p ** 4 - 2 * p * p - p + 1)
    return result


@dataclass(frozen=True)
class ThetaTriple:
    """An (m, d, g) index of the triple sum: (m, d) = 1, g | d^infinity,
    (r, d) admissible in context."""

    m: int
    d: int
    g: int


def _smooth_square_gs(d: int, bound: int, sieve: FactorSieve) -> list[int]:
    """All squares g | d^infinity with g <= bound, ascending."""
    gs = [1]
    for p, _ in sieve.factor(d):
        step = p * p
        new = []
        for g in gs:
            x = g
            while x * step <= bound:
                x *= step
                new.append(x)
        gs += new
    return sorted(gs)


def _phi_circ_ext(r: int, d: int, g: int, sieve: FactorSieve) -> int:
    """phi_circ's closed-form table applied formally to any square g | d^inf.

    The defining sum restricts v_2(g) away from {1, 2}, but the triple sum
    below only converges to its stated limit when the table is extended to
    all squares; non-square g vanish either way.
    """
    if not is_admissible(r, d):
        return 0
    if not _is_square(g):
        return 0
    phi_g = sieve.euler_phi(g)
    if d % 2 == 1 or (d % 4 == 2 and g % 2 == 1):
        return phi_g
    if d % 4 == 2 and r % 4 == 2:
        return 0
    return 2 * phi_g


def _theta_factor(m: int, r: int, sieve: FactorSieve) -> float:
    """theta_r(m) / (m^2 prod_{p|m}(1 - 1/p^2)), closed form, P-free.

    The 2-adic factor (-1)^a 2^(a-1) is applied for every a >= 1 (the
    formal extension of the closed form below v_2 = 3), which is the
    reading under which the triple sum attains its product limit.
    """
    num = 1
    den = m * m
    for p, a in sieve.factor(m):
        if p == 2:
            if r % 2 == 0:
                return 0.0
            num *= (-1) ** a * 2 ** (a - 1)
        elif r % p == 0:
            if a % 2:
                return 0.0
            num *= p ** (a - 1) * (p - 1)
        else:
            num *= -(p ** (a - 1)) if a % 2 else p ** (a - 1) * (p - 2)
        den = den * (p * p - 1) // (p * p)
    return num / den


def theta_sum_partial(r: int, Z: int, Zprime: int, P: int,
                      sieve: FactorSieve) -> float:
    """Partial triple sum of (eta/phi)(d^2 m g) theta_r(m) phi^o(g) / (mgd)
    over admissible d <= Z, (m, d) = 1, g | d^infinity, mg <= Zprime.

    Converges to B * nu(r) with tail O(Z^-2 + Zprime^-1/5); evaluated via
    the closed forms (formally extended across v_2 in {1, 2}), in which P
    cancels out.  Deterministic summation order: d ascending, then g,
    then m.
    """
    total = 0.0
    for d in range(1, Z + 1):
        if not is_admissible(r, d):
            continue
        dps = [p for p, _ in sieve.factor(d)]
        dfac = 1.0 / d ** 3
        for p in dps:
            dfac /= 1.0 - 1.0 / (p * p)
        for g in _smooth_square_gs(d, Zprime, sieve):
            pg = _phi_circ_ext(r, d, g, sieve)
            if pg == 0:
                continue
            gfac = dfac * pg / (g * g)
            acc = 0.0
            for m in range(1, Zprime // g + 1):
                if any(m % p == 0 for p in dps):
                    continue
                acc += _theta_factor(m, r, sieve)
            total += gfac * acc
    return total


# ---------------------------------------------------------------------------
# The direct square-free character sum over an interval
# ---------------------------------------------------------------------------

def S_dnr(d: int, n: int, r: int, X: int, Y: int, P: int,
          sieve: FactorSieve) -> int:
    """Exact sum of mu^2(N) (N|n) ((r^2 N - 4P)/d^2 | n) over N in [X, X+Y]
    lying in the residue class set mod d^2, with P excluded from N.

    Requires 4P > r^2 (X + Y) so the shifted argument keeps one sign.
    """
    if 4 * P <= r * r * (X + Y):
        raise ValueError("need 4P > r^2 (X+Y)")
    rs = remainder_set(r, d, P, enforce_regime=False)
    if not rs.admissible:
        return 0
    d2 = d * d
    r2 = r * r
    total = 0
    for t in rs.residues:
        start = X + (t - X) % d2
        for N in range(start, X + Y + 1, d2):
            if N % P == 0 or not sieve.is_squarefree(N):
                continue
            s = (r2 * N - 4 * P) // d2
            total += kronecker(N, n) * kronecker(s, n)
    return total


def S_dnr_main_term(d: int, n: int, r: int, Y: int, P: int,
                    sieve: FactorSieve) -> float:
    """Predicted main term (Y/zeta(2)) (eta/phi)(d^2 n) phi^o_{r,d}(g) theta_r(n'),
    where g is the d-smooth part of n and n' = n/g."""
    g = 1
    ps = [p for p, _ in sieve.factor(d)]
    nn = n
    for p in ps:
        while nn % p == 0:
            nn //= p
            g *= p
    nprime = n // g
    zeta2 = math.pi * math.pi / 6
    d2n = d * d * n
    ef = float(sieve.eta(d2n)) / sieve.euler_phi(d2n)
    return (Y / zeta2) * ef * phi_circ(r, d, g, P, sieve) * theta(r, nprime, P, sieve)
