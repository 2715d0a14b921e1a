"""Exact traces of the P-th Hecke operator composed with the Fricke
involution on square-free-level newform spaces, and the interval/dyadic
empirical averages they produce.

Per level, the trace is a finite class-number sum

    h(-4PN)/2 + h(-PN)/2 - [k=2] P
    + (-1)^(k/2-1) sum_{1 <= r <= 2 sqrt(P/N)} U_{k-2}(r sqrt(N)/(2 sqrt P))
        sum_{d^2 | r^2 N - 4P} h(N (r^2 N - 4P)/d^2)

with the 1/2, 1/3 automorphism weights at discriminants -4, -3.  For
k = 2 every factor is rational and the value is an exact integer, which
the test-suite uses as the strongest internal consistency check.
Averages divide by the dimension main term (k-1) phi(N)/12 summed over
the same levels, which normalizes the interval average directly onto the
limiting density M_k(P/X).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import FactorSieve, build_sieve, is_prime
from .classnumbers import HurwitzTable, gauss_h_weighted
from .density import DensityConfig, chebyshev_U, dyadic_density, \
    murmuration_density


@lru_cache(maxsize=1)
def _default_sieve() -> FactorSieve:
    return build_sieve(200000)


@dataclass(frozen=True)
class TraceParams:
    """Level N (square-free), prime P not dividing N, even weight k."""

    N: int
    P: int
    k: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.k < 2 or self.k % 2:
            raise ValueError("k must be even and >= 2")
        if self.P <= 2 or not is_prime(self.P):
            raise ValueError("P must be an odd prime")
        if self.N % self.P == 0:
            raise ValueError("P must not divide N")


@dataclass
class TraceReport:
    """Interval or dyadic average of traces against the predicted density.

    numerator / denominator = average; predicted is M_k(P/X) for interval
    runs and the dyadic integral of M_k for dyadic runs; residual is
    average - predicted.  span is the interval length Y (interval) or the
    ratio c (dyadic).
    """

    kind: str
    X: int
    span: float
    P: int
    k: int
    numerator: float
    denominator: float
    average: float
    predicted: float
    residual: float
    levels: int


# ---------------------------------------------------------------------------
# Per-level trace
# ---------------------------------------------------------------------------

_h_cache: dict[int, Fraction] = {}


def _class_number(m: int, sieve: FactorSieve,
                  table: HurwitzTable | None) -> Fraction:
    """Weighted h(-m), zero when -m is not a discriminant, cached.

    With a table, h is reconstructed from the tabulated Hurwitz values by
    Moebius inversion over square divisors; otherwise per-value counting
    (certified analytic rounding beyond 10^6).
    """
    if m % 4 in (1, 2):
        return Fraction(0)
    got = _h_cache.get(m)
    if got is not None:
        return got
    if table is not None:
        if m > table.dmax or m < table.dmin:
            raise LookupError(
                f"class-number table [{table.dmin}, {table.dmax}] "
                f"does not cover discriminant -{m}")
        total = Fraction(0)
        f = 1
        while f * f <= m:
            if m % (f * f) == 0:
                q = m // (f * f)
                # quotients that are not discriminants tabulate to zero
                if q % 4 not in (1, 2):
                    mu = sieve.mu(f)
                    if mu:
                        total += mu * table[q]
            f += 1
        _h_cache[m] = total
        return total
    val = gauss_h_weighted(m, sieve, certified_above=10 ** 6)
    _h_cache[m] = val
    return val


def _square_divisors(m: int, sieve: FactorSieve) -> list[int]:
    """All d >= 1 with d^2 | m."""
    divs = [1]
    for p, e in sieve.factor(m):
        if e < 2:
            continue
        pk, powers = 1, []
        for _ in range(e // 2):
            pk *= p
            powers.append(pk)
        divs += [q * pw for q in divs for pw in powers]
    return sorted(divs)


def trace_TpWN(params: TraceParams, table: HurwitzTable | None = None,
               sieve: FactorSieve | None = None) -> Fraction | float:
    """Trace of the composed Hecke/Fricke operator at level N, weight k.

    Exact rational (an integer, up to the formula's bounded correction)
    for k = 2; float for k > 2, where the Chebyshev factor at an
    irrational argument forecloses exactness.
    """
    sieve = sieve or _default_sieve()
    N, P, k = params.N, params.P, params.k
    if not sieve.is_squarefree(N):
        raise ValueError("N must be square-free")
    h4 = _class_number(4 * P * N, sieve, table)
    h1 = _class_number(P * N, sieve, table)
    exact = h4 / 2 + h1 / 2
    if k == 2:
        exact -= P
    sign = -1 if k % 4 == 0 else 1
    rmax = math.isqrt(4 * P // N) if N <= 4 * P else 0
    osc_exact = Fraction(0)
    osc_float = 0.0
    for r in range(1, rmax + 1):
        m = 4 * P - r * r * N
        if m <= 0:
            continue
        inner = Fraction(0)
        for d in _square_divisors(m, sieve):
            inner += _class_number(N * m // (d * d), sieve, table)
        if k == 2:
            osc_exact += inner
        else:
            u = chebyshev_U(k - 2, r * math.sqrt(N) / (2.0 * math.sqrt(P)))
            osc_float += u * float(inner)
    if k == 2:
        return exact + sign * osc_exact
    return float(exact) + sign * osc_float


def dimension_main(N: int, k: int, sieve: FactorSieve | None = None
                   ) -> Fraction:
    """Main term (k-1) phi(N) / 12 of the newform-space dimension."""
    if N < 1 or k < 2 or k % 2:
        raise ValueError("need N >= 1 and even k >= 2")
    sieve = sieve or _default_sieve()
    return Fraction((k - 1) * sieve.euler_phi(N), 12)


# ---------------------------------------------------------------------------
# Interval and dyadic averages
# ---------------------------------------------------------------------------

def _average_over(levels: list[int], P: int, k: int,
                  table: HurwitzTable | None,
                  sieve: FactorSieve) -> tuple[float, float]:
    """(numerator, denominator) accumulated in fixed ascending-N order."""
    num_exact = Fraction(0)
    num_float = 0.0
    den = Fraction(0)
    for N in levels:
        t = trace_TpWN(TraceParams(N=N, P=P, k=k), table, sieve)
        if k == 2:
            num_exact += t
        else:
            num_float += t
        den += dimension_main(N, k, sieve)
    num = float(num_exact) if k == 2 else num_float
    return num, float(den)


def _square_free_levels(lo: int, hi: int, P: int,
                        sieve: FactorSieve) -> list[int]:
    return [N for N in range(lo, hi + 1)
            if N % P and sieve.is_squarefree(N)]


def interval_average(X: int, Y: int, P: int, k: int,
                     table: HurwitzTable | None = None,
                     cfg: DensityConfig | None = None,
                     sieve: FactorSieve | None = None) -> TraceReport:
    """Average of traces over square-free levels in [X, X+Y] with P
    excluded, against the predicted density M_k(P/X)."""
    if Y >= X:
        raise ValueError("need Y < X")
    sieve = sieve or _default_sieve()
    cfg = cfg or DensityConfig(k=k)
    levels = _square_free_levels(X, X + Y, P, sieve)
    num, den = _average_over(levels, P, k, table, sieve)
    predicted = murmuration_density(cfg, P / X)
    average = num / den if den else math.nan
    return TraceReport(kind="interval", X=X, span=float(Y), P=P, k=k,
                       numerator=num, denominator=den, average=average,
                       predicted=predicted, residual=average - predicted,
                       levels=len(levels))


def dyadic_average(X: int, c: float, P: int, k: int,
                   table: HurwitzTable | None = None,
                   cfg: DensityConfig | None = None,
                   sieve: FactorSieve | None = None) -> TraceReport:
    """Average of traces over square-free levels in [X, cX], against the
    dyadic integral of the density."""
    if c <= 1:
        raise ValueError("c must exceed 1")
    sieve = sieve or _default_sieve()
    cfg = cfg or DensityConfig(k=k)
    levels = _square_free_levels(X, int(c * X), P, sieve)
    num, den = _average_over(levels, P, k, table, sieve)
    predicted = dyadic_density(k, c, P / X, cfg)
    average = num / den if den else math.nan
    return TraceReport(kind="dyadic", X=X, span=c, P=P, k=k,
                       numerator=num, denominator=den, average=average,
                       predicted=predicted, residual=average - predicted,
                       levels=len(levels))
