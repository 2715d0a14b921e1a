"""Certified verification of the density's sign changes on a finite grid.

The oscillation profile restricted to a finite square-free truncation set
D is periodic with period lcm(D)/2, so checking one period certifies all
of them.  Discarded d's contribute at most

    E(D) = (sum_{all d} Q(d) sqrt(d) - sum_{d in D} Q(d) sqrt(d)) * M_max,

with the full sum bounded through a certified Euler product, so any grid
value clearing E(D) plus the inner-series tail pins the sign of the full
profile at that point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import build_sieve
from .constants import q_table, qsqrt_sum_upper_bound, zeta_3_2_partial
from .multfns import Q

# The 25-element truncation set whose period is 3*5*7*11*13 = 15015.
DEFAULT_D = (1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 21, 22, 26, 30, 33, 35,
             39, 42, 55, 65, 66, 70, 77, 78)

DEFAULT_OFFSETS = (0.0, 0.5, 0.162)

# Reported reference upper bound for sum Q(d) sqrt(d) (with the partial
# product's footnote slack); the certificate recomputes its own bound and
# uses whichever is larger.
REFERENCE_QSQRT_BOUND = 3.0907 + 0.00004
REFERENCE_BUDGET = 0.6306


@lru_cache(maxsize=1)
def _sieve():
    return build_sieve(10000)


def m_max_bounds() -> tuple[float, float]:
    """(lower, upper) bracket for M_max = (sqrt(2)/2) zeta(3/2), the peak
    of the single-term profile |f(0)|."""
    S = 10 ** 6
    partial, crude = zeta_3_2_partial(S)
    # Euler-Maclaurin tail: 2/sqrt(S) - S^(-3/2)/2 + (1/8) S^(-5/2), with
    # the next correction far below 1e-12.
    tail = 2.0 / math.sqrt(S) - 0.5 * S ** -1.5 + 0.125 * S ** -2.5
    z = partial + tail
    half_sqrt2 = math.sqrt(2.0) / 2.0
    return half_sqrt2 * (z - 1e-9), half_sqrt2 * (z + 1e-9)


M_MAX = m_max_bounds()[1]


@dataclass(frozen=True)
class SignCheckConfig:
    """Truncation set, inner-series cutoff, scan offsets, and the advisory
    threshold the certificate compares its recomputed budget against."""

    D: tuple[int, ...] = DEFAULT_D
    S: int = 4_010_000          # 2/sqrt(S) < 0.001
    offsets: tuple[float, ...] = DEFAULT_OFFSETS
    threshold_margin: float = REFERENCE_BUDGET

    def __post_init__(self) -> None:
        if not self.D:
            raise ValueError("truncation set must be nonempty")
        sv = _sieve()
        for d in self.D:
            if d < 1 or not sv.is_squarefree(d):
                raise ValueError(f"{d} is not square-free")
        if self.S < 1:
            raise ValueError("S must be >= 1")
        for o in self.offsets:
            if not 0.0 <= o < 1.0:
                raise ValueError("offsets must lie in [0, 1)")


@dataclass
class OffsetVerdict:
    offset: float
    sign: int
    worst_margin: float
    worst_k: int
    passed: bool


@dataclass
class SignCheckCertificate:
    """Outcome of the one-period grid scan.

    error_budget is the recomputed discarded-tail bound (already the max
    against the reference reading); inner_tail is the series-truncation
    allowance folded into every margin; margins are
    |value| - (error_budget + inner_tail + 1e-9)."""

    period: Fraction
    error_budget: float
    inner_tail: float
    grid: int
    verdicts: list[OffsetVerdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


# ---------------------------------------------------------------------------
# The inner profile f and the truncated sum M_D
# ---------------------------------------------------------------------------

@lru_cache(maxsize=2)
def _s_weights(S: int) -> np.ndarray:
    return np.arange(1, S + 1, dtype=np.float64) ** -1.5


def f_polylog(x: float, S: int) -> tuple[float, float]:
    """f(x) = sum_{s=1}^{S} cos(4 pi x s - 3 pi/4)/s^(3/2), with the
    certified tail bound 2/sqrt(S) for the discarded terms.

    Periodic with period 1/2 and maximized in absolute value at x = 0,
    where it equals -M_max in the limit."""
    if S < 1:
        raise ValueError("S must be >= 1")
    w = _s_weights(S)
    s = np.arange(1, S + 1, dtype=np.float64)
    val = float(np.dot(np.cos(4.0 * math.pi * x * s - 0.75 * math.pi), w))
    return val, 2.0 / math.sqrt(S)


@lru_cache(maxsize=8)
def _weights_for(D: tuple[int, ...]) -> tuple[float, ...]:
    sv = _sieve()
    return tuple(float(Q(d, sv)) * math.sqrt(d) for d in D)


def M_D(T: float, cfg: SignCheckConfig) -> tuple[float, float]:
    """sum_{d in D} Q(d) sqrt(d) f(T/d) with accumulated inner tails."""
    w = _weights_for(cfg.D)
    total = 0.0
    tail = 0.0
    for d, wd in zip(cfg.D, w):
        v, t = f_polylog(T / d, cfg.S)
        total += wd * v
        tail += wd * t
    return total, tail


def period(D: tuple[int, ...]) -> Fraction:
    """Half the least common multiple of the truncation set."""
    if not D:
        raise ValueError("truncation set must be nonempty")
    return Fraction(math.lcm(*D), 2)


def error_budget(D: tuple[int, ...], full_sum_upper: float) -> float:
    """(full_sum_upper - sum_{d in D} Q(d) sqrt(d)) * M_max: a bound on the
    discarded d's contribution at any point, given a certified upper bound
    on the complete sqrt-weighted sum of Q."""
    inside = math.fsum(_weights_for(tuple(D)))
    diff = full_sum_upper - inside
    if diff < 0:
        raise ValueError("upper bound below the in-set sum; not a bound")
    return diff * M_MAX


# ---------------------------------------------------------------------------
# Grid certification
# ---------------------------------------------------------------------------

def _offset_fraction(o: float) -> Fraction:
    return Fraction(o).limit_denominator(10 ** 9)


def grid_verify(cfg: SignCheckConfig,
                qsqrt_upper: float | None = None) -> SignCheckCertificate:
    """Scan one full period at each offset and certify signs.

    Budget = max(own recomputed budget, the reference reading's budget);
    a gridpoint passes when |M_D| clears budget + inner tail + 1e-9 float
    slack with the offset's claimed sign (taken from its first gridpoint).
    f values are cached on the exact rational lattice (k + o)/d mod 1/2,
    so each distinct inner argument is evaluated once.
    """
    own = qsqrt_upper if qsqrt_upper is not None else qsqrt_sum_upper_bound()
    budget = max(error_budget(cfg.D, own),
                 error_budget(cfg.D, REFERENCE_QSQRT_BOUND))
    per = period(cfg.D)
    npts = int(per) if per.denominator == 1 else int(2 * per)
    weights = _weights_for(cfg.D)
    inner_tail = math.fsum(weights) * 2.0 / math.sqrt(cfg.S)
    cert = SignCheckCertificate(period=per, error_budget=budget,
                                inner_tail=inner_tail, grid=npts)
    half = Fraction(1, 2)
    for o in cfg.offsets:
        ofr = _offset_fraction(o)
        cache: dict[Fraction, float] = {}
        sign = 0
        worst = math.inf
        worst_k = 0
        ok = True
        for k in range(1, npts + 1):
            total = 0.0
            for d, wd in zip(cfg.D, weights):
                key = Fraction(k + ofr, d) % half
                got = cache.get(key)
                if got is None:
                    got, _ = f_polylog(float(key), cfg.S)
                    cache[key] = got
                total += wd * got
            if sign == 0:
                sign = 1 if total > 0 else -1
            margin = abs(total) - (budget + inner_tail + 1e-9)
            if margin < worst:
                worst, worst_k = margin, k
            if margin <= 0 or (total > 0) != (sign > 0):
                ok = False
        cert.verdicts.append(OffsetVerdict(offset=o, sign=sign,
                                           worst_margin=worst,
                                           worst_k=worst_k, passed=ok))
    return cert


# ---------------------------------------------------------------------------
# Dense probes via an FFT-sampled inner profile
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def _f_grid(log2_size: int = 21, S: int = 2 * 10 ** 7
            ) -> tuple[np.ndarray, float]:
    """f sampled at M = 2^log2_size equispaced points of its period [0, 1/2)
    by folding the series coefficients mod M through a single FFT.

    Returns (samples, series tail bound 2/sqrt(S)).  Linear interpolation
    between samples adds a small non-certified error concentrated at the
    half-integer cusps; probes using this grid are reported, not certified.
    """
    m = 1 << log2_size
    s = np.arange(1, S + 1, dtype=np.int64)
    coef = np.zeros(m, dtype=np.float64)
    np.add.at(coef, (s % m), s.astype(np.float64) ** -1.5)
    spectrum = np.fft.ifft(coef) * m
    phase = complex(math.cos(-0.75 * math.pi), math.sin(-0.75 * math.pi))
    samples = np.real(phase * spectrum)
    return samples, 2.0 / math.sqrt(S)


def f_interpolated(x: np.ndarray) -> np.ndarray:
    """Approximate f at arbitrary points from the FFT-sampled period."""
    samples, _ = _f_grid()
    m = samples.size
    pos = np.mod(np.asarray(x, dtype=np.float64), 0.5) * (2 * m)
    grid = np.arange(m + 1, dtype=np.float64)
    wrapped = np.concatenate([samples, samples[:1]])
    return np.interp(pos, grid, wrapped)


@dataclass
class SecondPeakReport:
    """Dense-scan maximum of the large-truncation profile on an interval,
    with the certified truncation error of the discarded d > dmax tail."""

    interval: tuple[float, float]
    dmax: int
    max_value: float
    argmax: float
    error_bound: float
    scan_points: int

    @property
    def certified_negative(self) -> bool:
        return self.max_value + self.error_bound < 0.0


def second_peak_probe(interval: tuple[float, float] = (15014.5, 15015.0),
                      dmax: int = 5000, scan_points: int = 2001,
                      qsqrt_upper: float | None = None) -> SecondPeakReport:
    """Scan M_{D'} with D' = all square-free d <= dmax densely on the given
    interval — by default the half-period past the certified negative
    midpoint, where any additional sign change would have to appear (the
    profile's second local peak sits near the integer + 0.6).  The
    discarded tail is bounded by
    0.83 * (full bound - sum_{d <= dmax} Q(d) sqrt(d)), using the sup of
    |f| away from its cusps."""
    own = qsqrt_upper if qsqrt_upper is not None else qsqrt_sum_upper_bound()
    q = q_table(dmax)
    d = np.arange(dmax + 1, dtype=np.float64)
    d[0] = 1.0
    w = q * np.sqrt(d)
    inside = float(w.sum())
    err = 0.83 * (min(own, REFERENCE_QSQRT_BOUND) - inside)
    ts = np.linspace(interval[0], interval[1], scan_points)
    dd = np.nonzero(q)[0]
    vals = np.zeros_like(ts)
    for di in dd:
        vals += w[di] * f_interpolated(ts / di)
    i = int(np.argmax(vals))
    return SecondPeakReport(interval=interval, dmax=dmax,
                            max_value=float(vals[i]), argmax=float(ts[i]),
                            error_bound=err, scan_points=scan_points)


def third_sign_change_fraction(cfg: SignCheckConfig,
                               samples_per_half: int = 8) -> float:
    """Observed fraction of integer gridpoints k in one period for which
    the truncated profile exceeds the error budget somewhere on
    [k + 1/2, k + 1] (an uncertified probe via the interpolated f)."""
    budget = max(error_budget(cfg.D, qsqrt_sum_upper_bound()),
                 error_budget(cfg.D, REFERENCE_QSQRT_BOUND))
    npts = int(period(cfg.D))
    weights = _weights_for(cfg.D)
    ks = np.arange(1, npts + 1, dtype=np.float64)[:, None]
    us = np.linspace(0.5, 1.0, samples_per_half)[None, :]
    ts = ks + us
    vals = np.zeros_like(ts)
    for d, wd in zip(cfg.D, weights):
        vals += wd * f_interpolated(ts / d)
    hit = (vals.max(axis=1) > budget)
    return float(hit.mean())
