"""The limiting murmuration density M_k(y) and its averages.

Three equivalent evaluations of the same function are provided and
cross-checked against each other:

  * murmuration_density        -- finite Chebyshev-polynomial sum (exact
                                  truncation: the r-sum is finite)
  * murmuration_density_bessel -- Bessel double series; the inner s-series
                                  is summed in closed form through the
                                  integral representation of J_n, so the
                                  only error sources are quadrature and a
                                  certified Euler-product bracket
  * bessel_series_partial      -- the naively truncated double series with
                                  a crude but certified tail bound (kept as
                                  an independent diagnostic route)

plus the oscillatory asymptotic profile, dyadic and smoothed averages,
the k=2 dyadic closed form, and the Bessel antiderivative recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import build_sieve
from .constants import euler_constant
from .multfns import Q, nu


@dataclass(frozen=True)
class DensityConfig:
    """Weight and truncation/tolerance settings for density evaluations."""

    k: int
    dmax: int = 2000
    smax: int = 4000
    pmax: int = 10 ** 6
    quad_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.k < 2 or self.k % 2:
            raise ValueError("k must be even and >= 2")
        if self.dmax < 1 or self.smax < 1:
            raise ValueError("dmax and smax must be >= 1")
        if self.quad_tol <= 0:
            raise ValueError("quad_tol must be positive")


@lru_cache(maxsize=1)
def _small_sieve():
    return build_sieve(20000)


@lru_cache(maxsize=None)
def _nu_float(r: int) -> float:
    return float(nu(r, _small_sieve()))


@lru_cache(maxsize=None)
def _q_exact(d: int) -> Fraction:
    return Q(d, _small_sieve())


def _sign(k: int) -> float:
    """(-1)^(k/2 - 1)."""
    return -1.0 if k % 4 == 0 else 1.0


# ---------------------------------------------------------------------------
# Chebyshev polynomials and Bessel functions
# ---------------------------------------------------------------------------

def chebyshev_U(n: int, x: float) -> float:
    """Chebyshev polynomial of the second kind, U_n(cos t) = sin((n+1)t)/sin t.

    Accepts |x| up to 1 + 1e-12 (clamped); |U_n(x)| <= n + 1 on [-1, 1].
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if abs(x) > 1 + 1e-12:
        raise ValueError("argument outside [-1, 1]")
    x = min(1.0, max(-1.0, x))
    if n == 0:
        return 1.0
    u0, u1 = 1.0, 2.0 * x
    for _ in range(n - 1):
        u0, u1 = u1, 2.0 * x * u1 - u0
    return u1


def _bessel_series_exact(n: int, x: float) -> float:
    """Ascending series for J_n(x) summed in exact rational arithmetic.

    The float argument is treated as the exact dyadic rational it is, so the
    alternating series suffers no cancellation; the result is the correctly
    rounded float of a sum whose truncation error is below 1e-25 relative.
    """
    h = Fraction(x) / 2
    term = h ** n / math.factorial(n)
    total = term
    h2 = h * h
    m = 0
    fterm = float(term)
    while m < 500:
        m += 1
        term = -term * h2 / (m * (n + m))
        total += term
        fterm = abs(float(term))
        if fterm < 1e-25 * max(abs(float(total)), 1e-280) and m * (n + m) > float(h2):
            break
    return float(total)


def _bessel_miller(n: int, x: float) -> float:
    """J_n(x) by backward recurrence normalized by J_0 + 2*sum J_{2m} = 1."""
    start = int(max(n, x) + 16.0 * max(n, x) ** (1.0 / 3.0) + 24)
    jp = 0.0                      # J_{m+1} (unnormalized)
    jc = 1e-280                   # J_m
    even_sum = 0.0
    target = jc if start == n else 0.0
    m = start
    while m > 0:
        jm = (2.0 * m / x) * jc - jp
        jp, jc = jc, jm           # jc is now the order m-1 value
        m -= 1
        if m == n:
            target = jc
        if m > 0 and m % 2 == 0:
            even_sum += jc
        if abs(jc) > 1e250:
            jp *= 1e-250
            jc *= 1e-250
            even_sum *= 1e-250
            target *= 1e-250
    norm = jc + 2.0 * even_sum
    return target / norm


def bessel_J(n: int, x: float) -> float:
    """Bessel function J_n(x) for integer n >= 0, x >= 0.

    Relative error <= 1e-10 away from zeros of J_n for x <= 1e4, n <= 64:
    exact-rational ascending series for x < max(12, 2n), Miller backward
    recurrence with the even-order normalization otherwise.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x < max(12.0, 2.0 * n):
        return _bessel_series_exact(n, x)
    return _bessel_miller(n, x)


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod quadrature (7-15 pair) with forced breakpoints
# ---------------------------------------------------------------------------

_XGK = np.array([
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
])
_WGK = np.array([
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
])
_WG = np.array([
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])        # 15 ascending nodes
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])            # Kronrod weights
_WG15 = np.zeros(15)
_WG15[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])    # embedded Gauss


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod 7-15 panel: (Kronrod value, |K15 - G7| estimate)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = f(mid + half * _NODES)
    k15 = half * float(np.dot(_WK, y))
    g7 = half * float(np.dot(_WG15, y))
    return k15, abs(k15 - g7)


def adaptive_quadrature(f, a: float, b: float, tol: float,
                        breakpoints: tuple[float, ...] = (),
                        max_depth: int = 52) -> tuple[float, float]:
    """Integrate a vectorized callable on [a, b] to absolute tolerance tol.

    The interval is pre-split at every interior breakpoint (integrand kinks
    and singular points must be listed there); each piece is then bisected
    adaptively with the Gauss-Kronrod 7-15 error estimate.  Returns
    (value, accumulated error estimate).
    """
    pts = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    total = 0.0
    err_total = 0.0
    width = b - a
    for lo, hi in zip(pts, pts[1:]):
        stack = [(lo, hi, 0)]
        while stack:
            x0, x1, depth = stack.pop()
            val, err = _gk15(f, x0, x1)
            if err <= tol * max((x1 - x0) / width, 1e-6) or depth >= max_depth:
                total += val
                err_total += err
            else:
                xm = 0.5 * (x0 + x1)
                stack.append((x0, xm, depth + 1))
                stack.append((xm, x1, depth + 1))
    return total, err_total


# ---------------------------------------------------------------------------
# The Chebyshev (finite-sum) form of M_k
# ---------------------------------------------------------------------------

def murmuration_density(cfg: DensityConfig, y: float) -> float:
    """M_k(y) via the finite Chebyshev sum.

    M_k(y) = (alpha (-1)^(k/2-1) / (k-1)) sum_{1<=r<=2 sqrt(y)} nu(r)
             * sqrt(4y - r^2) U_{k-2}(r / (2 sqrt y))
             + (beta/(k-1)) sqrt(y) - gamma [k=2] y.
    """
    if y <= 0:
        raise ValueError("y must be positive")
    k = cfg.k
    al = euler_constant("alpha", cfg.pmax).value
    be = euler_constant("beta", cfg.pmax).value
    ga = euler_constant("gamma", cfg.pmax).value
    two_sqrt_y = 2.0 * math.sqrt(y)
    rmax = int(two_sqrt_y)
    total = 0.0
    for r in range(1, rmax + 1):
        rad = 4.0 * y - r * r
        if rad <= 0.0:
            continue
        total += (_nu_float(r) * math.sqrt(rad)
                  * chebyshev_U(k - 2, r / two_sqrt_y))
    value = (al * _sign(k) / (k - 1)) * total + (be / (k - 1)) * math.sqrt(y)
    if k == 2:
        value -= ga * y
    return value


# ---------------------------------------------------------------------------
# The Bessel-series form of M_k
# ---------------------------------------------------------------------------

def _summed_kernel_integrand(order: int, c: float):
    """Vectorized integrand whose integral over [0, pi] (divided by pi) is
    sum_{s>=1} J_order(c s)/s.

    From J_n(z) = (1/pi) int_0^pi cos(n t - z sin t) dt and the Fourier
    series sum cos(su)/s = -log|2 sin(u/2)|, sum sin(su)/s = (pi - u)/2
    for u in (0, 2 pi), extended periodically.
    """
    def f(theta: np.ndarray) -> np.ndarray:
        u = c * np.sin(theta)
        um = np.mod(u, 2.0 * math.pi)
        mag = np.maximum(np.abs(2.0 * np.sin(u / 2.0)), 1e-300)
        return (np.cos(order * theta) * (-np.log(mag))
                + np.sin(order * theta) * (math.pi - um) / 2.0)
    return f


def bessel_inner_sum(order: int, c: float,
                     tol: float = 1e-10) -> tuple[float, float]:
    """sum_{s>=1} J_order(c s)/s, summed in closed form.  Returns
    (value, error estimate).

    For odd order and c <= 2 pi the kernel integral evaluates exactly:
    1/order, minus c/4 when order = 1 (the odd-symmetry of cos(n t) about
    t = pi/2 kills every remaining term).  Beyond 2 pi the wrapped kernel
    is integrated by adaptive quadrature with breakpoints at every theta
    with c sin(theta) = 2 pi j, where the log kernel is singular.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    if order % 2 == 1 and c <= 2.0 * math.pi:
        return 1.0 / order - (c / 4.0 if order == 1 else 0.0), 0.0
    bps = []
    j = 1
    while 2.0 * math.pi * j < c:
        t = math.asin(2.0 * math.pi * j / c)
        bps += [t, math.pi - t]
        j += 1
    val, err = adaptive_quadrature(_summed_kernel_integrand(order, c),
                                   0.0, math.pi, tol, tuple(bps))
    return val / math.pi, err / math.pi


def murmuration_density_bessel(cfg: DensityConfig, y: float,
                               tol: float | None = None
                               ) -> tuple[float, float]:
    """M_k(y) = alpha sqrt(y) sum_{d,s} Q(d) J_{k-1}(4 pi s sqrt(y)/d)/s,
    with the s-series summed in closed form.  Returns (value, tail_bound).

    For every d > 2 sqrt(y) the inner sum is exactly 1/(k-1) (minus a
    linear term when k = 2), so the d-tail collapses onto the certified
    Euler-product values sum Q(d) = beta/alpha and
    sum Q(d)/d = gamma/(alpha pi); only d <= 2 sqrt(y) need quadrature.
    The k=2 linear pieces reassemble exactly the -gamma y term of the
    Chebyshev form, so no separate subtraction appears here.

    If tol is given and the certified tail_bound exceeds it, raises
    ValueError rather than returning a value that cannot honor it.
    """
    if y <= 0:
        raise ValueError("y must be positive")
    k = cfg.k
    order = k - 1
    sy = math.sqrt(y)
    al = euler_constant("alpha", cfg.pmax)
    be = euler_constant("beta", cfg.pmax)
    ga = euler_constant("gamma", cfg.pmax)

    d0 = int(2.0 * sy)
    head = 0.0
    quad_err = 0.0
    s_q = Fraction(0)
    s_qd = Fraction(0)
    for d in range(1, d0 + 1):
        q = _q_exact(d)
        s_q += q
        s_qd += q / d
        if q == 0:
            continue
        v, e = bessel_inner_sum(order, 4.0 * math.pi * sy / d, cfg.quad_tol)
        head += float(q) * v
        quad_err += float(q) * e

    q_total = be.value / al.value
    q_total_err = q_total * (be.tail_bound / be.value
                             + al.tail_bound / al.value)
    tail = (q_total - float(s_q)) / order
    bracket = q_total_err / order
    if order == 1:
        qd_total = ga.value / (al.value * math.pi)
        qd_total_err = qd_total * (ga.tail_bound / ga.value
                                   + al.tail_bound / al.value)
        tail -= math.pi * sy * (qd_total - float(s_qd))
        bracket += math.pi * sy * qd_total_err

    value = al.value * sy * (head + tail)
    tail_bound = al.value * sy * (quad_err + bracket)
    tail_bound += abs(value) * al.tail_bound / al.value
    if tol is not None and tail_bound > tol:
        raise ValueError(
            f"requested tolerance {tol} is below the tail budget {tail_bound}")
    return value, tail_bound


_LANDAU = 0.6749  # |J_n(z)| <= 0.674885... z^(-1/3) uniformly in n >= 0


def bessel_series_partial(cfg: DensityConfig, y: float) -> tuple[float, float]:
    """The naively truncated (dmax, smax) Bessel double series with a crude
    certified tail bound.  Returns (value, tail_bound).

    Diagnostic route only: the s-tail decays like smax^(-1/3) through the
    uniform |J_n(z)| <= min(1, 0.6749 z^(-1/3)) bound, so tight tolerances
    are out of reach by construction.  Requires dmax >= 2 sqrt(y) so the
    d-tail can use the exact value of the inner sum beyond the cutoff.
    """
    if y <= 0:
        raise ValueError("y must be positive")
    sy = math.sqrt(y)
    if cfg.dmax < 2.0 * sy:
        raise ValueError("dmax must be at least 2 sqrt(y)")
    order = cfg.k - 1
    al = euler_constant("alpha", cfg.pmax)
    be = euler_constant("beta", cfg.pmax)
    ga = euler_constant("gamma", cfg.pmax)
    total = 0.0
    s_tail = 0.0
    s_q = Fraction(0)
    s_qd = Fraction(0)
    for d in range(1, cfg.dmax + 1):
        q = _q_exact(d)
        s_q += q
        s_qd += q / d
        if q == 0:
            continue
        c = 4.0 * math.pi * sy / d
        qf = float(q)
        total += qf * math.fsum(bessel_J(order, c * s) / s
                                for s in range(1, cfg.smax + 1))
        s_tail += qf * _LANDAU * c ** (-1.0 / 3.0) * 3.0 / cfg.smax ** (1.0 / 3.0)
    q_total = be.value / al.value
    tail = (q_total - float(s_q)) / order
    bracket = q_total * (be.tail_bound / be.value + al.tail_bound / al.value)
    if order == 1:
        qd_total = ga.value / (al.value * math.pi)
        tail -= math.pi * sy * (qd_total - float(s_qd))
        bracket += math.pi * sy * qd_total * 2e-6
    value = al.value * sy * (total + tail)
    tail_bound = al.value * sy * (s_tail + bracket / order)
    return value, tail_bound


# ---------------------------------------------------------------------------
# Oscillatory asymptotic profile
# ---------------------------------------------------------------------------

def universal_asymptotic(T: float, cfg: DensityConfig) -> float:
    """The weight-independent oscillation profile in the T = sqrt(y)
    coordinate:

        (-1)^(k/2-1) (alpha / (pi sqrt(2))) sum_{d<=dmax} Q(d) sqrt(d)
            sum_{s<=smax} cos(4 pi s T / d - 3 pi/4) / s^(3/2)

    so that M_k(T^2) = sqrt(T) * universal_asymptotic(T) + O(1); the
    amplitude comes from carrying the full sqrt(2/(pi z)) envelope of the
    large-argument Bessel expansion through z = 4 pi s T / d.  The k
    dependence is the global sign alone (the standard large-argument phase
    of J_{k-1} evaluates to (-1)^(k/2-1) cos(z - 3 pi/4) for even k).
    """
    if T <= 0:
        raise ValueError("T must be positive")
    al = euler_constant("alpha", cfg.pmax).value
    s = np.arange(1, cfg.smax + 1, dtype=np.float64)
    sw = s ** -1.5
    total = 0.0
    for d in range(1, cfg.dmax + 1):
        q = _q_exact(d)
        if q == 0:
            continue
        phases = 4.0 * math.pi * T / d * s - 0.75 * math.pi
        total += float(q) * math.sqrt(d) * float(np.dot(np.cos(phases), sw))
    return _sign(cfg.k) * al / (math.pi * math.sqrt(2.0)) * total


# ---------------------------------------------------------------------------
# Dyadic and smoothed averages
# ---------------------------------------------------------------------------

def _kink_breakpoints(y: float, lo: float, hi: float) -> tuple[float, ...]:
    """Integration breakpoints u in (lo, hi) where M_k(y/u) has a kink,
    i.e. u = 4y/r^2 for positive integers r."""
    out = []
    r = 1
    while 4.0 * y / (r * r) > lo:
        u = 4.0 * y / (r * r)
        if u < hi:
            out.append(u)
        r += 1
    return tuple(out)


def dyadic_density(k: int, c: float, y: float, cfg: DensityConfig) -> float:
    """The dyadic average 2/(c^2 - 1) * int_1^c u M_k(y/u) du by adaptive
    quadrature with forced breakpoints at every kink of M_k."""
    if c <= 1:
        raise ValueError("c must exceed 1")
    if y <= 0:
        raise ValueError("y must be positive")
    kcfg = replace(cfg, k=k)

    def integrand(u: np.ndarray) -> np.ndarray:
        return np.array([ui * murmuration_density(kcfg, y / ui) for ui in u])

    val, _ = adaptive_quadrature(integrand, 1.0, c, cfg.quad_tol,
                                 _kink_breakpoints(y, 1.0, c))
    return 2.0 / (c * c - 1.0) * val


def dyadic_closed_form_constants(pmax: int = 10 ** 6
                                 ) -> tuple[float, float, float]:
    """(a, b, c) of the k=2, c=2 dyadic closed form, assembled from the
    Euler-product constants: a = (4/9)(2^(3/2) - 1) beta, b = (2/3) gamma,
    c = (2/3) alpha."""
    al = euler_constant("alpha", pmax).value
    be = euler_constant("beta", pmax).value
    ga = euler_constant("gamma", pmax).value
    return ((4.0 / 9.0) * (2.0 ** 1.5 - 1.0) * be,
            (2.0 / 3.0) * ga,
            (2.0 / 3.0) * al)


def dyadic_closed_form_k2(y: float, pmax: int = 10 ** 6) -> float:
    """Closed form of the k=2, c=2 dyadic average on [0, 1]:

        a sqrt(y) - b y + c * A(y),

    where A(y) = int_1^min(2, 4y) sqrt(u (4y - u)) du (empty below 1/4),
    evaluated from the antiderivative
    ((u - 2y)/2) sqrt(u(4y - u)) + 2 y^2 arcsin((u - 2y)/(2y))."""
    if not 0.0 <= y <= 1.0:
        raise ValueError("y must lie in [0, 1]")
    a, b, c = dyadic_closed_form_constants(pmax)
    value = a * math.sqrt(y) - b * y
    if y <= 0.25:
        return value

    def antider(u: float) -> float:
        s = max(u * (4.0 * y - u), 0.0)
        return (0.5 * (u - 2.0 * y) * math.sqrt(s)
                + 2.0 * y * y * math.asin(min(1.0, max(-1.0, (u - 2.0 * y)
                                                       / (2.0 * y)))))

    hi = min(2.0, 4.0 * y)
    return value + c * (antider(hi) - antider(1.0))


def smoothed_average(k: int, phi, y: float, cfg: DensityConfig,
                     support: tuple[float, float]) -> float:
    """The phi-weighted average
    (int M_k(y/u) phi(u) u du) / (int phi(u) u du) over the given support.

    phi must be a nonnegative callable vanishing outside support (a sharp
    window 1_[1,c] is exactly dyadic_density(k, c, y, cfg))."""
    lo, hi = support
    if not 0 < lo < hi:
        raise ValueError("support must satisfy 0 < lo < hi")
    kcfg = replace(cfg, k=k)
    bps = _kink_breakpoints(y, lo, hi)

    def num(u: np.ndarray) -> np.ndarray:
        return np.array([ui * phi(ui) * murmuration_density(kcfg, y / ui)
                         for ui in u])

    def den(u: np.ndarray) -> np.ndarray:
        return np.array([ui * phi(ui) for ui in u])

    nval, _ = adaptive_quadrature(num, lo, hi, cfg.quad_tol, bps)
    dval, _ = adaptive_quadrature(den, lo, hi, cfg.quad_tol)
    if dval == 0.0:
        raise ZeroDivisionError("weight integrates to zero")
    return nval / dval


# ---------------------------------------------------------------------------
# Bessel antiderivative recursion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BesselAntiderivative:
    """An antiderivative of J_K(x)/x^4 expressed as sum_t c_t J_t(x)/x^4."""

    K: int
    coefficients: dict[int, float]

    def __call__(self, x: float) -> float:
        return sum(c * bessel_J(t, x) for t, c in self.coefficients.items()
                   ) / x ** 4


def _lower_power(coeffs: dict[int, Fraction]) -> dict[int, Fraction]:
    """Rewrite sum c_t J_t / x^n as an equal sum over J_t / x^(n-1) via
    J_t(x)/x = (J_{t-1}(x) + J_{t+1}(x)) / (2t)."""
    out: dict[int, Fraction] = {}
    for t, c in coeffs.items():
        half = c / (2 * t)
        out[t - 1] = out.get(t - 1, Fraction(0)) + half
        out[t + 1] = out.get(t + 1, Fraction(0)) + half
    return out


@lru_cache(maxsize=None)
def _antider_coeffs(m: int, n: int) -> tuple[tuple[int, Fraction], ...]:
    """Coefficients c_t with int J_m(x)/x^n dx = sum c_t J_t(x)/x^4,
    for m - n odd and positive.  Base: int J_m/x^(m-1) = -J_{m-1}/x^(m-1);
    step: int J_{m}/x^n = 2(m-1) int J_{m-1}/x^(n+1) - int J_{m-2}/x^n."""
    if (m - n) % 2 == 0 or m <= n:
        raise ValueError("need m > n with m - n odd")
    if m == n + 1:
        coeffs = {m - 1: Fraction(-1)}
        for _ in range(n - 4):
            coeffs = _lower_power(coeffs)
        return tuple(sorted(coeffs.items()))
    a = dict(_antider_coeffs(m - 1, n + 1))
    b = dict(_antider_coeffs(m - 2, n))
    out: dict[int, Fraction] = {}
    for t in set(a) | set(b):
        out[t] = 2 * (m - 1) * a.get(t, Fraction(0)) - b.get(t, Fraction(0))
    return tuple(sorted(out.items()))


def bessel_antiderivative(K: int) -> BesselAntiderivative:
    """The antiderivative of J_K(x)/x^4 as a finite combination
    sum_{t>=4} c_t J_t(x)/x^4, for odd K >= 5.

    The exact coefficients satisfy sum_t c_t / t = -1/4, the value of the
    full-line integral of the combination divided by x."""
    if K < 5:
        raise ValueError("K must be at least 5")
    if (4 + K) % 2 == 0:
        raise ValueError("K must be odd")
    coeffs = _antider_coeffs(K, 4)
    return BesselAntiderivative(K=K,
                                coefficients={t: float(c) for t, c in coeffs})
