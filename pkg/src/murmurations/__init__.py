"""Murmuration densities of holomorphic newforms: exact trace-formula
averages over square-free levels, their closed-form limiting densities,
and a certified finite verification of the density's sign changes.

Subpackage layout:

    arith         smallest-prime-factor sieve, Kronecker symbol, and the
                  elementary summatory functions (mu, phi, eta, mu^2-counts)
    classnumbers  exact Gauss/Hurwitz class numbers, batch tables, disk cache,
                  truncated L-series cross-check
    multfns       the multiplicative-function layer: remainder sets, theta_r,
                  phi_circ, nu, Q, the triple sum converging to B*nu(r)
    constants     Euler-product constants with certified truncation tails
    traceformula  exact traces of T_P composed with the Fricke involution,
                  interval and dyadic empirical averages
    density       the limiting density M_k(y): Chebyshev form, Bessel-series
                  form, asymptotic form, dyadic and smoothed averages
    signcheck     certified sign-change verification on a finite grid
    cli           command-line entry point (`murmur`)
"""

__version__ = "0.1.0"
