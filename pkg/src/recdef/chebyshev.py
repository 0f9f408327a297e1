"""Closed-form reference model: a_n = 0, b_n = 1/2.

The first-kind polynomials are the Chebyshev polynomials of the second kind
U_n, the weight is (2/pi) sqrt(1 - x^2) on [-1, 1] and the resolvent is
g00(z) = -2z + 2 sqrt(z^2 - 1).
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .deformation import DeformationOne, DeformationThree
from .recursion import CoefficientSequence, eval_polynomials


def cheb_coeffs() -> CoefficientSequence:
    return CoefficientSequence.constant(0.0, 0.5, name="chebyshev")


def cheb_p(n: int, x):
    """p_n(x) through d_{n+1} = 2x d_n - d_{n-1}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    p, _ = eval_polynomials(cheb_coeffs(), x, n)
    return p[n]


def cheb_q(n: int, x):
    """q_n(x) = 2 p_{n-1}(x), with p_{-1} = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0.0 * x
    return 2 * cheb_p(n - 1, x)


def cheb_p_hypergeometric(n: int, x: float) -> float:
    """(n+1) 2F1(-n, n+2; 3/2; (1-x)/2), summed term by term.

    The terminating series alternates with terms far larger than the result
    near x = -1, so it is summed in exact rational arithmetic.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    u = (1 - Fraction(x)) / 2
    term = Fraction(1)
    total = Fraction(1)
    for k in range(n):
        term *= Fraction((-n + k) * (n + 2 + k)) / (Fraction(3, 2) + k) / (k + 1) * u
        total += term
    return float((n + 1) * total)


def cheb_g00(z):
    """-2z + 2 sqrt(z-1) sqrt(z+1): the factored root keeps the cut on [-1, 1].

    A real argument inside the band is taken as the upper rim x + i0.
    """
    z = np.asarray(z, dtype=np.complex128)
    z = z.real + 1j * (z.imag + 0.0)
    out = -2 * z + 2 * np.sqrt(z - 1) * np.sqrt(z + 1)
    return complex(out) if out.ndim == 0 else out


def cheb_density(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.where(np.abs(x) <= 1, 2 / math.pi * np.sqrt(np.clip(1 - x * x, 0, None)), 0.0)
    return float(out) if out.ndim == 0 else out


def cheb_deformed_density(d, x):
    """Closed-form deformed weights.

    One parameter: rho / (1 + 4 mu (mu - x)). Three parameters:

        rho / {(1 + 2 mu_0)^2 + 4 (mu_+ - x) [x - 2 mu_- + (mu_+ - x)/(1 + 2 mu_0)^2]}

    The three-parameter expression is evaluated as written; it matches the
    resolvent for mu_- = 0 only (see tests).
    """
    x = np.asarray(x, dtype=np.float64)
    rho = cheb_density(x)
    if isinstance(d, DeformationOne):
        den = 1 + 4 * d.mu * (d.mu - x)
    elif isinstance(d, DeformationThree):
        s = 1 + 2 * d.mu_zero
        den = s**2 + 4 * (d.mu_plus - x) * (x - 2 * d.mu_minus + (d.mu_plus - x) / s**2)
    else:
        raise TypeError("expected DeformationOne or DeformationThree")
    if np.any(den == 0):
        raise ZeroDivisionError("closed-form denominator vanishes")
    out = rho / den
    return float(out) if np.ndim(out) == 0 else out


def cheb_deformed_density_three_exact(d: DeformationThree, x):
    """Three-parameter weight derived for any mu_-.

    Differs from the closed form above by the factor (1 + 4 mu_-^2 - 4 mu_- x)
    on its last term.
    """
    x = np.asarray(x, dtype=np.float64)
    s = 1 + 2 * d.mu_zero
    y = d.mu_plus - x
    den = (s**2 + 4 * y * (x - 2 * d.mu_minus)
           + 4 * y**2 * (1 + 4 * d.mu_minus**2 - 4 * d.mu_minus * x) / s**2)
    out = cheb_density(x) / den
    return float(out) if np.ndim(out) == 0 else out
