"""Named suites of numerical self-checks, run by ``recdef validate``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import chebyshev as cheb
from .deformation import (
    DeformationOne,
    DeformationThree,
    deform_coeffs,
    deformed_density_one_values,
    deformed_density_three_values,
    deformed_g00_one,
    deformed_g00_three,
    deformed_polys,
)
from .recursion import eval_polynomials
from .resolvent import ResolventOptions, continued_fraction_g00, density_values, g00_array

SUITES = ("wronskian", "orthogonality", "reductions", "chebyshev-oracle")


@dataclass
class Check:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self):
        return bool(np.isfinite(self.error) and self.error <= self.tolerance)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<44s} error={self.error:.3e}  tol={self.tolerance:.1e}"


def band_quadrature(lo, hi, n=400):
    """Nodes and weights for integrals over [lo, hi] with x = c + h cos(theta).

    Gauss-Legendre in theta; square-root edge behaviour becomes smooth.
    """
    t, w = np.polynomial.legendre.leggauss(n)
    theta = 0.5 * np.pi * (t + 1)
    c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
    x = c + h * np.cos(theta)
    return x[::-1], (0.5 * np.pi * w * h * np.sin(theta))[::-1]


def gram_matrix(seq, d, n_max, opts=None, n_quad=400):
    """Integrals of rho^ p^_n p^_m over the band for n, m <= n_max."""
    lo, hi = deform_coeffs(seq, d).support
    x, w = band_quadrature(lo, hi, n_quad)
    if d is None:
        rho = density_values(seq, x, opts)
    elif isinstance(d, DeformationOne):
        rho = deformed_density_one_values(seq, d, x, opts)
    else:
        rho = deformed_density_three_values(seq, d, x, opts)
    p = np.array([deformed_polys(seq, d, xi, n_max)[0] for xi in x])
    return (p * (w * rho)[:, None]).T @ p


def wronskian_suite(seq, n_max=50, n_points=100, seed=0):
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-3, 3, n_points)
    a, b = seq.arrays(n_max + 1)
    p, q = eval_polynomials(seq, xs, n_max)
    worst = 0.0
    for n in range(1, n_max + 1):
        t1 = p[:, n - 1] * q[:, n]
        t2 = p[:, n] * q[:, n - 1]
        w = b[n - 1] * (t1 - t2)
        scale = np.maximum(1.0, b[n - 1] * (np.abs(t1) + np.abs(t2)))
        worst = max(worst, float(np.max(np.abs(w - 1) / scale)))
    return [Check(f"wronskian n<={n_max}, {n_points} points", worst, 1e-9)]


def orthogonality_suite(seq):
    checks = []
    g = gram_matrix(seq, None, 8)
    checks.append(Check("orthogonality rho p_n p_m, n,m<=8", float(np.max(np.abs(g - np.eye(9)))), 1e-6))
    if seq == cheb.cheb_coeffs():
        d = DeformationThree(0.2, 0.0, -0.1)
        g = gram_matrix(seq, d, 5)
        off = g - np.diag(np.diag(g))
        checks.append(Check("deformed orthogonality off-diagonal, n,m<=5", float(np.max(np.abs(off))), 1e-4))
        checks.append(Check("deformed normalisation c_n vs 1, n<=5",
                            float(np.max(np.abs(np.diag(g) - 1))), 1e-4))
    return checks


def _sample_z(n=20, seed=1):
    rng = np.random.default_rng(seed)
    return rng.uniform(-2, 2, n) + 1j * rng.uniform(0.05, 2, n)


def reductions_suite(seq):
    opts = ResolventOptions()
    zs = _sample_z()
    g = g00_array(seq, zs, opts)
    zero3 = DeformationThree(0.0, 0.0, 0.0)
    checks = []
    err = max(abs(deformed_g00_three(seq, zero3, z, opts) - gz) / abs(gz) for z, gz in zip(zs, g))
    checks.append(Check("three-parameter -> undeformed resolvent", err, 1e-12))
    mu = 0.4
    one = DeformationOne(mu)
    three = DeformationThree(mu, 0.0, 0.0)
    err = max(abs(deformed_g00_three(seq, three, z, opts) - deformed_g00_one(gz, one))
              / abs(deformed_g00_one(gz, one)) for z, gz in zip(zs, g))
    checks.append(Check("three-parameter -> one-parameter resolvent", err, 1e-12))
    err = abs(deformed_g00_one(g, DeformationOne(0.0)) - g).max()
    checks.append(Check("one-parameter mu=0 -> undeformed resolvent", float(err), 1e-15))
    x = 0.3
    p, q = eval_polynomials(seq, x, 15)
    for d in (DeformationOne(0.0), zero3):
        ph, qh = deformed_polys(seq, d, x, 15)
        checks.append(Check(f"{type(d).__name__} zero -> p_n, q_n",
                            float(max(np.abs(ph - p).max(), np.abs(qh - q).max())), 1e-12))
    lo, hi = seq.support
    xs = np.linspace(lo, hi, 52)[1:-1]
    rho = density_values(seq, xs, opts)
    err = np.abs(deformed_density_three_values(seq, zero3, xs, opts) - rho).max()
    checks.append(Check("three-parameter zero -> density", float(err), 1e-12))
    err = np.abs(deformed_density_one_values(seq, one, xs, opts)
                 - deformed_density_three_values(seq, three, xs, opts)).max()
    checks.append(Check("one-parameter density = reduced three-parameter", float(err), 1e-10))
    return checks


def chebyshev_oracle_suite():
    seq = cheb.cheb_coeffs()
    rng = np.random.default_rng(2)
    xs = np.sort(rng.uniform(-1, 1, 100))
    p, _ = eval_polynomials(seq, xs, 30)
    theta = np.arccos(xs)
    n = np.arange(31)
    trig = np.sin((n[None, :] + 1) * theta[:, None]) / np.sin(theta)[:, None]
    checks = [Check("p_n vs sin((n+1)t)/sin t, n<=30", float(np.abs(p - trig).max()), 1e-10)]
    err = max(abs(cheb.cheb_p_hypergeometric(k, x) - cheb.cheb_p(k, x)) / max(1.0, abs(cheb.cheb_p(k, x)))
              for k in range(21) for x in xs[::10])
    checks.append(Check("hypergeometric form vs recurrence, n<=20", err, 1e-10))
    zs = _sample_z(50, seed=3)
    err = max(abs(continued_fraction_g00(seq, z) - cheb.cheb_g00(z)) for z in zs)
    checks.append(Check("continued fraction vs closed-form g00", err, 1e-10))
    inner = np.linspace(-0.95, 0.95, 50)
    err = float(np.abs(density_values(seq, inner) - cheb.cheb_density(inner)).max())
    checks.append(Check("density vs (2/pi) sqrt(1-x^2)", err, 1e-8))
    for mu in (0.1, 0.3, 0.5):
        err = float(np.abs(deformed_density_one_values(seq, DeformationOne(mu), inner)
                           - cheb.cheb_deformed_density(DeformationOne(mu), inner)).max())
        checks.append(Check(f"one-parameter density vs closed form, mu={mu}", err, 1e-10))
    return checks


def run_suite(name, seq=None):
    if seq is None:
        seq = cheb.cheb_coeffs()
    if name == "wronskian":
        return wronskian_suite(seq)
    if name == "orthogonality":
        return orthogonality_suite(seq)
    if name == "reductions":
        return reductions_suite(seq)
    if name == "chebyshev-oracle":
        return chebyshev_oracle_suite()
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
