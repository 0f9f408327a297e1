"""Linear deformations of the leading block of the recursion.

Two kinds are supported:

* one parameter, ``a_0 -> a_0 + mu``;
* three parameters on the leading 2x2 block,
  ``a_0 -> a_0 + mu_plus``, ``a_1 -> a_1 + mu_minus``, ``b_0 -> b_0 + mu_zero``.

For each we give the coefficient map, the new first/second kind polynomials
written through the undeformed ones, the deformed resolvent as a function of
the undeformed one, and the deformed density.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .recursion import CoefficientSequence, abbreviated_values, eval_polynomials
from .resolvent import (
    PoleError,
    ResolventOptions,
    _finish_density,
    _require_density_opts,
    _upper,
    density_values,
    g00_array,
)

POLE_FLOOR = 1e-12


@dataclass(frozen=True)
class DeformationOne:
    mu: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")

    @property
    def is_zero(self):
        return self.mu == 0


@dataclass(frozen=True)
class DeformationThree:
    mu_plus: float
    mu_minus: float
    mu_zero: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.mu_plus, self.mu_minus, self.mu_zero)):
            raise ValueError("deformation parameters must be finite")

    @property
    def is_zero(self):
        return self.mu_plus == 0 and self.mu_minus == 0 and self.mu_zero == 0


# --- one parameter ---------------------------------------------------------

def deform_one_coeffs(seq: CoefficientSequence, d: DeformationOne) -> CoefficientSequence:
    if d.is_zero:
        return seq
    return seq.with_leading(a={0: seq.a(0) + d.mu})


def deformed_polys_one(seq: CoefficientSequence, d: DeformationOne, x, n_max: int):
    """p^_n = p_n - mu q_n and q^_n = q_n."""
    p, q = eval_polynomials(seq, x, n_max)
    return p - d.mu * q, q.copy()


def deformed_g00_one(g, d: DeformationOne):
    """g / (1 + mu g); raises PoleError where the denominator vanishes."""
    den = 1 + d.mu * np.asarray(g)
    if np.any(den == 0):
        raise PoleError("1 + mu g00 = 0: the deformed resolvent has a pole here")
    out = np.asarray(g) / den
    return complex(out) if np.ndim(out) == 0 else out


def deformed_density_one_values(seq, d: DeformationOne, xs, opts=None):
    opts = opts or ResolventOptions()
    _require_density_opts(opts)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    g = g00_array(seq, xs + 1j * opts.epsilon, opts)
    rho = g.imag / math.pi
    den = np.abs(1 + d.mu * g)
    if np.any(den < POLE_FLOOR):
        i = int(np.argmin(den))
        raise PoleError(f"deformed resolvent pole on the support at x={xs[i]}", z=xs[i])
    return _finish_density(rho / den**2, xs)


def deformed_density_one(seq: CoefficientSequence, d: DeformationOne, x: float,
                         opts: ResolventOptions | None = None) -> float:
    """rho(x) / |1 + mu g00(x + i0)|^2."""
    return float(deformed_density_one_values(seq, d, [x], opts)[0])


def _real_g00(seq, xs, opts):
    g = g00_array(seq, np.asarray(xs, dtype=np.float64), opts)
    return g.real


def find_bound_states_one(seq: CoefficientSequence, d: DeformationOne, search,
                          opts: ResolventOptions | None = None, samples: int = 2001,
                          ftol: float = 1e-10) -> np.ndarray:
    """Real roots of 1 + mu g00(x) = 0 inside ``search = (lo, hi)``.

    The interval must lie outside the continuous band of the sequence. Sign
    changes on a uniform scan are refined by bisection.
    """
    lo, hi = map(float, search)
    if not lo < hi:
        raise ValueError("search interval must have lo < hi")
    band_lo, band_hi = seq.support
    if lo < band_hi and hi > band_lo:
        raise ValueError(f"search interval [{lo}, {hi}] overlaps the band [{band_lo}, {band_hi}]")
    if d.is_zero:
        return np.zeros(0)
    opts = opts or ResolventOptions()

    def f(x):
        return 1 + d.mu * _real_g00(seq, np.atleast_1d(x), opts)

    xs = np.linspace(lo, hi, samples)
    fx = f(xs)
    roots = []
    for i in range(samples - 1):
        f0, f1 = fx[i], fx[i + 1]
        if f0 == 0:
            roots.append(xs[i])
            continue
        if f0 * f1 > 0:
            continue
        a, b = xs[i], xs[i + 1]
        fa = f0
        # bisect to machine resolution
        for _ in range(200):
            m = 0.5 * (a + b)
            fm = f(m)[0]
            if fm == 0 or m in (a, b):
                break
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        root = 0.5 * (a + b)
        if abs(f(root)[0]) > ftol:
            # sign change across a pole of g00, not a root
            continue
        roots.append(root)
    if fx[-1] == 0:
        roots.append(xs[-1])
    return np.array(roots)


def bound_state_weight_one(seq: CoefficientSequence, d: DeformationOne, x0: float,
                           opts: ResolventOptions | None = None, h: float = 1e-6) -> float:
    """Weight of the point mass at a real pole x0 of the deformed resolvent.

    Near the pole ``g^ ~ w / (x0 - z)``, which gives ``w = 1 / (mu^2 g00'(x0))``.
    The derivative is a central difference with step ``h``.
    """
    opts = opts or ResolventOptions()
    gp, gm = _real_g00(seq, [x0 + h, x0 - h], opts)
    return 1.0 / (d.mu**2 * (gp - gm) / (2 * h))


# --- three parameters ------------------------------------------------------

def _check_three(seq, d):
    if seq.b(0) + d.mu_zero <= 0:
        raise ValueError(f"b_0 + mu_zero = {seq.b(0) + d.mu_zero} must be positive")


def deform_three_coeffs(seq: CoefficientSequence, d: DeformationThree) -> CoefficientSequence:
    _check_three(seq, d)
    if d.is_zero:
        return seq
    return seq.with_leading(a={0: seq.a(0) + d.mu_plus, 1: seq.a(1) + d.mu_minus},
                            b={0: seq.b(0) + d.mu_zero})


def deformed_polys_three(seq: CoefficientSequence, d: DeformationThree, x, n_max: int):
    """Deformed polynomials from p_n, q_n and the abbreviated p~_{n-2}.

        p^_n = p_n - alpha (mu_+ + (mu_0/b_0)(x - a_0)) q_n + C p~_{n-2}
        q^_n = alpha q_n - mu_- / (b_1 (b_0 + mu_0)) p~_{n-2}

    with alpha = b_0 / (b_0 + mu_0) and
    C = [mu_-(mu_+ + a_0 - x) - mu_0 (b_0 + mu_0)] / (b_1 (b_0 + mu_0)).
    C is kept in this expanded form so mu_- = 0 needs no special case.
    """
    _check_three(seq, d)
    a0, b0, b1 = seq.a(0), seq.b(0), seq.b(1)
    bh = b0 + d.mu_zero
    p, q = eval_polynomials(seq, x, n_max)
    pt = np.zeros(n_max + 1, dtype=p.dtype)
    if n_max >= 2:
        pt[2:] = abbreviated_values(seq, x, n_max - 2)
    alpha = b0 / bh
    c = (d.mu_minus * (d.mu_plus + a0 - x) - d.mu_zero * bh) / (b1 * bh)
    p_hat = p - alpha * (d.mu_plus + (d.mu_zero / b0) * (x - a0)) * q + c * pt
    q_hat = alpha * q - d.mu_minus / (b1 * bh) * pt
    return p_hat, q_hat


def _master(seq, d, z, g):
    """Deformed resolvent from the undeformed one; PoleError names the level."""
    a0, b0 = seq.a(0), seq.b(0)
    bh = b0 + d.mu_zero

    def guard(den, level):
        if np.any(den == 0):
            i = int(np.argmax(den == 0))
            raise PoleError(f"zero denominator at nesting level {level} for z={z[i]}",
                            level=level, z=z[i])
        return den

    inv_g = 1 / guard(g, 1)
    inner = b0**2 / guard(z - a0 + inv_g, 2)
    middle = bh**2 / guard(d.mu_minus - inner, 3)
    return -1 / guard(z - a0 - d.mu_plus + middle, 4)


def deformed_g00_three(seq: CoefficientSequence, d: DeformationThree, z,
                       opts: ResolventOptions | None = None) -> complex:
    """g^(z) = -{z - a_0 - mu_+ + (b_0+mu_0)^2 [mu_- - b_0^2 (z - a_0 + 1/g(z))^-1]^-1}^-1."""
    _check_three(seq, d)
    zz = _upper(z)
    g = g00_array(seq, zz, opts)
    return complex(_master(seq, d, zz, g)[0])


def deformed_density_three_values(seq, d: DeformationThree, xs, opts=None, diagnostics=False):
    """Resolvent-path density at ``xs``; optionally the closed-form cross-checks.

    The closed form is

        rho^ = |b_0 (b_0+mu_0) / (1 + (x-a_0) g)|^2
               / |(b_0+mu_0)^2 + (x-a_0-mu_+)(mu_- - b_0^2 g / (1 + (x-a_0) g))|^2 * rho

    ``naive`` in the diagnostics combines the same ingredients without the
    moduli and with the prefactor inverted and unsquared; it does not reduce
    to rho at zero deformation and is kept only as a contrast.
    """
    _check_three(seq, d)
    opts = opts or ResolventOptions()
    _require_density_opts(opts)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    z = xs + 1j * opts.epsilon
    g = g00_array(seq, z, opts)
    g_hat = _master(seq, d, _upper(z), g)
    values = _finish_density(g_hat.imag / math.pi, xs)
    if not diagnostics:
        return values
    a0, b0 = seq.a(0), seq.b(0)
    bh = b0 + d.mu_zero
    rho = g.imag / math.pi
    lead = 1 + (xs - a0) * g
    with np.errstate(divide="ignore", invalid="ignore"):
        brace = bh**2 + (xs - a0 - d.mu_plus) * (d.mu_minus - b0**2 * g / lead)
        closed = np.abs(b0 * bh / lead) ** 2 / np.abs(brace) ** 2 * rho
        naive = lead / (b0 * bh) * brace ** -2.0 * rho
    closed = np.where(lead == 0, np.nan, closed)
    info = {
        "resolvent": values,
        "closed_form": closed,
        "closed_form_residual": np.abs(closed - values),
        "naive": naive,
        "naive_residual": np.abs(naive - values),
    }
    return values, info


def deformed_density_three(seq: CoefficientSequence, d: DeformationThree, x: float,
                           opts: ResolventOptions | None = None, diagnostics: bool = False):
    """(1/pi) Im g^(x + i0); with ``diagnostics`` also the closed-form values."""
    out = deformed_density_three_values(seq, d, [x], opts, diagnostics)
    if not diagnostics:
        return float(out[0])
    values, info = out
    return float(values[0]), {k: v[0] for k, v in info.items()}


# --- dispatch --------------------------------------------------------------

def deform_coeffs(seq, d):
    if d is None:
        return seq
    if isinstance(d, DeformationOne):
        return deform_one_coeffs(seq, d)
    return deform_three_coeffs(seq, d)


def deformed_polys(seq, d, x, n_max):
    if d is None:
        return eval_polynomials(seq, x, n_max)
    if isinstance(d, DeformationOne):
        return deformed_polys_one(seq, d, x, n_max)
    return deformed_polys_three(seq, d, x, n_max)


def deformed_density_values(seq, d, xs, opts=None):
    """Density at ``xs`` for no deformation, one or three parameters."""
    if d is None:
        return density_values(seq, xs, opts)
    if isinstance(d, DeformationOne):
        return deformed_density_one_values(seq, d, xs, opts)
    return deformed_density_three_values(seq, d, xs, opts)
