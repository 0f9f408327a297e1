"""The (0,0) resolvent element and the spectral density it encodes.

Sign convention: ``g00(z) = [(H - z)^{-1}]_{00}``, so ``g00 ~ -1/z`` for large
``|z|`` and ``Im g00 > 0`` in the upper half plane. The continued fraction is
carried internally in the opposite sign, ``R_n = [(z - H_n)^{-1}]_{00}`` for
the matrix with the first ``n`` rows and columns deleted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .recursion import CoefficientSequence

TAIL_ZERO = "zero"
TAIL_TERMINATOR = "terminator"
NEGATIVE_CLAMP = 1e-12


class PoleError(ArithmeticError):
    """A denominator vanished; ``level`` says where."""

    def __init__(self, message, level=None, z=None):
        super().__init__(message)
        self.level = level
        self.z = z


@dataclass(frozen=True)
class ResolventOptions:
    """How to truncate the continued fraction and approach the real axis.

    With the square-root terminator the boundary value at ``x + i0`` comes out
    of the branch rule directly, so ``epsilon`` can stay 0. With the zero tail
    a positive ``epsilon`` is needed for densities.
    """

    depth: int = 256
    tail: str = TAIL_TERMINATOR
    epsilon: float = 0.0

    def __post_init__(self):
        if int(self.depth) != self.depth or self.depth < 1:
            raise ValueError("depth must be an integer >= 1")
        if self.tail not in (TAIL_ZERO, TAIL_TERMINATOR):
            raise ValueError(f"tail must be {TAIL_ZERO!r} or {TAIL_TERMINATOR!r}")
        if not math.isfinite(self.epsilon) or self.epsilon < 0:
            raise ValueError("epsilon must be finite and >= 0")

    def as_dict(self):
        return {"depth": self.depth, "tail": self.tail, "epsilon": self.epsilon}


@dataclass
class DensityGrid:
    xs: np.ndarray
    values: np.ndarray
    method: str
    options: ResolventOptions | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        check_increasing(self.xs)
        if self.xs.shape != self.values.shape:
            raise ValueError("xs and values differ in length")

    def __len__(self):
        return len(self.xs)


def check_increasing(xs):
    xs = np.asarray(xs)
    if xs.ndim != 1:
        raise ValueError("sample points must be one-dimensional")
    if len(xs) > 1 and not np.all(np.diff(xs) > 0):
        raise ValueError("sample points must be strictly increasing")


def _upper(z):
    """Complex array with -0.0 imaginary parts turned into +0.0 (upper rim)."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    return z.real + 1j * (z.imag + 0.0)


def terminator(z, a_inf: float, b_inf: float):
    """Resolvent ``R`` of the semi-infinite constant chain (a_inf, b_inf).

    Solves ``b^2 R^2 - (z - a) R + 1 = 0`` on the physical sheet. Writing the
    root as ``2 / ((z - a) + s)`` with ``s = sqrt(z-a-2b) sqrt(z-a+2b)`` puts
    the cut on the band, gives ``R ~ 1/z`` at infinity and ``Im R <= 0`` on
    the upper rim of the cut, and avoids cancellation for large ``|z|``.
    """
    w = _upper(z) - a_inf
    s = np.sqrt(w - 2 * b_inf) * np.sqrt(w + 2 * b_inf)
    return 2.0 / (w + s)


def _tail_values(seq, z, opts):
    if opts.tail == TAIL_ZERO:
        return np.zeros(len(z), dtype=np.complex128)
    return terminator(z, seq.a_inf, seq.b_inf)


def _effective_depth(seq, opts):
    # the terminator is exact only past the tabulated head
    if opts.tail == TAIL_TERMINATOR:
        return max(opts.depth, seq.head_length)
    return opts.depth


def g00_array(seq: CoefficientSequence, z, opts: ResolventOptions | None = None):
    """Continued-fraction resolvent at every point of ``z`` (array version)."""
    opts = opts or ResolventOptions()
    z = _upper(z)
    depth = _effective_depth(seq, opts)
    a, b = seq.arrays(depth)
    r, bad = kernels.continued_fraction(a, b, _tail_values(seq, z, opts), z)
    if np.any(bad >= 0):
        i = int(np.argmax(bad >= 0))
        raise PoleError(f"continued fraction has a zero denominator at level {bad[i]} "
                        f"for z={z[i]}", level=int(bad[i]), z=z[i])
    return -r


def continued_fraction_g00(seq: CoefficientSequence, z, opts: ResolventOptions | None = None) -> complex:
    """g00(z) from the continued fraction, evaluated from the tail upwards."""
    return complex(g00_array(seq, z, opts)[0])


def ratio_g00(seq: CoefficientSequence, z, n: int) -> complex:
    """Finite polynomial-ratio approximant ``-q_n(z)/p_n(z)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = _upper(z)
    a, b = seq.arrays(n)
    val, status = kernels.ratio(a, b, z, n, np.zeros_like(z))
    if status[0]:
        raise PoleError(f"p_{n} vanishes at z={z[0]}; move z off the real axis", level=n, z=z[0])
    return complex(val[0])


def _finish_density(values, xs):
    values = np.asarray(values, dtype=np.float64)
    if np.any(values < -NEGATIVE_CLAMP):
        i = int(np.argmin(values))
        raise ArithmeticError(f"negative density {values[i]:.3e} at x={xs[i]}: branch error")
    return np.where(values < 0, 0.0, values) + 0.0


def _require_density_opts(opts):
    if opts.tail == TAIL_ZERO and opts.epsilon <= 0:
        raise ValueError("the zero tail needs epsilon > 0 to reach the real axis")


def density_values(seq: CoefficientSequence, xs, opts: ResolventOptions | None = None):
    opts = opts or ResolventOptions()
    _require_density_opts(opts)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    g = g00_array(seq, xs + 1j * opts.epsilon, opts)
    return _finish_density(g.imag / math.pi, xs)


def density(seq: CoefficientSequence, x: float, opts: ResolventOptions | None = None) -> float:
    """rho(x) = Im g00(x + i eps) / pi."""
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    return float(density_values(seq, [x], opts)[0])


def density_grid(seq: CoefficientSequence, xs, opts: ResolventOptions | None = None) -> DensityGrid:
    opts = opts or ResolventOptions()
    xs = np.asarray(xs, dtype=np.float64).reshape(-1)
    check_increasing(xs)
    values = density_values(seq, xs, opts) if len(xs) else np.zeros(0)
    return DensityGrid(xs, values, method="continued-fraction", options=opts)
