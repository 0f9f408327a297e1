"""Finite tridiagonal truncations and density estimates built from them."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._backend import kernels
from .deformation import DeformationThree, deform_coeffs
from .recursion import CoefficientSequence, eval_polynomials
from .resolvent import DensityGrid, PoleError, _upper, check_increasing, terminator

CONT_TERMINATOR = "terminator"
CONT_NONE = "none"


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=np.float64)
        e = np.asarray(self.offdiag, dtype=np.float64)
        if d.ndim != 1 or len(d) < 1 or len(e) != len(d) - 1:
            raise ValueError("need N diagonal and N-1 off-diagonal entries")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dim(self):
        return len(self.diag)

    def to_dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def leading(self, k):
        """Leading k x k principal submatrix."""
        return TridiagonalMatrix(self.diag[:k], self.offdiag[:k - 1])

    def as_sequence(self, a_inf=0.0, b_inf=0.5):
        return CoefficientSequence.tabulated(self.diag, self.offdiag, a_inf, b_inf)


def build_matrix(seq: CoefficientSequence, dim: int, d=None) -> TridiagonalMatrix:
    """Leading dim x dim block of the (deformed) Jacobi matrix."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if isinstance(d, DeformationThree) and dim < 2:
        raise ValueError("the three-parameter deformation needs dim >= 2")
    a, b = deform_coeffs(seq, d).arrays(dim)
    return TridiagonalMatrix(a, b[:dim - 1])


def eigenvalues(m: TridiagonalMatrix) -> np.ndarray:
    """All eigenvalues, ascending, by Sturm-sequence bisection."""
    if m.dim == 1:
        return m.diag.copy()
    return kernels.bisect_eigenvalues(m.diag, m.offdiag)


def quadrature_weights(m: TridiagonalMatrix, nodes=None) -> np.ndarray:
    """Christoffel numbers 1 / sum_j p_j(lambda_k)^2 at the eigenvalues.

    These equal the squared first components of the normalised eigenvectors.
    """
    if nodes is None:
        nodes = eigenvalues(m)
    if m.dim == 1:
        return np.ones(1)
    seq = m.as_sequence()
    p, _ = eval_polynomials(seq, np.asarray(nodes), m.dim - 1)
    return 1.0 / np.sum(p * p, axis=1)


def default_epsilon(seq: CoefficientSequence, dim: int, x=None):
    """Level-spacing estimate for the dim x dim truncation.

    Without ``x`` this is the spectral width over dim. At points ``x`` it is
    the local spacing pi sqrt(4 b_inf^2 - (x - a_inf)^2) / dim of the
    arcsine-distributed eigenvalues, floored at width / dim near the edges.
    """
    lo, hi = seq.support
    floor = (hi - lo) / dim
    if x is None:
        return floor
    x = np.asarray(x, dtype=np.float64)
    half = 2 * seq.b_inf
    local = math.pi * np.sqrt(np.clip(half**2 - (x - seq.a_inf) ** 2, 0, None)) / dim
    return np.maximum(local, floor)


def dos_finite_ratio_values(seq, dim, d, xs, epsilon=None, continuation=CONT_TERMINATOR):
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if continuation not in (CONT_TERMINATOR, CONT_NONE):
        raise ValueError(f"unknown continuation {continuation!r}")
    deformed = deform_coeffs(seq, d)
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if epsilon is None:
        epsilon = 0.0 if continuation == CONT_TERMINATOR else default_epsilon(deformed, dim, xs)
    elif epsilon < 0 or (epsilon == 0 and continuation == CONT_NONE):
        raise ValueError("the plain ratio needs epsilon > 0")
    z = _upper(xs + 1j * epsilon)
    a, b = deformed.arrays(dim)
    if continuation == CONT_TERMINATOR:
        coupling = b[dim - 1] * terminator(z, deformed.a_inf, deformed.b_inf)
    else:
        coupling = np.zeros_like(z)
    g, status = kernels.ratio(a, b, z, dim, coupling)
    if np.any(status):
        i = int(np.argmax(status))
        raise PoleError(f"finite ratio denominator vanishes at z={z[i]}", level=dim, z=z[i])
    values = g.imag / math.pi
    return np.where(np.abs(values) < 1e-12, 0.0, values)


def dos_finite_ratio(seq: CoefficientSequence, dim: int, d, x: float,
                     epsilon: float | None = None, continuation: str = CONT_TERMINATOR) -> float:
    """Density from the dim-th polynomial ratio of the (deformed) sequence.

    With ``continuation="none"`` this is (1/pi) Im[-q_dim(z)/p_dim(z)] at
    z = x + i epsilon, the resolvent of the dim x dim truncation, and epsilon
    defaults to the local level spacing (see ``default_epsilon``). With the default ``"terminator"`` the
    ratio is continued past row dim by the constant tail,

        -(q_dim - c q_{dim-1}) / (p_dim - c p_{dim-1}),  c = b_{dim-1} R_tail(z),

    which reaches the real axis with epsilon = 0 and still only uses the
    leading dim x dim block plus (a_inf, b_inf).
    """
    return float(dos_finite_ratio_values(seq, dim, d, [x], epsilon, continuation)[0])


def dos_eigen_histogram(seq: CoefficientSequence, dim: int, d, xs, window=None) -> DensityGrid:
    """Density from the weighted eigenvalue distribution of the truncation.

    Each eigenvalue carries its Gauss weight. The cumulative weight, sampled
    half way between consecutive eigenvalues inside ``window``, is interpolated
    by a monotone cubic and differentiated. Eigenvalues outside the window
    (bound states) are dropped; ``window`` defaults to the tail band.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    xs = np.asarray(xs, dtype=np.float64).reshape(-1)
    check_increasing(xs)
    deformed = deform_coeffs(seq, d)
    lo, hi = window if window is not None else deformed.support
    m = build_matrix(seq, dim, d)
    lam = eigenvalues(m)
    w = quadrature_weights(m, lam)
    inside = (lam >= lo) & (lam <= hi)
    lam, w = lam[inside], w[inside]
    if len(lam) < 4:
        raise ValueError(f"only {len(lam)} eigenvalues inside [{lo}, {hi}]; need at least 4")
    mids = 0.5 * (lam[1:] + lam[:-1])
    cdf = np.cumsum(w)[:-1]
    knots = np.concatenate(([lo], mids, [hi]))
    cdf = np.concatenate(([0.0], cdf, [w.sum()]))
    keep = np.concatenate(([True], np.diff(knots) > 0))
    deriv = PchipInterpolator(knots[keep], cdf[keep]).derivative()
    values = np.zeros_like(xs)
    mask = (xs >= lo) & (xs <= hi)
    values[mask] = np.clip(deriv(xs[mask]), 0, None)
    return DensityGrid(xs, values, method="eigen-histogram",
                       meta={"dim": dim, "window": [lo, hi], "eigenvalues": lam.tolist()})


def reference_deformation():
    """Three-parameter values used for the reference comparison."""
    return DeformationThree(mu_plus=0.2, mu_minus=0.0, mu_zero=-0.1)

