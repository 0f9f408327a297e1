"""Symmetric three-term recursion: coefficient sequences and polynomial values.

The recursion is

    x d_n = a_n d_n + b_{n-1} d_{n-1} + b_n d_{n+1}

with the first kind starting from p_0 = 1, p_1 = (x - a_0)/b_0 and the second
kind from q_0 = 0, q_1 = 1/b_0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._backend import kernels

NAMED_FAMILY = "named-family"
TABULATED = "tabulated-with-tail"


@dataclass(frozen=True)
class CoefficientSequence:
    """Recursion coefficients a_n, b_n given by a finite head and constant tail.

    Past the tabulated head every coefficient equals its tail value, so
    ``a(n) == a_inf`` and ``b(n) == b_inf`` for large ``n``. The two heads may
    have different lengths.
    """

    a_head: tuple[float, ...] = ()
    b_head: tuple[float, ...] = ()
    a_inf: float = 0.0
    b_inf: float = 0.5
    kind: str = TABULATED
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a_head", tuple(float(v) for v in self.a_head))
        object.__setattr__(self, "b_head", tuple(float(v) for v in self.b_head))
        object.__setattr__(self, "a_inf", float(self.a_inf))
        object.__setattr__(self, "b_inf", float(self.b_inf))
        if self.kind not in (NAMED_FAMILY, TABULATED):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        values = self.a_head + self.b_head + (self.a_inf, self.b_inf)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("recursion coefficients must be finite")
        if self.b_inf <= 0 or any(v <= 0 for v in self.b_head):
            raise ValueError("off-diagonal coefficients b_n must be strictly positive")

    @classmethod
    def constant(cls, a, b, name=None):
        return cls((), (), a, b, kind=NAMED_FAMILY, name=name or f"constant({a:g},{b:g})")

    @classmethod
    def tabulated(cls, a, b, a_inf, b_inf):
        return cls(tuple(a), tuple(b), a_inf, b_inf, kind=TABULATED)

    @classmethod
    def from_dict(cls, data):
        """Build from the table schema ``{"a": [...], "b": [...], "a_inf": r, "b_inf": r}``."""
        if not isinstance(data, dict):
            raise ValueError("coefficient table must be a JSON object")
        expected = {"a", "b", "a_inf", "b_inf"}
        missing = expected - set(data)
        extra = set(data) - expected
        if missing:
            raise ValueError(f"coefficient table is missing {sorted(missing)}")
        if extra:
            raise ValueError(f"coefficient table has unknown keys {sorted(extra)}")
        a, b = data["a"], data["b"]
        if not isinstance(a, list) or not isinstance(b, list):
            raise ValueError("'a' and 'b' must be arrays")
        for key in ("a_inf", "b_inf"):
            if isinstance(data[key], bool) or not isinstance(data[key], (int, float)):
                raise ValueError(f"{key!r} must be a number")
        for v in a + b:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValueError("coefficient arrays must hold numbers")
        return cls.tabulated(a, b, data["a_inf"], data["b_inf"])

    def to_dict(self):
        return {"a": list(self.a_head), "b": list(self.b_head),
                "a_inf": self.a_inf, "b_inf": self.b_inf}

    @property
    def head_length(self):
        return max(len(self.a_head), len(self.b_head))

    @property
    def support(self):
        """End points of the continuous band fixed by the tail values."""
        return self.a_inf - 2 * self.b_inf, self.a_inf + 2 * self.b_inf

    def a(self, n: int) -> float:
        if n < 0:
            raise IndexError(n)
        return self.a_head[n] if n < len(self.a_head) else self.a_inf

    def b(self, n: int) -> float:
        if n < 0:
            raise IndexError(n)
        return self.b_head[n] if n < len(self.b_head) else self.b_inf

    def arrays(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        """First ``count`` values of a_n and b_n as float arrays."""
        a = np.full(count, self.a_inf)
        b = np.full(count, self.b_inf)
        k = min(count, len(self.a_head))
        a[:k] = self.a_head[:k]
        k = min(count, len(self.b_head))
        b[:k] = self.b_head[:k]
        return a, b

    def shifted(self, k: int) -> "CoefficientSequence":
        """Sequence with the first ``k`` rows and columns deleted."""
        if self.head_length <= k and self.kind == NAMED_FAMILY:
            return self
        return CoefficientSequence(self.a_head[k:], self.b_head[k:], self.a_inf,
                                   self.b_inf, kind=TABULATED)

    def with_leading(self, a: dict[int, float] | None = None,
                     b: dict[int, float] | None = None) -> "CoefficientSequence":
        """Copy with individual leading coefficients replaced."""
        a = a or {}
        b = b or {}
        na = max([len(self.a_head)] + [i + 1 for i in a])
        nb = max([len(self.b_head)] + [i + 1 for i in b])
        a_new = [self.a(i) for i in range(na)]
        b_new = [self.b(i) for i in range(nb)]
        for i, v in a.items():
            a_new[i] = v
        for i, v in b.items():
            b_new[i] = v
        return CoefficientSequence.tabulated(a_new, b_new, self.a_inf, self.b_inf)


@dataclass(frozen=True)
class PolyVector:
    """The pair (d_n, d_{n+1}) used by the two-component form of the recursion."""

    lower: complex | float
    upper: complex | float
    index: int

    def as_array(self):
        return np.array([self.lower, self.upper])


@dataclass(frozen=True)
class TransferMatrix:
    """The 2x2 matrix mapping (d_{n-1}, d_n) to (d_n, d_{n+1})."""

    m11: float
    m12: float
    m21: float
    m22: complex | float
    index: int

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def as_array(self):
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def apply(self, vec: PolyVector) -> PolyVector:
        if vec.index != self.index - 1:
            raise ValueError(f"matrix {self.index} acts on vectors of index {self.index - 1}")
        return PolyVector(self.m11 * vec.lower + self.m12 * vec.upper,
                          self.m21 * vec.lower + self.m22 * vec.upper,
                          self.index)


def _check_point(x):
    if not np.all(np.isfinite(x)):
        raise ValueError("evaluation point must be finite")


def eval_polynomials(seq: CoefficientSequence, x, n_max: int):
    """Values p_0..p_{n_max} and q_0..q_{n_max} at ``x``.

    ``x`` may be a real or complex scalar, or a 1-d array of them; for an
    array the results have shape ``(len(x), n_max + 1)``.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    _check_point(x)
    scalar = np.ndim(x) == 0
    z = np.atleast_1d(np.asarray(x))
    if not np.iscomplexobj(z):
        z = z.astype(np.float64)
    a, b = seq.arrays(max(n_max, 1))
    p, q = kernels.recurrence(a, b, z, n_max)
    if scalar:
        return p[0], q[0]
    return p, q


def transfer_matrix(seq: CoefficientSequence, n: int, x) -> TransferMatrix:
    if n < 1:
        raise ValueError("transfer matrices are defined for n >= 1")
    bn = seq.b(n)
    return TransferMatrix(0.0, 1.0, -seq.b(n - 1) / bn, (x - seq.a(n)) / bn, n)


def initial_vectors(seq: CoefficientSequence, x) -> tuple[PolyVector, PolyVector]:
    """P_0 and Q_0."""
    b0 = seq.b(0)
    return PolyVector(1.0, (x - seq.a(0)) / b0, 0), PolyVector(0.0, 1.0 / b0, 0)


def wronskian(seq: CoefficientSequence, x, n: int):
    """b_{n-1} (p_{n-1} q_n - p_n q_{n-1}); identically one."""
    if n < 1:
        raise ValueError("the Wronskian is defined for n >= 1")
    p, q = eval_polynomials(seq, x, n)
    return seq.b(n - 1) * (p[n - 1] * q[n] - p[n] * q[n - 1])


def abbreviated_values(seq: CoefficientSequence, x, n_max: int):
    """Scalar abbreviated polynomials p~_0..p~_{n_max} (coefficients shifted by two)."""
    if n_max < 0:
        return np.zeros(0)
    p, _ = eval_polynomials(seq.shifted(2), x, n_max)
    return p


def abbreviated_polynomials(seq: CoefficientSequence, x, n_max: int) -> list[PolyVector]:
    """Vectors P~_{-2}..P~_{n_max}, where P~_n = (p~_n, p~_{n+1}).

    P~_{-2} = (0, 0) and P~_{-1} = (0, 1); the rest follow from the transfer
    matrices of the sequence with its first two rows and columns removed.
    """
    if n_max < -2:
        raise ValueError("n_max must be >= -2")
    vecs = [PolyVector(0.0, 0.0, -2)]
    if n_max >= -1:
        vecs.append(PolyVector(0.0, 1.0, -1))
    if n_max >= 0:
        pt = abbreviated_values(seq, x, n_max + 1)
        vecs.extend(PolyVector(pt[n], pt[n + 1], n) for n in range(n_max + 1))
    return vecs


def poly_vectors(values: Sequence) -> list[PolyVector]:
    """Pair consecutive scalar values into vectors D_0..D_{len-2}."""
    return [PolyVector(values[n], values[n + 1], n) for n in range(len(values) - 1)]
