"""Pure numpy versions of the hot loops.

Every function here has a twin with the same signature in the compiled
``_kernels`` extension. The loops run over the recursion index in Python and
are vectorised over evaluation points with numpy.
"""
import numpy as np

NAME = "python"

# p_n and q_n are rescaled together once they exceed this magnitude
_RESCALE = 1e150


def recurrence(a, b, z, n_max):
    """First and second kind values for every point in ``z``.

    Returns two arrays of shape ``(len(z), n_max + 1)``.
    """
    z = np.asarray(z)
    dtype = np.result_type(z.dtype, np.float64)
    m = z.shape[0]
    p = np.zeros((m, n_max + 1), dtype=dtype)
    q = np.zeros((m, n_max + 1), dtype=dtype)
    p[:, 0] = 1.0
    if n_max == 0:
        return p, q
    p[:, 1] = (z - a[0]) / b[0]
    q[:, 1] = 1.0 / b[0]
    for n in range(1, n_max):
        p[:, n + 1] = ((z - a[n]) * p[:, n] - b[n - 1] * p[:, n - 1]) / b[n]
        q[:, n + 1] = ((z - a[n]) * q[:, n] - b[n - 1] * q[:, n - 1]) / b[n]
    return p, q


def ratio(a, b, z, n, coupling):
    """Evaluate ``-(q_n - c q_{n-1}) / (p_n - c p_{n-1})`` at complex ``z``.

    ``coupling`` holds ``c`` per point (zeros give the plain ratio). Returns
    the values and an integer status array, nonzero where the denominator
    vanished.
    """
    z = np.asarray(z, dtype=np.complex128)
    c = np.asarray(coupling, dtype=np.complex128)
    p_prev = np.ones_like(z)
    q_prev = np.zeros_like(z)
    p_cur = (z - a[0]) / b[0]
    q_cur = np.full_like(z, 1.0 / b[0])
    for k in range(1, n):
        p_next = ((z - a[k]) * p_cur - b[k - 1] * p_prev) / b[k]
        q_next = ((z - a[k]) * q_cur - b[k - 1] * q_prev) / b[k]
        p_prev, p_cur = p_cur, p_next
        q_prev, q_cur = q_cur, q_next
        big = np.maximum(np.abs(p_cur), np.abs(q_cur)) > _RESCALE
        if big.any():
            s = np.where(big, 1.0 / _RESCALE, 1.0)
            p_prev = p_prev * s
            p_cur = p_cur * s
            q_prev = q_prev * s
            q_cur = q_cur * s
    den = p_cur - c * p_prev
    num = q_cur - c * q_prev
    status = (den == 0).astype(np.int64)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(status == 0, -num / np.where(status == 0, den, 1.0), np.nan)
    return out, status


def continued_fraction(a, b, tail, z):
    """Bottom-up evaluation of ``R_0 = 1 / (z - a_0 - b_0^2 R_1)``.

    ``a`` and ``b`` have length ``depth``; ``tail`` is ``R_depth`` per point.
    Returns ``R_0`` and the level of the first vanishing denominator (-1 when
    none vanished).
    """
    z = np.asarray(z, dtype=np.complex128)
    r = np.asarray(tail, dtype=np.complex128).copy()
    bad = np.full(z.shape[0], -1, dtype=np.int64)
    for n in range(len(a) - 1, -1, -1):
        den = z - a[n] - b[n] * b[n] * r
        zero = den == 0
        bad = np.where(zero, n, bad)
        r = np.where(zero, 0.0, 1.0 / np.where(zero, 1.0, den))
    return r, bad


def sturm_count(d, e2, x):
    """Number of eigenvalues strictly below ``x``."""
    count = 0
    t = d[0] - x
    if t < 0:
        count += 1
    for i in range(1, len(d)):
        if t == 0:
            t = 1e-300
        t = d[i] - x - e2[i - 1] / t
        if t < 0:
            count += 1
    return count


def bisect_eigenvalues(d, e, max_iter=200):
    """All eigenvalues of a symmetric tridiagonal matrix, ascending.

    Raises RuntimeError if an eigenvalue fails to converge in ``max_iter``
    halvings.
    """
    d = np.asarray(d, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    n = d.shape[0]
    e2 = e * e
    ae = np.abs(e)
    radius = np.zeros(n)
    radius[:-1] += ae
    radius[1:] += ae
    lo0 = float(np.min(d - radius))
    hi0 = float(np.max(d + radius))
    scale = max(abs(lo0), abs(hi0), 1e-300)
    lo0 -= 1e-14 * scale
    hi0 += 1e-14 * scale
    out = np.empty(n)
    for k in range(n):
        lo, hi = lo0, hi0
        for _ in range(max_iter):
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi or hi - lo <= 4e-16 * scale:
                break
            if sturm_count(d, e2, mid) > k:
                hi = mid
            else:
                lo = mid
        else:
            raise RuntimeError(f"bisection did not converge for eigenvalue {k}")
        out[k] = 0.5 * (lo + hi)
    return out
