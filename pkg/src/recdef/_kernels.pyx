# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Signatures mirror ``recdef._pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport NAN
from libc.stdint cimport int64_t

cnp.import_array()

NAME = "cython"

cdef double _RESCALE = 1e150

ctypedef fused scalar_t:
    double
    double complex


cdef void _recur(const double[::1] a, const double[::1] b, scalar_t[::1] z,
                 scalar_t[:, ::1] p, scalar_t[:, ::1] q, Py_ssize_t n_max) noexcept nogil:
    cdef Py_ssize_t i, n
    cdef scalar_t zi
    for i in range(z.shape[0]):
        zi = z[i]
        p[i, 0] = 1.0
        q[i, 0] = 0.0
        if n_max == 0:
            continue
        p[i, 1] = (zi - a[0]) / b[0]
        q[i, 1] = 1.0 / b[0]
        for n in range(1, n_max):
            p[i, n + 1] = ((zi - a[n]) * p[i, n] - b[n - 1] * p[i, n - 1]) / b[n]
            q[i, n + 1] = ((zi - a[n]) * q[i, n] - b[n - 1] * q[i, n - 1]) / b[n]


def recurrence(a, b, z, Py_ssize_t n_max):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    z = np.asarray(z)
    if np.iscomplexobj(z):
        return _recur_complex(av, bv, np.ascontiguousarray(z, dtype=np.complex128), n_max)
    return _recur_real(av, bv, np.ascontiguousarray(z, dtype=np.float64), n_max)


cdef _recur_real(const double[::1] av, const double[::1] bv, double[::1] z, Py_ssize_t n_max):
    p = np.empty((z.shape[0], n_max + 1), dtype=np.float64)
    q = np.empty_like(p)
    cdef double[:, ::1] pv = p
    cdef double[:, ::1] qv = q
    with nogil:
        _recur(av, bv, z, pv, qv, n_max)
    return p, q


cdef _recur_complex(const double[::1] av, const double[::1] bv, double complex[::1] z, Py_ssize_t n_max):
    p = np.empty((z.shape[0], n_max + 1), dtype=np.complex128)
    q = np.empty_like(p)
    cdef double complex[:, ::1] pv = p
    cdef double complex[:, ::1] qv = q
    with nogil:
        _recur(av, bv, z, pv, qv, n_max)
    return p, q


def ratio(a, b, z, Py_ssize_t n, coupling):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128)
    cdef double complex[::1] cv = np.ascontiguousarray(coupling, dtype=np.complex128)
    cdef Py_ssize_t m = zv.shape[0]
    out = np.empty(m, dtype=np.complex128)
    status = np.zeros(m, dtype=np.int64)
    cdef double complex[::1] ov = out
    cdef int64_t[::1] sv = status
    cdef Py_ssize_t i, k
    cdef double complex zi, pp, pc, pn, qp, qc, qn, den
    cdef double s
    with nogil:
        for i in range(m):
            zi = zv[i]
            pp = 1.0
            qp = 0.0
            pc = (zi - av[0]) / bv[0]
            qc = 1.0 / bv[0]
            for k in range(1, n):
                pn = ((zi - av[k]) * pc - bv[k - 1] * pp) / bv[k]
                qn = ((zi - av[k]) * qc - bv[k - 1] * qp) / bv[k]
                pp = pc
                pc = pn
                qp = qc
                qc = qn
                # the ratio is scale free; keep p and q representable
                if abs(pc) > _RESCALE or abs(qc) > _RESCALE:
                    s = 1.0 / _RESCALE
                    pp = pp * s
                    pc = pc * s
                    qp = qp * s
                    qc = qc * s
            den = pc - cv[i] * pp
            if den == 0:
                sv[i] = 1
                ov[i] = NAN
            else:
                ov[i] = -(qc - cv[i] * qp) / den
    return out, status


def continued_fraction(a, b, tail, z):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128)
    cdef double complex[::1] tv = np.ascontiguousarray(tail, dtype=np.complex128)
    cdef Py_ssize_t m = zv.shape[0]
    cdef Py_ssize_t depth = av.shape[0]
    out = np.empty(m, dtype=np.complex128)
    bad = np.full(m, -1, dtype=np.int64)
    cdef double complex[::1] ov = out
    cdef int64_t[::1] bv2 = bad
    cdef Py_ssize_t i, n
    cdef double complex r, den
    with nogil:
        for i in range(m):
            r = tv[i]
            for n in range(depth - 1, -1, -1):
                den = zv[i] - av[n] - bv[n] * bv[n] * r
                if den == 0:
                    bv2[i] = n
                    r = 0.0
                else:
                    r = 1.0 / den
            ov[i] = r
    return out, bad


cdef Py_ssize_t _sturm(const double[::1] d, const double[::1] e2, double x) noexcept nogil:
    cdef Py_ssize_t count = 0, i
    cdef double t = d[0] - x
    if t < 0:
        count += 1
    for i in range(1, d.shape[0]):
        if t == 0:
            t = 1e-300
        t = d[i] - x - e2[i - 1] / t
        if t < 0:
            count += 1
    return count


def sturm_count(d, e2, double x):
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(e2, dtype=np.float64)
    return _sturm(dv, ev, x)


def bisect_eigenvalues(d, e, int max_iter=200):
    d = np.ascontiguousarray(d, dtype=np.float64)
    e = np.ascontiguousarray(e, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0]
    e2 = e * e
    ae = np.abs(e)
    radius = np.zeros(n)
    radius[:n - 1] += ae
    radius[1:] += ae
    cdef double lo0 = float(np.min(d - radius))
    cdef double hi0 = float(np.max(d + radius))
    cdef double scale = max(abs(lo0), abs(hi0), 1e-300)
    lo0 -= 1e-14 * scale
    hi0 += 1e-14 * scale
    out = np.empty(n)
    cdef double[::1] ov = out
    cdef const double[::1] dv = d
    cdef const double[::1] e2v = e2
    cdef Py_ssize_t k
    cdef int it
    cdef double lo, hi, mid
    cdef bint done
    for k in range(n):
        lo = lo0
        hi = hi0
        done = False
        with nogil:
            for it in range(max_iter):
                mid = 0.5 * (lo + hi)
                if mid == lo or mid == hi or hi - lo <= 4e-16 * scale:
                    done = True
                    break
                if _sturm(dv, e2v, mid) > k:
                    hi = mid
                else:
                    lo = mid
        if not done:
            raise RuntimeError(f"bisection did not converge for eigenvalue {k}")
        ov[k] = 0.5 * (lo + hi)
    return out
