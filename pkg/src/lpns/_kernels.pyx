# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction kernels.

Every reduction runs in a fixed sequential order with Neumaier compensation,
so results do not depend on thread count or array chunking.
"""
from libc.math cimport fabs, pow, sqrt


cdef inline void _neumaier_add(double v, double *s, double *c) noexcept nogil:
    cdef double t = s[0] + v
    if fabs(s[0]) >= fabs(v):
        c[0] += (s[0] - t) + v
    else:
        c[0] += (v - t) + s[0]
    s[0] = t


def neumaier_sum(const double[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double s = 0.0, c = 0.0
    with nogil:
        for i in range(n):
            _neumaier_add(x[i], &s, &c)
    return s + c


def magnitude_power_sum(const double[:, ::1] a, double p):
    """Compensated sum over points of |a[:, i]|**p (Euclidean magnitude)."""
    cdef Py_ssize_t i, k, ncomp = a.shape[0], n = a.shape[1]
    cdef double s = 0.0, c = 0.0, m2, v
    with nogil:
        for i in range(n):
            if ncomp == 1:
                v = fabs(a[0, i])
                if p == 2.0:
                    v = v * v
                elif p != 1.0:
                    v = pow(v, p)
            else:
                m2 = 0.0
                for k in range(ncomp):
                    m2 = m2 + a[k, i] * a[k, i]
                if p == 2.0:
                    v = m2
                elif p == 1.0:
                    v = sqrt(m2)
                else:
                    v = pow(m2, 0.5 * p)
            _neumaier_add(v, &s, &c)
    return s + c


def magnitude_max(const double[:, ::1] a):
    cdef Py_ssize_t i, k, ncomp = a.shape[0], n = a.shape[1]
    cdef double best = 0.0, m2
    with nogil:
        for i in range(n):
            if ncomp == 1:
                m2 = fabs(a[0, i])
            else:
                m2 = 0.0
                for k in range(ncomp):
                    m2 = m2 + a[k, i] * a[k, i]
                m2 = sqrt(m2)
            if m2 > best:
                best = m2
    return best
