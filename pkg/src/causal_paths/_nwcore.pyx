# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Gaussian-kernel sums for Nadaraya-Watson regression.

Mirrors :func:`causal_paths._nwcore_py.kernel_sums`; see there for the contract.
"""
import numpy as np

from libc.math cimport exp


def kernel_sums(const double[::1] x, const double[::1] y, double h, const double[::1] q):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t m = q.shape[0]
    cdef Py_ssize_t i, j
    cdef double inv_h = 1.0 / h
    cdef double inv_h2 = inv_h * inv_h
    cdef double d, u, k, kd, s0, s1, ds0, ds1, qj

    out = np.empty((4, m), dtype=np.float64)
    cdef double[:, ::1] o = out

    with nogil:
        for j in range(m):
            qj = q[j]
            s0 = 0.0
            s1 = 0.0
            ds0 = 0.0
            ds1 = 0.0
            for i in range(n):
                d = qj - x[i]
                u = d * inv_h
                k = exp(-0.5 * u * u)
                kd = k * d
                s0 += k
                s1 += k * y[i]
                ds0 += kd
                ds1 += kd * y[i]
            o[0, j] = s0
            o[1, j] = s1
            o[2, j] = -ds0 * inv_h2
            o[3, j] = -ds1 * inv_h2
    return out[0], out[1], out[2], out[3]


def kernel_sums_self(const double[::1] x, const double[::1] y, double h):
    """``kernel_sums(x, y, h, x)`` using the symmetry K(x_i, x_j) = K(x_j, x_i)."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double inv_h = 1.0 / h
    cdef double inv_h2 = inv_h * inv_h
    cdef double d, u, k, kd, xi, yi

    out = np.zeros((4, n), dtype=np.float64)
    cdef double[:, ::1] o = out

    with nogil:
        for i in range(n):
            o[0, i] += 1.0
            o[1, i] += y[i]
            xi = x[i]
            yi = y[i]
            for j in range(i + 1, n):
                d = xi - x[j]
                u = d * inv_h
                k = exp(-0.5 * u * u)
                kd = k * d
                o[0, i] += k
                o[0, j] += k
                o[1, i] += k * y[j]
                o[1, j] += k * yi
                o[2, i] += kd
                o[2, j] -= kd
                o[3, i] += kd * y[j]
                o[3, j] -= kd * yi
        for i in range(n):
            o[2, i] *= -inv_h2
            o[3, i] *= -inv_h2
    return out[0], out[1], out[2], out[3]
