# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled inner loops for kernel evaluation and field accumulation.

Every function here has a numpy twin in ``_kernels_py`` with the same
signature; the summation order per output element is the same in both.
"""

import numpy as np

from libc.math cimport cos, sin, round, M_PI


def dirichlet(const double[::1] offsets, long m):
    """Normalized Dirichlet power ``|(1/m) sum_n exp(2 pi i d n / m)|^2``.

    ``offsets`` are pixel offsets ``d`` from the kernel center; the result
    has period ``m`` in ``d``.
    """
    cdef Py_ssize_t i, size = offsets.shape[0]
    cdef long n
    cdef double d, step, re, im
    out = np.empty(size, dtype=np.float64)
    cdef double[::1] res = out
    for i in range(size):
        d = offsets[i]
        d = d - m * round(d / m)
        step = 2.0 * M_PI * d / m
        re = 0.0
        im = 0.0
        for n in range(m):
            re += cos(step * n)
            im += sin(step * n)
        re /= m
        im /= m
        res[i] = re * re + im * im
    return out


def accumulate_grid(const double[:, ::1] kx, const double[:, ::1] ky,
                    const double[::1] doses):
    """``out[i, j] = sum_s (doses[s] * kx[s, i]) * ky[s, j]`` in shot order."""
    cdef Py_ssize_t s, i, j
    cdef Py_ssize_t n_shots = kx.shape[0], nx = kx.shape[1], ny = ky.shape[1]
    cdef double a
    out = np.zeros((nx, ny), dtype=np.float64)
    cdef double[:, ::1] res = out
    for s in range(n_shots):
        for i in range(nx):
            a = doses[s] * kx[s, i]
            for j in range(ny):
                res[i, j] += a * ky[s, j]
    return out


def accumulate_points(const double[:, ::1] kx, const double[:, ::1] ky,
                      const double[::1] doses):
    """``out[p] = sum_s (doses[s] * kx[s, p]) * ky[s, p]`` in shot order."""
    cdef Py_ssize_t s, p
    cdef Py_ssize_t n_shots = kx.shape[0], n_points = kx.shape[1]
    out = np.zeros(n_points, dtype=np.float64)
    cdef double[::1] res = out
    for s in range(n_shots):
        for p in range(n_points):
            res[p] += (doses[s] * kx[s, p]) * ky[s, p]
    return out
