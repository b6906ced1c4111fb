# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels (see `_numpy.py` for the
reference semantics).  `pairwise_sum` follows the identical reduction tree,
so it is bit-compatible with the fallback; the other kernels agree to
rounding."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, floor, sin

cnp.import_array()

NAME = "cython"


def pairwise_sum(values):
    x = np.asarray(values)
    if x.ndim != 1:
        raise ValueError("pairwise_sum expects a 1-d array")
    if x.size == 0:
        return x.dtype.type(0.0) if x.dtype.kind in "fc" else 0.0
    if x.dtype.kind == "c":
        return _pairwise_sum_c(np.ascontiguousarray(x, dtype=np.complex128))
    return _pairwise_sum_d(np.ascontiguousarray(x, dtype=np.float64))


cdef double _pairwise_sum_d(double[::1] values):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t m, i
    buf = np.empty(n + 1, dtype=np.float64)  # +1: odd-length rounds pad with one zero
    cdef double[::1] b = buf
    for i in range(n):
        b[i] = values[i]
    m = n
    while m > 1:
        if m % 2:
            b[m] = 0.0
            m += 1
        for i in range(m // 2):
            b[i] = b[2 * i] + b[2 * i + 1]
        m //= 2
    return b[0]


cdef double complex _pairwise_sum_c(double complex[::1] values):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t m, i
    buf = np.empty(n + 1, dtype=np.complex128)
    cdef double complex[::1] b = buf
    for i in range(n):
        b[i] = values[i]
    m = n
    while m > 1:
        if m % 2:
            b[m] = 0.0
            m += 1
        for i in range(m // 2):
            b[i] = b[2 * i] + b[2 * i + 1]
        m //= 2
    return b[0]


def trace_quadratic_batch(frames, sym):
    V = np.ascontiguousarray(frames, dtype=np.float64)
    S = np.ascontiguousarray(sym, dtype=np.float64)
    out = np.empty(V.shape[0], dtype=np.float64)
    _trace_quadratic(V, S, out)
    return out


cdef void _trace_quadratic(double[:, :, ::1] V, double[:, ::1] S, double[::1] out) noexcept nogil:
    cdef Py_ssize_t n = V.shape[0], d = V.shape[1], m = V.shape[2]
    cdef Py_ssize_t s, i, j, c
    cdef double acc, col
    for s in range(n):
        acc = 0.0
        for c in range(m):
            for i in range(d):
                col = 0.0
                for j in range(d):
                    col += S[i, j] * V[s, j, c]
                acc += V[s, i, c] * col
        out[s] = acc


def eigen_trace_batch(frames, weights):
    V = np.ascontiguousarray(frames, dtype=np.float64)
    w = np.ascontiguousarray(weights, dtype=np.float64)
    out = np.empty(V.shape[0], dtype=np.float64)
    _eigen_trace(V, w, out)
    return out


cdef void _eigen_trace(double[:, :, ::1] V, double[::1] w, double[::1] out) noexcept nogil:
    cdef Py_ssize_t n = V.shape[0], d = V.shape[1], m = V.shape[2]
    cdef Py_ssize_t s, i, j
    cdef double acc, v
    for s in range(n):
        acc = 0.0
        for j in range(d):
            for i in range(m):
                v = V[s, j, i]
                acc += w[j] * v * v
        out[s] = acc


def sinogram_project(field, angles, double half_extent, s_grid, tau_grid):
    f = np.ascontiguousarray(field, dtype=np.float64)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise ValueError("field must be square")
    a = np.ascontiguousarray(angles, dtype=np.float64)
    s = np.ascontiguousarray(s_grid, dtype=np.float64)
    t = np.ascontiguousarray(tau_grid, dtype=np.float64)
    out = np.empty((a.shape[0], s.shape[0]), dtype=np.float64)
    _sinogram(f, a, half_extent, s, t, out)
    return out


cdef void _sinogram(double[:, ::1] f, double[::1] angles, double half_extent,
                    double[::1] s_grid, double[::1] tau_grid, double[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t na = angles.shape[0], ns = s_grid.shape[0], nt = tau_grid.shape[0]
    cdef Py_ssize_t a, si, ti, ix, iy
    cdef double h = 2.0 * half_extent / n
    cdef double dtau = tau_grid[1] - tau_grid[0] if nt > 1 else 1.0
    cdef double ct, st, x, y, gx, gy, fx, fy, acc, val, sv
    for a in range(na):
        ct = cos(angles[a])
        st = sin(angles[a])
        for si in range(ns):
            sv = s_grid[si]
            acc = 0.0
            for ti in range(nt):
                x = sv * (-st) + tau_grid[ti] * ct
                y = sv * ct + tau_grid[ti] * st
                gx = (x + half_extent) / h
                gy = (y + half_extent) / h
                ix = <Py_ssize_t>floor(gx)
                iy = <Py_ssize_t>floor(gy)
                fx = gx - ix
                fy = gy - iy
                val = 0.0
                if 0 <= ix < n and 0 <= iy < n:
                    val += (1.0 - fx) * (1.0 - fy) * f[ix, iy]
                if 0 <= ix + 1 < n and 0 <= iy < n:
                    val += fx * (1.0 - fy) * f[ix + 1, iy]
                if 0 <= ix < n and 0 <= iy + 1 < n:
                    val += (1.0 - fx) * fy * f[ix, iy + 1]
                if 0 <= ix + 1 < n and 0 <= iy + 1 < n:
                    val += fx * fy * f[ix + 1, iy + 1]
                acc += val
            out[a, si] = acc * dtau
