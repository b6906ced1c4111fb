"""Pure-NumPy implementations of the hot kernels.

Semantics must match the compiled backend in `_cython.pyx`: same reduction
trees for `pairwise_sum`, same bilinear rule for the sinogram projector.
Results of the two backends agree to rounding (~1e-13 relative); within one
backend every kernel is bit-reproducible.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def pairwise_sum(values: np.ndarray) -> float:
    """Sum a 1-d array over a fixed balanced pairwise tree.

    The tree shape depends only on len(values), so the result is independent
    of chunking or scheduling and identical across runs.
    """
    x = np.asarray(values)
    if x.ndim != 1:
        raise ValueError("pairwise_sum expects a 1-d array")
    if x.size == 0:
        return x.dtype.type(0.0) if x.dtype.kind in "fc" else 0.0
    x = x.copy()
    while x.size > 1:
        if x.size % 2:
            x = np.concatenate([x, x[:1] * 0])
        x = x[0::2] + x[1::2]
    return x[0]


def trace_quadratic_batch(frames: np.ndarray, sym: np.ndarray) -> np.ndarray:
    """Per-sample tr(V^T S V) for a stack of frames V (n, d, m) and symmetric S (d, d)."""
    return np.einsum("nij,ik,nkj->n", frames, sym, frames)


def eigen_trace_batch(frames: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Per-sample sum_{j,i} w_j V[n, j, i]^2 (diagonal quadratic in an eigenbasis)."""
    return np.einsum("nji,j->n", np.square(frames), weights)


def sinogram_project(
    field: np.ndarray,
    angles: np.ndarray,
    half_extent: float,
    s_grid: np.ndarray,
    tau_grid: np.ndarray,
) -> np.ndarray:
    """Line-integral projections of a square field by bilinear interpolation.

    field[i, j] samples f(x_i, y_j) with x_i = -L + i*h on an n x n grid.
    For each angle t the line with signed offset s has direction
    (cos t, sin t) and normal (-sin t, cos t); points outside the grid
    contribute zero.  Returns (len(angles), len(s_grid)) of integrals ds.
    """
    f = np.ascontiguousarray(field, dtype=np.float64)
    n = f.shape[0]
    if f.shape != (n, n):
        raise ValueError("field must be square")
    h = 2.0 * half_extent / n
    dtau = tau_grid[1] - tau_grid[0] if len(tau_grid) > 1 else 1.0
    out = np.empty((len(angles), len(s_grid)), dtype=np.float64)
    ss = np.asarray(s_grid)[:, None]
    tt = np.asarray(tau_grid)[None, :]
    for a, theta in enumerate(angles):
        ct, st = np.cos(theta), np.sin(theta)
        x = ss * (-st) + tt * ct
        y = ss * ct + tt * st
        gx = (x + half_extent) / h
        gy = (y + half_extent) / h
        ix = np.floor(gx).astype(np.int64)
        iy = np.floor(gy).astype(np.int64)
        fx = gx - ix
        fy = gy - iy
        acc = np.zeros_like(gx)
        for dx_, wx in ((0, 1.0 - fx), (1, fx)):
            for dy_, wy in ((0, 1.0 - fy), (1, fy)):
                jx = ix + dx_
                jy = iy + dy_
                ok = (jx >= 0) & (jx < n) & (jy >= 0) & (jy < n)
                vals = np.where(ok, f[np.clip(jx, 0, n - 1), np.clip(jy, 0, n - 1)], 0.0)
                acc += wx * wy * vals
        out[a] = acc.sum(axis=1) * dtau
    return out
