"""Haar sampling and quadrature on Stiefel and Grassmann manifolds.

Measure convention: all expectations returned here are scaled by the total
masses from `constants`, so downstream formulas read like the continuum ones.
Sampling is chunked over counter-based substreams with a fixed pairwise
reduction tree; estimates are bit-identical for a given (seed, path, n)
regardless of worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import _kernels
from .constants import grassmann_mass, stiefel_mass
from .streams import SeededStream, chunk_sizes

FRAME_TOL = 1e-12


class SampleError(RuntimeError):
    """A Monte Carlo integrand produced a non-finite value."""


class QuadratureError(RuntimeError):
    """Deterministic quadrature failed to reach its tolerance."""


@dataclass(frozen=True)
class OrthonormalFrame:
    """A d x k matrix with orthonormal columns."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] < m.shape[1]:
            raise ValueError(f"frame must be d x k with k <= d, got shape {m.shape}")
        gram_defect = np.max(np.abs(m.T @ m - np.eye(m.shape[1])))
        if gram_defect > FRAME_TOL:
            raise ValueError(f"columns are not orthonormal (defect {gram_defect:.3e})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @property
    def k(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class AffineKPlane:
    """An affine k-plane {V y + offset}: orientation frame plus perpendicular offset."""

    frame: OrthonormalFrame
    offset: np.ndarray

    def __post_init__(self):
        w = np.array(self.offset, dtype=np.float64).reshape(-1)
        if w.shape[0] != self.frame.d:
            raise ValueError(f"offset dimension {w.shape[0]} != ambient dimension {self.frame.d}")
        tangential = np.linalg.norm(self.frame.matrix.T @ w)
        if tangential > FRAME_TOL * max(1.0, float(np.linalg.norm(w))):
            raise ValueError(f"offset has a tangential component (norm {tangential:.3e})")
        w.flags.writeable = False
        object.__setattr__(self, "offset", w)

    @property
    def d(self) -> int:
        return self.frame.d


def _orthonormalize(g: np.ndarray) -> np.ndarray:
    """QR with positive R diagonal: maps iid normals to Haar frames."""
    q, r = np.linalg.qr(g)
    signs = np.sign(np.einsum("...ii->...i", r))
    signs[signs == 0.0] = 1.0
    return q * signs[..., None, :]


def _chunked(worker, n: int, stream: SeededStream, workers: int) -> np.ndarray:
    """Evaluate worker(size, substream) per fixed-size chunk; concatenate in order."""
    if n < 1:
        raise ValueError("Monte Carlo paths need at least one sample")
    sizes = chunk_sizes(n)
    tasks = [(size, stream.child(j)) for j, size in enumerate(sizes)]
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda t: worker(*t), tasks))
    else:
        parts = [worker(*t) for t in tasks]
    return np.concatenate(parts, axis=0)


def stiefel_frame_batch(d: int, k: int, n: int, stream: SeededStream, workers: int = 1) -> np.ndarray:
    """(n, d, k) stack of Haar-distributed orthonormal frames."""
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got ({d}, {k})")

    def worker(size, sub):
        return _orthonormalize(sub.generator().standard_normal((size, d, k)))

    return _chunked(worker, n, stream, workers)


def sample_stiefel(pair, stream: SeededStream) -> OrthonormalFrame:
    """One Haar frame; to integrate against the uniform Stiefel measure,
    multiply sample averages by stiefel_mass(pair)."""
    d, k = (pair.d, pair.k) if hasattr(pair, "d") else pair
    return OrthonormalFrame(stiefel_frame_batch(d, k, 1, stream)[0])


def projection(frame: OrthonormalFrame) -> np.ndarray:
    """Orthogonal projection V V^T onto the frame's column span."""
    return frame.matrix @ frame.matrix.T


def projection_batch(d: int, m: int, n: int, stream: SeededStream, workers: int = 1) -> np.ndarray:
    """(n, d, d) Haar projections onto m-dimensional subspaces of R^d.

    Rank-1 and corank-1 cases are drawn directly from the sphere (the
    complement map is measure preserving); the rest go through Stiefel frames.
    """
    if not 1 <= m <= d:
        raise ValueError(f"need 1 <= m <= d, got ({d}, {m})")

    if m in (1, d - 1) and d > 1:

        def worker(size, sub):
            g = sub.generator().standard_normal((size, d))
            q = g / np.linalg.norm(g, axis=1, keepdims=True)
            pp = np.einsum("ni,nj->nij", q, q)
            if m == 1:
                return pp
            return np.eye(d)[None, :, :] - pp

        return _chunked(worker, n, stream, workers)

    frames = stiefel_frame_batch(d, m, n, stream, workers)
    return np.einsum("nij,nkj->nik", frames, frames)


def mean_and_stderr(values: np.ndarray) -> tuple[float, float]:
    """Sample mean and standard error via the fixed pairwise tree."""
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    if n < 1:
        raise ValueError("need at least one sample")
    mean = _kernels.pairwise_sum(v) / n
    if n == 1:
        return float(mean), 0.0
    var = _kernels.pairwise_sum(np.square(v - mean)) / (n - 1)
    return float(mean), float(np.sqrt(var / n))


def grassmann_expectation(
    phi,
    pair,
    n: int,
    stream: SeededStream,
    workers: int = 1,
    vectorized: bool = False,
) -> tuple[float, float]:
    """Monte Carlo integral of phi(P) against the invariant Grassmann measure.

    pair = (d, m) selects m-dimensional subspaces of R^d.  Returns
    (grassmann_mass * mean, grassmann_mass * stderr).  phi sees projection
    matrices; with vectorized=True it receives the whole (n, d, d) stack.
    """
    d, m = (pair.d, pair.k) if hasattr(pair, "d") else pair
    projections = projection_batch(d, m, n, stream, workers)
    if vectorized:
        values = np.asarray(phi(projections), dtype=np.float64)
    else:
        values = np.array([phi(p) for p in projections], dtype=np.float64)
    if values.shape != (n,):
        raise ValueError(f"integrand returned shape {values.shape}, expected ({n},)")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise SampleError(f"integrand returned a non-finite value at sample index {bad[0]}")
    mass = grassmann_mass((d, m))
    mean, err = mean_and_stderr(values)
    return mass * mean, mass * err


def line_projection_2d(theta: float) -> np.ndarray:
    """Projection onto the line through (cos theta, sin theta) in R^2."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c * c, c * s], [c * s, s * s]])


def exact_grassmann_quadrature_2d(phi, tol: float = 1e-12) -> float:
    """Deterministic integral over lines in R^2: int_0^pi phi(P(theta)) dtheta.

    Total mass pi matches grassmann_mass((2, 1)); serves as the adaptive
    quadrature oracle for the (2, 1) Monte Carlo path.
    """
    val, err = integrate.quad(lambda t: phi(line_projection_2d(t)), 0.0, np.pi, epsabs=tol, epsrel=tol, limit=200)
    if err > max(tol, 1e-9 * abs(val)) * 100:
        raise QuadratureError(f"quadrature error estimate {err:.3e} too large for tolerance {tol:.1e}")
    return val
