"""Covariance of point configurations and the projected-trace weights.

The weight of a configuration is the integral over m-dimensional subspaces
(m = d - k) of tr(P Var)^((d(d-k)-2)/2) against the invariant Grassmann mass.
Two independent Monte Carlo routes are provided: the direct route samples
projections, the eigenvalue route diagonalizes the covariance first and pays
the Stiefel-to-Grassmann mass conversion explicitly.  The quadratic closed
form is gated by a versioned calibration file: its single constant is fitted
numerically, never hard-coded.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .constants import gamma_product, grassmann_mass, stiefel_mass
from .manifolds import _chunked, mean_and_stderr, stiefel_frame_batch
from .streams import SeededStream

CALIBRATION_SCHEMA = "kplane-weight-calibration/1"


class InternalDefectError(AssertionError):
    """Two formulas that must agree to rounding failed to do so."""


class CalibrationError(RuntimeError):
    """The quadratic closed form was invoked without a calibrated constant."""


@dataclass(frozen=True)
class Configuration:
    """d+1 labelled points in R^d."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] != pts.shape[1] + 1:
            raise ValueError(f"need (d+1) x d points, got shape {pts.shape}")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @classmethod
    def from_flat(cls, flat, d: int) -> "Configuration":
        return cls(np.asarray(flat, dtype=np.float64).reshape(d + 1, d))

    def flat(self) -> np.ndarray:
        return self.points.reshape(-1)


def random_configuration(d: int, stream: SeededStream) -> Configuration:
    return Configuration(stream.generator().standard_normal((d + 1, d)))


def covariance(xi: Configuration) -> np.ndarray:
    """Covariance matrix of the uniform distribution on the points:
    (1 / (2 (d+1)^2)) sum_{i,j} (xi_i - xi_j)(xi_i - xi_j)^T."""
    pts = xi.points
    n = pts.shape[0]
    diffs = pts[:, None, :] - pts[None, :, :]
    var = np.einsum("ijk,ijl->kl", diffs, diffs) / (2.0 * n * n)
    return 0.5 * (var + var.T)


def trace_variance(xi: Configuration) -> float:
    """tr Var, computed both as the matrix trace and as the pair sum of
    squared distances; the two must agree to rounding."""
    pts = xi.points
    n = pts.shape[0]
    via_trace = float(np.trace(covariance(xi)))
    diffs = pts[:, None, :] - pts[None, :, :]
    via_pairs = float(np.sum(diffs * diffs) / (2.0 * n * n))
    scale = max(abs(via_trace), abs(via_pairs), 1e-300)
    if abs(via_trace - via_pairs) > 1e-12 * scale:
        raise InternalDefectError(f"trace-variance formulas disagree: {via_trace!r} vs {via_pairs!r}")
    return via_trace


def normalize_configuration(xi: Configuration) -> Configuration:
    """Rescale so that trace_variance == 1 (removes the homogeneity degree)."""
    tv = trace_variance(xi)
    if tv <= 0.0:
        raise ValueError("degenerate configuration cannot be normalized")
    return Configuration(xi.points / np.sqrt(tv))


def weight_exponent(d: int, k: int) -> float:
    """Homogeneity degree d(d-k) - 2 of the weight."""
    if not 1 <= k <= d - 1:
        raise ValueError(f"need 1 <= k <= d-1, got ({d}, {k})")
    return float(d * (d - k) - 2)


def _projected_trace_values(
    sym: np.ndarray, d: int, m: int, n: int, stream: SeededStream, workers: int = 1
) -> np.ndarray:
    """(n,) samples of tr(P sym) for Haar projections P onto m-planes in R^d.

    Rank-1/corank-1 cases avoid frames entirely; projections are never
    materialized, so memory stays at one chunk of draws.
    """
    tr_sym = float(np.trace(sym))

    if m in (1, d - 1) and d > 1:

        def worker(size, sub):
            g = sub.generator().standard_normal((size, d))
            q = g / np.linalg.norm(g, axis=1, keepdims=True)
            t = _kernels.trace_quadratic_batch(q[:, :, None], sym)
            return t if m == 1 else tr_sym - t

        return _chunked(worker, n, stream, workers)

    def worker(size, sub):
        frames = stiefel_frame_batch(d, m, size, sub, workers=1)
        return _kernels.trace_quadratic_batch(frames, sym)

    return _chunked(worker, n, stream, workers)


def i_weight_mc(
    xi: Configuration, k: int, n: int, stream: SeededStream, workers: int = 1
) -> tuple[float, float]:
    """Direct Monte Carlo weight: Grassmann average of tr(P Var)^(exponent/2)."""
    d = xi.d
    p = 0.5 * weight_exponent(d, k)
    var = covariance(xi)
    traces = _projected_trace_values(var, d, d - k, n, stream, workers)
    values = np.power(np.maximum(traces, 0.0), p)
    mass = grassmann_mass((d, d - k))
    mean, err = mean_and_stderr(values)
    return mass * mean, mass * err


def i_weight_eigen_mc(
    xi: Configuration, k: int, n: int, stream: SeededStream, workers: int = 1
) -> tuple[float, float]:
    """Eigenvalue route: diagonalize Var, sample Stiefel frames, convert mass.

    The integrand sum_{i,j} lambda_j^2 v_{j,i}^2 is evaluated from squared
    frame entries; the uniform frame measure carries mass 1/gamma_m(d) and the
    projection push-forward costs a further factor gamma_m(m).
    """
    d = xi.d
    m = d - k
    p = 0.5 * weight_exponent(d, k)
    lam = np.linalg.eigvalsh(covariance(xi))
    lam = np.maximum(lam, 0.0)  # covariance is PSD up to rounding

    def worker(size, sub):
        frames = stiefel_frame_batch(d, m, size, sub, workers=1)
        return _kernels.eigen_trace_batch(frames, lam)

    sums = _chunked(worker, n, stream, workers)
    values = np.power(np.maximum(sums, 0.0), p)
    scale = gamma_product(m, m) * stiefel_mass((d, m))
    mean, err = mean_and_stderr(values)
    return scale * mean, scale * err


def quadratic_form_value(xi: Configuration) -> float:
    """(tr Var)^2 + 2 tr(Var^2), the candidate closed form when d(d-k) = 6."""
    var = covariance(xi)
    tv = float(np.trace(var))
    tv2 = float(np.trace(var @ var))
    return tv * tv + 2.0 * tv2


_QUADRATIC_PAIRS = {(3, 1), (6, 5)}


def i_weight_quadratic(xi: Configuration, k: int, calibration: dict | None = None) -> float:
    """kappa * ((tr Var)^2 + 2 tr Var^2) with kappa from the calibration file.

    Only defined when d(d-k) = 6, i.e. pairs (3,1) and (6,5).  Refuses to run
    without a calibrated constant for the pair.
    """
    d = xi.d
    if (d, k) not in _QUADRATIC_PAIRS:
        raise ValueError(f"quadratic closed form only applies to pairs {sorted(_QUADRATIC_PAIRS)}, got ({d}, {k})")
    table = calibration if calibration is not None else load_calibration()
    entry = table.get((d, k))
    if entry is None:
        raise CalibrationError(f"no calibrated constant for pair ({d}, {k}); run scripts/calibrate_weights.py")
    return entry.kappa * quadratic_form_value(xi)


def comparability_scan(
    pair, m_configs: int, n_samples: int, stream: SeededStream, workers: int = 1
) -> tuple[float, float]:
    """Empirical bounds of weight / (tr Var)^(exponent/2) over random
    unit-trace-variance configurations.  Returns (c_min, C_max)."""
    d, k = (pair.d, pair.k) if hasattr(pair, "d") else pair
    if m_configs < 1:
        raise ValueError("need at least one configuration")
    c_min = np.inf
    c_max = -np.inf
    for j in range(m_configs):
        sub = stream.child(j)
        xi = normalize_configuration(random_configuration(d, sub.child(0)))
        est, _ = i_weight_mc(xi, k, n_samples, sub.child(1), workers)
        c_min = min(c_min, est)
        c_max = max(c_max, est)
    return float(c_min), float(c_max)


# ----------------------------------------------------------------------------
# Calibration file: versioned key-value text, one line per pair.


@dataclass(frozen=True)
class CalibrationEntry:
    d: int
    k: int
    kappa: float
    stderr: float
    residual: float
    samples: int
    configs: int
    seed: int


def default_calibration_path() -> Path:
    return Path(importlib.resources.files("kplane_audit") / "data" / "weight_calibration.txt")


_calibration_cache: dict[Path, dict] = {}


def load_calibration(path: Path | None = None) -> dict:
    """Parse the calibration file into {(d, k): CalibrationEntry}."""
    path = Path(path) if path is not None else default_calibration_path()
    cached = _calibration_cache.get(path)
    if cached is not None:
        return cached
    if not path.exists():
        raise CalibrationError(f"calibration file not found: {path}")
    lines = path.read_text().splitlines()
    header = next((ln for ln in lines if ln.strip() and not ln.startswith("#")), "")
    if header.strip() != f"schema={CALIBRATION_SCHEMA}":
        raise CalibrationError(f"unrecognized calibration schema in {path}: {header!r}")
    table: dict = {}
    for ln in lines:
        ln = ln.strip()
        if not ln or ln.startswith("#") or ln.startswith("schema="):
            continue
        fields = dict(part.split("=", 1) for part in ln.split())
        entry = CalibrationEntry(
            d=int(fields["d"]),
            k=int(fields["k"]),
            kappa=float(fields["kappa"]),
            stderr=float(fields["stderr"]),
            residual=float(fields["residual"]),
            samples=int(fields["samples"]),
            configs=int(fields["configs"]),
            seed=int(fields["seed"]),
        )
        table[(entry.d, entry.k)] = entry
    _calibration_cache[path] = table
    return table


def write_calibration(entries, path: Path) -> None:
    lines = [f"schema={CALIBRATION_SCHEMA}"]
    for e in entries:
        lines.append(
            f"d={e.d} k={e.k} kappa={e.kappa:.17g} stderr={e.stderr:.17g} "
            f"residual={e.residual:.17g} samples={e.samples} configs={e.configs} seed={e.seed}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def calibrate_quadratic(
    d: int, k: int, n_samples: int, n_configs: int, seed: int, workers: int = 1
) -> CalibrationEntry:
    """Least-squares fit of kappa over a canonical seeded configuration suite.

    Fits weight_i ~ kappa * quadratic_form_i over n_configs unit-trace
    configurations; records the propagated stderr and the worst relative
    residual (which doubles as a proportionality audit)."""
    if (d, k) not in _QUADRATIC_PAIRS:
        raise ValueError(f"quadratic closed form only applies to pairs {sorted(_QUADRATIC_PAIRS)}, got ({d}, {k})")
    root = SeededStream(seed, (d, k))
    weights = np.empty(n_configs)
    errs = np.empty(n_configs)
    forms = np.empty(n_configs)
    for j in range(n_configs):
        sub = root.child(j)
        xi = normalize_configuration(random_configuration(d, sub.child(0)))
        weights[j], errs[j] = i_weight_mc(xi, k, n_samples, sub.child(1), workers)
        forms[j] = quadratic_form_value(xi)
    denom = float(np.sum(forms * forms))
    kappa = float(np.sum(weights * forms)) / denom
    stderr = float(np.sqrt(np.sum((forms * errs) ** 2))) / denom
    residual = float(np.max(np.abs(weights - kappa * forms) / np.abs(weights)))
    return CalibrationEntry(d, k, kappa, stderr, residual, n_samples, n_configs, seed)
