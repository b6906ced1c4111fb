"""Singular pairings against the collinearity distribution family.

The pairing of a Gaussian packet F on R^(d(d+1)) with the order-k singular
distribution is *defined operationally* through the Stiefel-matrix integral
representation composed with the difference map L: for each orientation frame
V the inner integral over (Y, x_last) is a plain Gaussian integral evaluated
in closed form, and only the orientation average is ever sampled.  For d = 2
an independent polar-coordinates oracle integrates the delta of the
determinant directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .constants import d_constant, gamma_product, grassmann_mass, stiefel_mass
from .gaussian import GaussianPacket, gaussian_integral, is_isotropic, tensor
from .manifolds import _chunked, mean_and_stderr, stiefel_frame_batch
from .records import FAIL, PASS, AuditRecord, Measurement
from .streams import SeededStream
from .weights import Configuration, covariance

RUBIN_EXACT = "rubin_exact"
RUBIN_MC = "rubin_mc"
POLAR_ORACLE = "polar_oracle"


@dataclass(frozen=True)
class PairingResult:
    value: float
    stderr: float
    method: str

    def __post_init__(self):
        if self.stderr < 0.0:
            raise ValueError("stderr must be nonnegative")


def rho(points) -> float:
    """Signed volume determinant of the bordered point matrix.

    Equals det(x_2 - x_1, ..., x_{d+1} - x_1); vanishes exactly on
    co-(d-1)-planar configurations.
    """
    pts = points.points if isinstance(points, Configuration) else np.asarray(points, dtype=np.float64)
    diffs = (pts[1:] - pts[0]).T  # columns x_i - x_1
    return float(np.linalg.det(diffs))


def apply_L(points) -> np.ndarray:
    """(x_1, ..., x_{d+1}) -> (x_1 - x_{d+1}, ..., x_d - x_{d+1}, x_{d+1})."""
    pts = points.points if isinstance(points, Configuration) else np.asarray(points, dtype=np.float64)
    out = pts - pts[-1]
    out[-1] = pts[-1]
    return out


def apply_L_inverse(z) -> Configuration:
    """Inverse difference map: (z_1 + z_last, ..., z_d + z_last, z_last)."""
    zz = np.asarray(z, dtype=np.float64)
    if zz.ndim == 1:
        n = zz.size
        d = int(round((np.sqrt(1 + 4 * n) - 1) / 2))
        if d * (d + 1) != n:
            raise ValueError(f"flat vector of length {n} is not a stacked configuration")
        zz = zz.reshape(d + 1, d)
    out = zz + zz[-1]
    out[-1] = zz[-1]
    return Configuration(out)


def _rubin_map(frames: np.ndarray, d: int, k: int) -> np.ndarray:
    """Stack of linear maps (Y, w) -> (V y_1 + w, ..., V y_d + w, w).

    frames: (n, d, k).  Returns (n, d(d+1), k d + d).
    """
    n = frames.shape[0]
    big = d * (d + 1)
    small = k * d + d
    T = np.zeros((n, big, small))
    eye = np.eye(d)
    for i in range(d):
        T[:, i * d : (i + 1) * d, i * k : (i + 1) * k] = frames
        T[:, i * d : (i + 1) * d, k * d :] = eye
    T[:, d * d :, k * d :] = eye
    return T


def _rubin_inner_values(F: GaussianPacket, frames: np.ndarray, d: int, k: int) -> np.ndarray:
    """Closed-form inner Gaussian integrals, one per orientation frame."""
    T = _rubin_map(frames, d, k)
    A_in = np.einsum("nDa,DE,nEb->nab", T, F.A, T)
    b_in = np.einsum("nDa,D->na", T, F.b)
    return np.asarray(gaussian_integral(A_in, b_in, F.c))


def _real_part_checked(values: np.ndarray | complex, what: str) -> np.ndarray:
    v = np.atleast_1d(np.asarray(values))
    scale = float(np.max(np.abs(v)))
    if scale > 0 and float(np.max(np.abs(v.imag))) > 1e-9 * scale:
        raise ValueError(f"{what} produced a significantly complex value; pair a real-valued packet")
    return v.real


def pair_Ak_gaussian(F: GaussianPacket, pair, n: int, stream: SeededStream, workers: int = 1) -> PairingResult:
    """Pairing of F with the order-k collinearity distribution on R^(d(d+1)).

    Radial packets need a single orientation (exact, stderr 0).  For
    (d, k) = (2, 1) the orientation circle is integrated by a doubling
    trapezoid rule, which is spectrally exact; otherwise the orientation
    average is seeded Monte Carlo over Haar frames.
    """
    d, k = (pair.d, pair.k) if hasattr(pair, "d") else pair
    if F.n != d * (d + 1):
        raise ValueError(f"packet dimension {F.n} != d(d+1) = {d * (d + 1)}")
    scale = stiefel_mass((d, k)) / gamma_product(d - k, d - k)

    if is_isotropic(F) is not None:
        frame = np.eye(d)[:, :k][None, :, :]
        value = _real_part_checked(_rubin_inner_values(F, frame, d, k), "radial pairing")[0]
        return PairingResult(float(scale * value), 0.0, RUBIN_EXACT)

    if (d, k) == (2, 1):
        # Orientation average over the unit circle: trapezoid doubling until
        # the relative change is at rounding level.
        m = 64
        prev = None
        while m <= 8192:
            thetas = 2.0 * np.pi * np.arange(m) / m
            frames = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)[:, :, None]
            vals = _real_part_checked(_rubin_inner_values(F, frames, 2, 1), "circle pairing")
            mean = float(np.mean(vals))
            if prev is not None and abs(mean - prev) <= 1e-12 * max(abs(mean), 1e-300):
                return PairingResult(scale * mean, 0.0, RUBIN_EXACT)
            prev = mean
            m *= 2
        raise RuntimeError("circle quadrature did not stabilize")

    def worker(size, sub):
        frames = stiefel_frame_batch(d, k, size, sub, workers=1)
        return _real_part_checked(_rubin_inner_values(F, frames, d, k), "pairing")

    values = _chunked(worker, n, stream, workers)
    mean, err = mean_and_stderr(values)
    return PairingResult(scale * mean, scale * err, RUBIN_MC)


def delta_rho_pair_2d(F: GaussianPacket, tol: float = 1e-10) -> PairingResult:
    """Independent oracle for the d = 2 pairing with delta of the determinant.

    In polar coordinates for the two difference vectors the delta integrates
    out exactly, leaving x_1 and one signed radius as closed-form Gaussian
    directions and a deterministic quadrature over (theta, r).
    """
    if F.n != 6:
        raise ValueError(f"polar oracle requires a packet on R^6, got R^{F.n}")

    def outer(theta: float) -> complex:
        c, s = np.cos(theta), np.sin(theta)
        # x = T (x1, r3) + r2 * o with blocks (x1, x1 + r2 w, x1 + r3 w), w = (c, s)
        T = np.array(
            [
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [1.0, 0.0, c],
                [0.0, 1.0, s],
            ]
        )
        o = np.array([0.0, 0.0, c, s, 0.0, 0.0])
        A3 = T.T @ F.A @ T
        Ao = F.A @ o
        b_lin = T.T @ F.b
        b_slope = -2.0 * (T.T @ Ao)
        c_lin = complex(F.b @ o)
        c_quad = -complex(o @ Ao)

        def integrand(r2: float) -> complex:
            return gaussian_integral(A3, b_lin + r2 * b_slope, F.c + r2 * c_lin + r2 * r2 * c_quad)

        val, _ = integrate.quad(
            integrand, 0.0, np.inf, epsabs=tol * 1e-2, epsrel=tol * 1e-2, limit=200, complex_func=True
        )
        return val

    value, err = integrate.quad(outer, 0.0, 2.0 * np.pi, epsabs=tol, epsrel=tol, limit=200, complex_func=True)
    value = complex(value)
    if abs(value.imag) > 1e-9 * max(abs(value), 1e-300):
        raise ValueError("polar oracle produced a significantly complex value; pair a real-valued packet")
    return PairingResult(float(value.real), float(abs(err)), POLAR_ORACLE)


def plane_offset_coefficients(p: GaussianPacket, V: np.ndarray, B: np.ndarray):
    """Batched coefficients of z -> integral of p over the plane {V y + B z}.

    V: (n, d, k) orientation frames, B: (n, d, m) perpendicular bases.
    Returns (A_off (n,m,m), b_off (n,m), c_off (n,)) as in
    gaussian.plane_offset_packet but for stacks.
    """
    k = V.shape[-1]
    Aq = np.einsum("nia,ij,njb->nab", V, p.A, V)
    Aq_inv = np.linalg.inv(Aq)
    lam = np.linalg.eigvals(Aq)
    if np.any(lam.real <= 0.0):
        raise ValueError("restricted quadratic form left the right half-plane")
    logdet = np.sum(np.log(lam), axis=-1)
    AV = np.einsum("ij,nja->nia", p.A, V)
    Vtb = np.einsum("nia,i->na", V, p.b)
    inner = p.A[None, :, :] - np.einsum("nia,nab,njb->nij", AV, Aq_inv, AV)
    A_off = np.einsum("nim,nij,njl->nml", B, inner, B)
    b_vec = p.b[None, :] - np.einsum("nia,nab,nb->ni", AV, Aq_inv, Vtb)
    b_off = np.einsum("nim,ni->nm", B, b_vec)
    c_off = p.c + 0.25 * np.einsum("na,nab,nb->n", Vtb, Aq_inv, Vtb) + 0.5 * k * np.log(np.pi) - 0.5 * logdet
    return A_off, b_off, c_off


def _perpendicular_bases(frames: np.ndarray) -> np.ndarray:
    """(n, d, d-k) orthonormal complements of the frames' column spans."""
    q, _ = np.linalg.qr(frames, mode="complete")
    return q[:, :, frames.shape[-1] :]


def product_transform_values(packets, frames: np.ndarray) -> np.ndarray:
    """Per-orientation value of int prod_i (plane transform of f_i) over offsets.

    For each frame the product of the transforms is itself a Gaussian packet
    in the perpendicular offset, so the offset integral is closed form.
    """
    B = _perpendicular_bases(frames)
    n = frames.shape[0]
    m = B.shape[-1]
    A_tot = np.zeros((n, m, m), dtype=np.complex128)
    b_tot = np.zeros((n, m), dtype=np.complex128)
    c_tot = np.zeros(n, dtype=np.complex128)
    for f in packets:
        A_off, b_off, c_off = plane_offset_coefficients(f, frames, B)
        A_tot += A_off
        b_tot += b_off
        c_tot += c_off
    return np.asarray(gaussian_integral(A_tot, b_tot, c_tot))


def drury_audit(packets, pair, n: int, stream: SeededStream, seed: int | None = None, workers: int = 1) -> AuditRecord:
    """Audit of the product identity: singular pairing of the tensor product
    vs the D-constant times the integral of the product of plane transforms.

    Isotropic centred data make both sides orientation-independent and exact;
    otherwise both sides are independently seeded Monte Carlo estimates and
    the verdict is a 4-sigma joint comparison.
    """
    d, k = (pair.d, pair.k) if hasattr(pair, "d") else pair
    packets = list(packets)
    if len(packets) != d + 1:
        raise ValueError(f"need d+1 = {d + 1} packets, got {len(packets)}")
    F = tensor(*packets)
    lhs = pair_Ak_gaussian(F, (d, k), n, stream.child(0), workers)

    all_isotropic = all(is_isotropic(f) is not None for f in packets)
    dconst = d_constant((d, k))
    if all_isotropic:
        frames = np.eye(d)[:, :k][None, :, :]
        vals = _real_part_checked(product_transform_values(packets, frames), "product transform")
        rhs_value = dconst * grassmann_mass((d, k)) * float(vals[0])
        rhs_err = 0.0
    elif (d, k) == (2, 1):
        # line orientations have period pi; doubling trapezoid is spectrally exact
        m = 64
        prev = None
        while m <= 8192:
            thetas = np.pi * np.arange(m) / m
            frames = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)[:, :, None]
            vals = _real_part_checked(product_transform_values(packets, frames), "product transform")
            mean = float(np.mean(vals))
            if prev is not None and abs(mean - prev) <= 1e-12 * max(abs(mean), 1e-300):
                break
            prev = mean
            m *= 2
        else:
            raise RuntimeError("orientation quadrature did not stabilize")
        rhs_value = dconst * grassmann_mass((2, 1)) * mean
        rhs_err = 0.0
    else:

        def worker(size, sub):
            frames = stiefel_frame_batch(d, k, size, sub, workers=1)
            return _real_part_checked(product_transform_values(packets, frames), "product transform")

        values = _chunked(worker, n, stream.child(1), workers)
        mean, err = mean_and_stderr(values)
        rhs_value = dconst * grassmann_mass((d, k)) * mean
        rhs_err = dconst * grassmann_mass((d, k)) * err

    joint = float(np.hypot(lhs.stderr, rhs_err))
    if joint == 0.0:
        tolerance = 1e-8
        ok = abs(lhs.value - rhs_value) <= tolerance * max(abs(rhs_value), 1e-300)
        note = "both sides exact (closed forms)"
    else:
        tolerance = 4.0
        ok = abs(lhs.value - rhs_value) <= tolerance * joint
        note = f"joint stderr {joint:.3e}; sides agree within {abs(lhs.value - rhs_value) / joint:.2f} sigma"
    return AuditRecord(
        claim=f"product-identity-({d},{k})",
        suite="drury",
        measurements=[
            Measurement("pairing_side", lhs.value, lhs.stderr),
            Measurement("transform_side", rhs_value, rhs_err),
        ],
        ratio=lhs.value / rhs_value if rhs_value else None,
        tolerance=tolerance,
        verdict=PASS if ok else FAIL,
        seed=seed if seed is not None else stream.seed,
        note=note,
    )


def m_matrix(d: int) -> np.ndarray:
    """I + (sqrt(d+1) - 1) u u^T with u the unit vector along (1, ..., 1)."""
    u = np.full(d, 1.0 / np.sqrt(d))
    return np.eye(d) + (np.sqrt(d + 1.0) - 1.0) * np.outer(u, u)


def m_matrix_inverse(d: int) -> np.ndarray:
    u = np.full(d, 1.0 / np.sqrt(d))
    return np.eye(d) + (1.0 / np.sqrt(d + 1.0) - 1.0) * np.outer(u, u)


def covariance_lemma_check(omega: Configuration) -> float:
    """Max-abs defect of the factorization of the covariance matrix.

    Columns of the difference matrix, twisted by the inverse of m_matrix,
    factor the covariance: Omega_M Omega_M^T = (d+1) Var.  Returns the
    max-abs difference of the two sides.
    """
    d = omega.d
    pts = omega.points
    diff = (pts[:d] - pts[d]).T  # d x d, column i = omega_i - omega_{d+1}
    omega_m = diff @ m_matrix_inverse(d)
    lhs = omega_m @ omega_m.T
    rhs = (d + 1.0) * covariance(omega)
    return float(np.max(np.abs(lhs - rhs)))


def support_predicate(xi, eta, k: int, tol: float = 1e-9) -> bool:
    """Membership test for the equal-energy, equal-momentum, co-k-planar set.

    True iff the squared norms match, the point sums match, and the
    difference vectors span (after centering) a space of numerical rank <= k.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    x = xi.points if isinstance(xi, Configuration) else np.asarray(xi, dtype=np.float64)
    y = eta.points if isinstance(eta, Configuration) else np.asarray(eta, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"mismatched shapes {x.shape} vs {y.shape}")
    if abs(np.sum(x * x) - np.sum(y * y)) > tol:
        return False
    if np.linalg.norm(x.sum(axis=0) - y.sum(axis=0)) > tol:
        return False
    diffs = x - y
    centered = diffs - diffs.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False)
    if svals[0] <= tol:
        return True
    return bool(np.all(svals[k:] <= tol * svals[0]))
