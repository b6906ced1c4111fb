"""Closed-form calculus of complex Gaussian packets exp(-x^T A x + b.x + c).

A is complex symmetric with positive-definite real part, which keeps every
packet integrable and closed under Fourier transform, free Schrodinger flow,
products, tensor products and integration over affine planes.

Branch handling: every determinant power is evaluated through per-eigenvalue
principal logarithms.  Eigenvalues of a complex symmetric matrix whose real
part is positive definite lie in the open right half-plane, so the principal
branch never crosses the cut and coincides with the continuation from real
positive-definite matrices.  (A naive sqrt of det A does not: accumulated
arguments can wrap past pi, e.g. along long Schrodinger flows.)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_LOG_PI = float(np.log(np.pi))
_LOG_2PI = float(np.log(2.0 * np.pi))


class PacketDomainError(ValueError):
    """Raised when an operation's preconditions on a packet are violated."""


def _symmetrize_exact(a: np.ndarray) -> np.ndarray:
    """Return (a + a^T)/2 stored so that M == M.T holds bitwise."""
    m = 0.5 * (a + a.T)
    upper = np.triu(m)
    return upper + np.triu(m, 1).T


@dataclass(frozen=True)
class GaussianPacket:
    """Immutable value x -> exp(-x^T A x + b.x + c) on R^n."""

    A: np.ndarray
    b: np.ndarray
    c: complex

    def __post_init__(self):
        A = _symmetrize_exact(np.array(self.A, dtype=np.complex128))
        b = np.array(self.b, dtype=np.complex128).reshape(-1)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise PacketDomainError(f"quadratic coefficient must be square, got shape {A.shape}")
        if b.shape[0] != A.shape[0]:
            raise PacketDomainError(f"linear coefficient length {b.shape[0]} != dimension {A.shape[0]}")
        re = np.ascontiguousarray(A.real)
        eigs = np.linalg.eigvalsh(re)
        scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
        if scale == 0.0 or eigs[0] <= 1e-12 * scale:
            raise PacketDomainError(
                f"real part of quadratic coefficient must be positive definite "
                f"(min eig {eigs[0]:.3e}, scale {scale:.3e})"
            )
        A.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", complex(self.c))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def __call__(self, x) -> complex | np.ndarray:
        return evaluate(self, x)


def isotropic_packet(n: int, alpha: complex, c: complex = 0.0) -> GaussianPacket:
    """exp(-alpha |x|^2 + c) on R^n; Re(alpha) > 0."""
    return GaussianPacket(complex(alpha) * np.eye(n), np.zeros(n), c)


def is_isotropic(p: GaussianPacket, tol: float = 1e-12) -> complex | None:
    """Return alpha when p = exp(-alpha |x|^2 + c), else None."""
    diag = np.diag(p.A)
    alpha = diag.mean()
    scale = max(float(np.max(np.abs(p.A))), 1e-300)
    if np.max(np.abs(p.A - alpha * np.eye(p.n))) > tol * scale:
        return None
    if np.max(np.abs(p.b), initial=0.0) > tol * np.sqrt(scale):
        return None
    return complex(alpha)


def evaluate(p: GaussianPacket, x) -> complex | np.ndarray:
    """exp(-x^T A x + b.x + c) for a point or a stack of points (..., n)."""
    xv = np.asarray(x, dtype=np.float64)
    if xv.shape[-1] != p.n:
        raise PacketDomainError(f"point dimension {xv.shape[-1]} != packet dimension {p.n}")
    quad = np.einsum("...i,ij,...j->...", xv, p.A, xv)
    lin = xv @ p.b
    out = np.exp(-quad + lin + p.c)
    return complex(out) if out.ndim == 0 else out


def gaussian_integral(A, b=None, c=0.0) -> complex | np.ndarray:
    """Closed form of int exp(-x^T A x + b.x + c) dx for stacked coefficients.

    A: (..., m, m) complex symmetric with Re positive definite; b: (..., m).
    Returns pi^(m/2) det(A)^(-1/2) exp(c + b^T A^(-1) b / 4) with the
    determinant power on the principal branch (see module docstring).
    """
    A = np.asarray(A, dtype=np.complex128)
    m = A.shape[-1]
    lam = np.linalg.eigvals(A)
    if np.any(lam.real <= 0.0):
        raise PacketDomainError("quadratic form has an eigenvalue off the right half-plane")
    logdet = np.sum(np.log(lam), axis=-1)
    expo = 0.5 * m * _LOG_PI - 0.5 * logdet + c
    if b is not None:
        b = np.asarray(b, dtype=np.complex128)
        sol = np.linalg.solve(A, b[..., None])[..., 0]
        expo = expo + 0.25 * np.einsum("...i,...i->...", b, sol)
    out = np.exp(expo)
    return complex(out) if np.ndim(out) == 0 else out


def total_integral(p: GaussianPacket) -> complex:
    return complex(gaussian_integral(p.A, p.b, p.c))


def fourier_transform(p: GaussianPacket) -> GaussianPacket:
    """Packet of xi -> int p(x) exp(-i x.xi) dx."""
    Ainv = np.linalg.inv(p.A)
    lam = np.linalg.eigvals(p.A)
    if np.any(lam.real <= 0.0):
        raise PacketDomainError("quadratic form has an eigenvalue off the right half-plane")
    logdet = complex(np.sum(np.log(lam)))
    sol = Ainv @ p.b
    c_hat = p.c + 0.25 * complex(p.b @ sol) + 0.5 * p.n * _LOG_PI - 0.5 * logdet
    return GaussianPacket(0.25 * Ainv, -0.5j * sol, c_hat)


def inverse_fourier_transform(p: GaussianPacket) -> GaussianPacket:
    """Inverse of fourier_transform: (2 pi)^(-n) reflected forward transform."""
    q = fourier_transform(p)
    return GaussianPacket(q.A, -q.b, q.c - q.n * _LOG_2PI)


def schrodinger_evolve(p: GaussianPacket, t: float) -> GaussianPacket:
    """Free flow of i u_t + Laplacian u = 0: multiply by exp(-i t |xi|^2) in frequency."""
    if t == 0.0:
        return p
    q = fourier_transform(p)
    shifted = GaussianPacket(q.A + 1j * t * np.eye(q.n), q.b, q.c)
    return inverse_fourier_transform(shifted)


def modulus_squared(p: GaussianPacket) -> GaussianPacket:
    """|p|^2; the coefficients are real."""
    return GaussianPacket(2.0 * p.A.real, 2.0 * p.b.real, 2.0 * p.c.real)


def tensor(*packets: GaussianPacket) -> GaussianPacket:
    """Product packet on the direct sum of the factors' spaces."""
    if not packets:
        raise PacketDomainError("tensor needs at least one packet")
    n = sum(p.n for p in packets)
    A = np.zeros((n, n), dtype=np.complex128)
    b = np.zeros(n, dtype=np.complex128)
    c = 0.0 + 0.0j
    pos = 0
    for p in packets:
        A[pos : pos + p.n, pos : pos + p.n] = p.A
        b[pos : pos + p.n] = p.b
        c += p.c
        pos += p.n
    return GaussianPacket(A, b, c)


def _require_real(p: GaussianPacket) -> None:
    scale = max(float(np.max(np.abs(p.A))), 1.0)
    if (
        np.max(np.abs(p.A.imag)) > 1e-12 * scale
        or np.max(np.abs(p.b.imag), initial=0.0) > 1e-12 * np.sqrt(scale)
        or abs(p.c.imag) > 1e-9
    ):
        raise PacketDomainError("operation requires a real-coefficient packet (take modulus_squared first)")


def lp_norm(p: GaussianPacket, q: float) -> float:
    """(int |p|^q)^(1/q) for real-coefficient packets, q >= 1."""
    if q < 1.0:
        raise PacketDomainError(f"exponent must be >= 1, got {q}")
    _require_real(p)
    val = gaussian_integral(q * p.A.real, q * p.b.real, q * p.c.real)
    return float(np.real(val)) ** (1.0 / q)


def integrate_over_affine_plane(p: GaussianPacket, plane) -> complex:
    """Integral of p over an affine k-plane {V y + w : y in R^k}.

    The orthonormal parametrization has unit Jacobian, so this is the total
    integral of the packet restricted to plane coordinates.
    """
    V = plane.frame.matrix
    w = plane.offset
    if V.shape[0] != p.n:
        raise PacketDomainError(f"plane lives in R^{V.shape[0]}, packet in R^{p.n}")
    Aq = _symmetrize_exact(V.T @ p.A @ V)
    Aw = p.A @ w
    bq = V.T @ (p.b - 2.0 * Aw)
    cq = p.c + p.b @ w - w @ Aw
    return complex(gaussian_integral(Aq, bq, cq))


def plane_offset_packet(p: GaussianPacket, V: np.ndarray, B: np.ndarray) -> GaussianPacket:
    """The plane integral as a packet in the perpendicular offset.

    For a fixed orientation V (d x k, orthonormal columns) and perpendicular
    basis B (d x m, orthonormal, B^T V = 0), returns the packet q on R^m with
    q(z) = integral of p over the plane {V y + B z}.
    """
    Aq = V.T @ p.A @ V
    Aq_inv = np.linalg.inv(Aq)
    lam = np.linalg.eigvals(Aq)
    if np.any(lam.real <= 0.0):
        raise PacketDomainError("restricted quadratic form left the right half-plane")
    logdet = complex(np.sum(np.log(lam)))
    AV = p.A @ V
    Vtb = V.T @ p.b
    A_off = B.T @ (p.A - AV @ Aq_inv @ AV.T) @ B
    b_off = B.T @ (p.b - AV @ (Aq_inv @ Vtb))
    k = V.shape[1]
    c_off = p.c + 0.25 * complex(Vtb @ (Aq_inv @ Vtb)) + 0.5 * k * _LOG_PI - 0.5 * logdet
    return GaussianPacket(A_off, b_off, c_off)
