"""Grid-based numerical path: periodic spectral propagator, discrete X-ray
transform, and the mixed-norm space-time functionals for arbitrary data.

Two regimes make the time integral tractable at fixed resolution.  Up to a
switch time the flow is computed directly with the spectral propagator; the
audit refuses any state whose boundary amplitude exceeds the wrap-around
envelope.  Past the switch time the exact dispersive factorization
u(x, t) = (4 pi i t)^{-d/2} e^{i|x|^2/4t} (F[e^{i|.|^2/4t} f])(x / 2t)
turns the slowly decaying t^(-2) tail into a smooth integral over tau = 1/t
on a compact interval, evaluated entirely from grid fields (chirp multiply,
zero-padded FFT, sinogram).  No closed-form Gaussian shortcut enters this
path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import _kernels
from .constants import c_constant, d_constant, grassmann_mass, sphere_area
from .gaussian import (
    GaussianPacket,
    is_isotropic,
    isotropic_packet,
    lp_norm,
    modulus_squared,
    plane_offset_packet,
    schrodinger_evolve,
    total_integral,
)
from .manifolds import _chunked, mean_and_stderr
from .pairing import pair_Ak_gaussian
from .records import PASS, REPORT_ONLY, AuditRecord, Measurement
from .streams import SeededStream
from .weights import weight_exponent

ENVELOPE = 1e-10


class ResolutionError(RuntimeError):
    """The requested computation exceeds the grid's trustworthy envelope."""


@dataclass(frozen=True)
class GridField:
    """Periodic sampled complex field on [-L, L)^d, d in {1, 2}.

    values[i] (resp. values[i, j]) samples f(x_i) (f(x_i, y_j)) with
    x_i = -L + i * (2L / n); n must be a power of two.
    """

    half_extent: float
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        if v.ndim not in (1, 2):
            raise ValueError(f"field must be 1-d or 2-d, got {v.ndim}-d")
        n = v.shape[0]
        if any(s != n for s in v.shape) or n & (n - 1) or n < 2:
            raise ValueError(f"grid must be square with a power-of-two side, got {v.shape}")
        if self.half_extent <= 0:
            raise ValueError("half extent must be positive")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def d(self) -> int:
        return self.values.ndim

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def step(self) -> float:
        return 2.0 * self.half_extent / self.n

    def axis(self) -> np.ndarray:
        return -self.half_extent + self.step * np.arange(self.n)

    def norm_squared(self) -> float:
        """Discrete squared L2 norm, sum |f|^2 h^d."""
        return float(np.sum(np.abs(self.values) ** 2) * self.step**self.d)

    def boundary_ratio(self) -> float:
        """max |f| on the outermost grid ring relative to the global max."""
        mags = np.abs(self.values)
        peak = float(mags.max())
        if peak == 0.0:
            return 0.0
        if self.d == 1:
            edge = max(mags[0], mags[-1])
        else:
            edge = max(mags[0, :].max(), mags[-1, :].max(), mags[:, 0].max(), mags[:, -1].max())
        return float(edge) / peak


@dataclass(frozen=True)
class SinogramGrid:
    """Line-integral samples over directions [0, pi) and signed offsets."""

    angles: np.ndarray
    offsets: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=np.float64)
        s = np.asarray(self.offsets, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if a.size == 0 or s.size == 0 or v.shape != (a.size, s.size):
            raise ValueError(f"inconsistent sinogram shapes {a.shape} {s.shape} {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("sinogram values must be finite")

    @property
    def angle_step(self) -> float:
        return float(np.pi / len(self.angles))

    @property
    def offset_step(self) -> float:
        return float(self.offsets[1] - self.offsets[0])


def sample_packet_on_grid(p: GaussianPacket, n: int, half_extent: float) -> GridField:
    if p.n not in (1, 2):
        raise ValueError("grid sampling supports 1-d and 2-d packets")
    x = -half_extent + (2.0 * half_extent / n) * np.arange(n)
    if p.n == 1:
        pts = x[:, None]
    else:
        gx, gy = np.meshgrid(x, x, indexing="ij")
        pts = np.stack([gx, gy], axis=-1)
    return GridField(half_extent, p(pts))


def evolve_grid(f: GridField, t: float) -> GridField:
    """Free Schrodinger flow via the periodic Fourier multiplier exp(-i t |k|^2)."""
    if t == 0.0:
        return f
    k = 2.0 * np.pi * np.fft.fftfreq(f.n, d=f.step)
    if f.d == 1:
        ksq = k**2
    else:
        ksq = k[:, None] ** 2 + k[None, :] ** 2
    spec = np.fft.fftn(f.values)
    out = np.fft.ifftn(np.exp(-1j * t * ksq) * spec)
    return GridField(f.half_extent, out)


def continuous_fourier_grid(f: GridField, pad: int = 1) -> GridField:
    """The continuous Fourier transform sampled on the dual lattice.

    With the grid convention x_i = -L + i h the continuous transform at the
    shifted frequencies is h^d (-1)^(sum of integer indices) times the DFT;
    zero padding by `pad` refines the frequency step by the same factor.
    Returns a GridField of half extent pi n_pad / (2 L_pad) in frequency.
    """
    if pad < 1 or pad & (pad - 1):
        raise ValueError("pad must be a power of two")
    n = f.n
    npad = n * pad
    if f.d == 1:
        buf = np.zeros(npad, dtype=np.complex128)
        lo = (npad - n) // 2
        buf[lo : lo + n] = f.values
    else:
        buf = np.zeros((npad, npad), dtype=np.complex128)
        lo = (npad - n) // 2
        buf[lo : lo + n, lo : lo + n] = f.values
    # embedding shifts the first sample to -pad*L, consistent with the phase rule
    m = np.fft.fftshift(np.fft.fftfreq(npad, d=1.0 / npad)).astype(np.int64)
    sign = np.where(m % 2 == 0, 1.0, -1.0)
    spec = np.fft.fftshift(np.fft.fftn(buf))
    if f.d == 1:
        spec = spec * sign
    else:
        spec = spec * sign[:, None] * sign[None, :]
    dxi = np.pi / (pad * f.half_extent)
    return GridField(0.5 * npad * dxi, spec * f.step**f.d)


def crop_center(f: GridField, n_keep: int) -> GridField:
    """Central n_keep-sized window of a field (n_keep a power of two)."""
    if n_keep > f.n:
        raise ValueError("cannot crop to a larger grid")
    lo = (f.n - n_keep) // 2
    sl = slice(lo, lo + n_keep)
    vals = f.values[sl] if f.d == 1 else f.values[sl, sl]
    return GridField(f.half_extent * n_keep / f.n, vals)


def xray_grid(f: GridField, m_angles: int) -> SinogramGrid:
    """Discrete X-ray transform of a real 2-d field.

    Angles are m uniform samples of [0, pi); offsets and the integration
    parameter run over n uniform samples of [-L sqrt(2), L sqrt(2)) so that
    every line meeting the square is covered.  Interpolation is bilinear,
    values outside the grid count as zero.
    """
    if f.d != 2:
        raise ValueError("X-ray transform requires a 2-d field")
    if np.max(np.abs(f.values.imag)) > 1e-12 * max(np.max(np.abs(f.values)), 1e-300):
        raise ValueError("X-ray transform expects a real field (e.g. a modulus square)")
    if m_angles < 1:
        raise ValueError("need at least one angle")
    diag = f.half_extent * np.sqrt(2.0)
    span = np.arange(f.n) * (2.0 * diag / f.n) - diag
    angles = np.arange(m_angles) * (np.pi / m_angles)
    values = _kernels.sinogram_project(np.ascontiguousarray(f.values.real), angles, f.half_extent, span, span)
    return SinogramGrid(angles, span, values)


def sinogram_cubed_mass(sino: SinogramGrid) -> float:
    """Triple-power mass: integral over angle and offset of the cubed values."""
    return float(np.sum(sino.values**3) * sino.offset_step * sino.angle_step)


def _adaptive_simpson(fn, a: float, b: float, rel_tol: float, max_levels: int = 9, min_levels: int = 3):
    """Composite Simpson with node doubling; reuses previous evaluations.

    Returns (value, last_change).  Deterministic: node placement depends only
    on (a, b) and the level.
    """
    if b <= a:
        raise ValueError("empty integration interval")
    evals: dict[int, float] = {}

    def simpson_at(level: int) -> float:
        n = 2**level
        h = (b - a) / n
        total = 0.0
        denom = 2**max_levels
        for i in range(n + 1):
            key = i * (denom // n)
            if key not in evals:
                evals[key] = fn(a + i * h)
            w = 1.0 if i in (0, n) else (4.0 if i % 2 else 2.0)
            total += w * evals[key]
        return total * h / 3.0

    prev = simpson_at(min_levels)
    for level in range(min_levels + 1, max_levels + 1):
        cur = simpson_at(level)
        change = abs(cur - prev)
        if change <= rel_tol * max(abs(cur), 1e-300):
            return cur, change
        prev = cur
    return prev, change


def _require_envelope(f: GridField, what: str) -> None:
    ratio = f.boundary_ratio()
    if ratio > ENVELOPE:
        raise ResolutionError(
            f"{what}: boundary amplitude ratio {ratio:.2e} exceeds the wrap-around envelope {ENVELOPE:.0e}; "
            "shrink the time window or enlarge the grid"
        )


def theorem11_functional_numeric(
    f: GridField,
    m_angles: int = 96,
    t_switch: float = 0.5,
    rel_tol: float = 1e-6,
    pad: int = 4,
) -> float:
    """Grid value of the sharp-ratio functional for arbitrary 2-d data.

    Computes int dt int_0^pi dtheta int ds [X(|u(t)|^2)]^3 divided by the
    cubed discrete squared norm of the datum.  The direct propagator covers
    |t| <= t_switch inside the wrap-around envelope; the dispersive
    factorization covers the tail as a compact integral over tau = 1/t.
    """
    if f.d != 2:
        raise ValueError("functional requires a 2-d field")
    _require_envelope(f, "datum")
    norm_sq = f.norm_squared()
    if norm_sq == 0.0:
        raise ValueError("zero datum")
    real_datum = bool(np.max(np.abs(f.values.imag)) <= 1e-14 * np.max(np.abs(f.values)))

    x = f.axis()
    rsq = x[:, None] ** 2 + x[None, :] ** 2

    def direct_mass(t: float) -> float:
        u = evolve_grid(f, t)
        _require_envelope(u, f"direct path at t={t:.4g}")
        m = GridField(f.half_extent, np.abs(u.values) ** 2)
        return sinogram_cubed_mass(xray_grid(m, m_angles))

    def far_mass(tau: float) -> float:
        # |u(1/tau)|^2 = (4 pi t)^(-2) |F[chirp f](x / 2t)|^2 collapses, after
        # the dilation change of variables, to W(t) / (256 pi^6 t^2) with W
        # the cubed sinogram mass of the chirped-transform field.
        chirped = GridField(f.half_extent, f.values * np.exp(0.25j * tau * rsq))
        full = continuous_fourier_grid(chirped, pad=pad)
        n_keep = f.n
        while True:  # widen the frequency window until the envelope holds
            q = crop_center(full, n_keep)
            if q.boundary_ratio() <= ENVELOPE:
                break
            if n_keep >= full.n:
                _require_envelope(q, f"far path at tau={tau:.4g}")
            n_keep *= 2
        m = GridField(q.half_extent, np.abs(q.values) ** 2)
        return sinogram_cubed_mass(xray_grid(m, m_angles)) / (256.0 * np.pi**6)

    def half_integral(sign: float) -> float:
        near, _ = _adaptive_simpson(lambda t: direct_mass(sign * t), 0.0, t_switch, rel_tol)
        far, _ = _adaptive_simpson(lambda tau: far_mass(sign * tau), 0.0, 1.0 / t_switch, rel_tol)
        return near + far

    total = 2.0 * half_integral(1.0) if real_datum else half_integral(1.0) + half_integral(-1.0)
    return total / norm_sq**3


def theorem11_functional_packet(f: GaussianPacket, m_theta: int = 64, quad_tol: float = 1e-10) -> float:
    """Closed-form path of the sharp-ratio functional for a Gaussian datum.

    Per time the evolved modulus square restricts to every line as an explicit
    1-d Gaussian, so the offset and cube integrals are exact; the direction
    integral is a trapezoid over [0, pi) (spectrally accurate, and constant
    for radial data); only the final time integral is adaptive quadrature.
    """
    if f.n != 2:
        raise ValueError("datum must live on R^2")
    norm_sq = float(np.real(total_integral(modulus_squared(f))))

    thetas = np.arange(m_theta) * (np.pi / m_theta)
    frames = [
        (np.array([[np.cos(t)], [np.sin(t)]]), np.array([[-np.sin(t)], [np.cos(t)]])) for t in thetas
    ]

    def line_mass(t: float) -> float:
        m = modulus_squared(schrodinger_evolve(f, t))
        if is_isotropic(m) is not None:
            v, b = frames[0]
            return np.pi * lp_norm(plane_offset_packet(m, v, b), 3.0) ** 3
        vals = [lp_norm(plane_offset_packet(m, v, b), 3.0) ** 3 for v, b in frames]
        return np.pi * float(np.mean(vals))

    val, err = integrate.quad(line_mass, -np.inf, np.inf, epsabs=quad_tol, epsrel=quad_tol, limit=400)
    if err > 1e-6 * abs(val):
        raise ResolutionError(f"time quadrature error estimate {err:.2e} too large")
    return val / norm_sq**3


def theorem11_functional_gaussian(alpha: float) -> float:
    """The closed-form ratio for the isotropic datum exp(-alpha |x|^2)."""
    if alpha <= 0:
        raise ValueError("width parameter must be positive")
    return theorem11_functional_packet(isotropic_packet(2, alpha))


def _sphere_weight_values(d: int, k: int, size: int, sub: SeededStream) -> np.ndarray:
    """Joint samples of (tr P Var_omega)^(exponent/2) for omega uniform on the
    unit sphere of R^(d(d+1)) and P Haar on the complementary Grassmannian."""
    m = d - k
    p = 0.5 * weight_exponent(d, k)
    gen = sub.generator()
    flat = gen.standard_normal((size, d * (d + 1)))
    flat /= np.linalg.norm(flat, axis=1, keepdims=True)
    pts = flat.reshape(size, d + 1, d)
    diffs = pts[:, :, None, :] - pts[:, None, :, :]
    var = np.einsum("nijk,nijl->nkl", diffs, diffs) / (2.0 * (d + 1) ** 2)
    if m in (1, d - 1):
        g = gen.standard_normal((size, d))
        q = g / np.linalg.norm(g, axis=1, keepdims=True)
        t = np.einsum("ni,nij,nj->n", q, var, q)
        if m != 1:
            t = np.einsum("nii->n", var) - t
    else:
        from .manifolds import _orthonormalize

        frames = _orthonormalize(gen.standard_normal((size, d, m)))
        t = np.einsum("nia,nij,nja->n", frames, var, frames)
    return np.power(np.maximum(t, 0.0), p)


def theorem22_radial_audit(
    beta: float, pair, n: int, stream: SeededStream, seed: int | None = None, workers: int = 1
) -> AuditRecord:
    """Space-time pairing audit for the radial datum exp(-beta |x|^2).

    Left side: the time integral of the singular pairing of the evolved
    modulus square (radial, hence exact per time).  Right side: the claimed
    sharp form pi C D (2 pi)^(-2 d(d+1)) times the weighted squared transform
    of the datum, with the radial factor by quadrature and the spherical
    average of the weight by joint Monte Carlo.  Verdict: pass when the ratio
    is within 3 stderr of 1, otherwise report-only with the measured factor.
    """
    if beta <= 0:
        raise ValueError("width parameter must be positive")
    d, k = (pair.d, pair.k) if hasattr(pair, "d") else pair
    big = d * (d + 1)
    F = isotropic_packet(big, beta)

    def lhs_integrand(t: float) -> float:
        m = modulus_squared(schrodinger_evolve(F, t))
        return pair_Ak_gaussian(m, (d, k), 0, stream).value

    half, err = integrate.quad(lhs_integrand, 0.0, np.inf, epsabs=1e-12, epsrel=1e-11, limit=400)
    lhs = 2.0 * half

    expo = weight_exponent(d, k)
    radial, _ = integrate.quad(
        lambda r: np.exp(-r * r / (2.0 * beta)) * r ** (expo + big - 1), 0.0, np.inf, epsabs=1e-13, epsrel=1e-12
    )
    values = _chunked(lambda size, sub: _sphere_weight_values(d, k, size, sub), n, stream.child(1), workers) if expo > 0 else np.ones(max(n, 1))
    mean, merr = mean_and_stderr(values)
    sphere_avg = grassmann_mass((d, d - k)) * mean
    sphere_err = grassmann_mass((d, d - k)) * merr if expo > 0 else 0.0
    weighted = (np.pi / beta) ** big * radial * sphere_area(big - 1) * sphere_avg
    weighted_err = (np.pi / beta) ** big * radial * sphere_area(big - 1) * sphere_err
    prefactor = np.pi * c_constant((d, k)) * d_constant((d, k)) / (2.0 * np.pi) ** (2 * big)
    rhs = prefactor * weighted
    rhs_err = prefactor * weighted_err

    ratio = lhs / rhs
    ratio_err = abs(ratio) * (rhs_err / rhs) if rhs else 0.0
    ok = abs(ratio - 1.0) <= 3.0 * ratio_err
    return AuditRecord(
        claim=f"radial-equality-({d},{k})",
        suite="theorem22",
        measurements=[
            Measurement("time_side", lhs, 2.0 * err),
            Measurement("weighted_side", rhs, rhs_err),
            Measurement("ratio", ratio, ratio_err),
        ],
        reference=1.0,
        ratio=ratio,
        tolerance=3.0 if ok else None,
        verdict=PASS if ok else REPORT_ONLY,
        seed=seed if seed is not None else stream.seed,
        note=(
            "equality holds at the stated constant"
            if ok
            else f"measured factor {ratio:.6f} vs claimed 1; constant is normalization-sensitive, reported as measured"
        ),
    )


def sphere6_transform_radial(r: float) -> float:
    """Radial profile of the transform of uniform surface measure on the unit
    sphere of R^6: (2 pi)^3 J_2(r) / r^2, with the series limit at the origin."""
    from scipy.special import jv

    if r < 1e-3:
        return (2.0 * np.pi) ** 3 * (0.125 - r * r / 96.0 + r**4 / 3072.0)
    return float((2.0 * np.pi) ** 3 * jv(2, r) / (r * r))


def extension_audit_2d(r_max: float = 400.0, seed: int = 0) -> AuditRecord:
    """Stretch audit: pairing of the squared sphere transform in R^6 against
    the claimed sharp constant for constant densities.

    The radial reduction collapses the pairing to a 1-d Bessel-type integral
    int J_2(r)^2 / r dr, integrated piecewise to r_max with the asymptotic
    tail added analytically; the tail bound doubles as the error estimate.
    """
    from scipy.special import jv

    from .pairing import _rubin_map

    segments = np.linspace(0.0, r_max, int(r_max / 25) + 1)
    q_val = 0.0
    q_err = 0.0
    for a, b in zip(segments[:-1], segments[1:]):
        v, e = integrate.quad(lambda r: jv(2, r) ** 2 / r if r > 0 else 0.0, a, b, epsabs=1e-13, epsrel=1e-12, limit=400)
        q_val += v
        q_err += abs(e)
    tail = (1.0 / np.pi) * (1.0 / r_max + np.cos(2.0 * r_max) / (2.0 * r_max**2))
    tail_err = 2.0 / (np.pi * r_max**2)
    q_total = q_val + tail
    achieved = q_err + tail_err

    # Rubin reduction for a radial integrand: the pulled-back quadratic form
    # has the frame-independent Gram determinant of the inner map.
    T = _rubin_map(np.eye(2)[:, :1][None, :, :], 2, 1)[0]
    gram_det = float(np.linalg.det(T.T @ T))
    # scale = stiefel mass x inverse gamma normalizer, as in the exact pairing
    from .constants import gamma_product, stiefel_mass

    scale = stiefel_mass((2, 1)) / gamma_product(1, 1)
    lhs = scale * (2.0 * np.pi**2 / np.sqrt(gram_det)) * (2.0 * np.pi) ** 6 * q_total
    lhs_err = scale * (2.0 * np.pi**2 / np.sqrt(gram_det)) * (2.0 * np.pi) ** 6 * achieved
    rhs = 0.5 * (2.0 * np.pi) ** 6 * sphere_area(5)
    ratio = lhs / rhs
    ratio_err = lhs_err / rhs
    ok = abs(ratio - 1.0) <= 0.05
    return AuditRecord(
        claim="extension-sphere-constant",
        suite="extension2d",
        measurements=[
            Measurement("pairing_side", lhs, lhs_err),
            Measurement("claimed_side", rhs, 0.0),
            Measurement("bessel_moment", q_total, achieved),
        ],
        reference=1.0,
        ratio=ratio,
        tolerance=0.05 if ok else None,
        verdict=PASS if ok else REPORT_ONLY,
        seed=seed,
        note=(
            "quadrature converged"
            if ok
            else f"quadrature converged (error estimate {achieved:.2e}); measured factor {ratio:.6f} vs claimed 1 "
            "is normalization-sensitive, reported as measured"
        ),
    )
