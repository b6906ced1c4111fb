"""Suite registry and orchestration.

Every suite is a pure function of its configuration: given (suite, seed,
samples, workers) the emitted records are identical run to run, including
under parallel execution, because all Monte Carlo goes through counter-based
substreams with fixed reduction trees.  A crash inside a suite is converted
into a failed record and the run continues.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import grid as grid_mod
from . import manifolds, pairing, weights
from .constants import (
    d_constant,
    gamma_product,
    grassmann_mass,
    grassmann_mass_sphere_ratio,
    log_gamma_product,
    sphere_area,
    stiefel_mass,
)
from .gaussian import (
    GaussianPacket,
    evaluate,
    fourier_transform,
    isotropic_packet,
    lp_norm,
    modulus_squared,
    schrodinger_evolve,
)
from .records import FAIL, PASS, REPORT_ONLY, AuditRecord, Measurement
from .streams import SeededStream

DEFAULT_SEED = 20260810


class ConfigError(ValueError):
    """Invalid run configuration (unknown suite, bad parameters)."""


@dataclass
class SuiteConfig:
    suite: str
    d: int | None = None
    k: int | None = None
    samples: int | None = None
    seed: int = DEFAULT_SEED
    tol: float | None = None
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; known: {', '.join(SUITES)}")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.tol is not None and self.tol <= 0:
            raise ConfigError("tolerance must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


def run_suite(cfg: SuiteConfig) -> list[AuditRecord]:
    fn = SUITES[cfg.suite]
    try:
        return fn(cfg)
    except Exception as exc:  # a crashed suite becomes a failed record
        return [
            AuditRecord(
                claim=f"{cfg.suite}-crashed",
                suite=cfg.suite,
                measurements=[],
                tolerance=1.0,
                verdict=FAIL,
                seed=cfg.seed,
                note=f"{type(exc).__name__}: {exc}",
            )
        ]


def run_suites(names: list[str], base: SuiteConfig) -> list[AuditRecord]:
    """Run several suites, merging records in fixed suite order."""
    out: list[AuditRecord] = []
    for name in names:
        cfg = SuiteConfig(
            suite=name,
            d=base.d,
            k=base.k,
            samples=base.samples,
            seed=base.seed,
            tol=base.tol,
            workers=base.workers,
        )
        out.extend(run_suite(cfg))
    return out


def _record(claim, suite, measurements, *, tolerance, ok, seed, note="", reference=None, ratio=None, runtime=0.0):
    return AuditRecord(
        claim=claim,
        suite=suite,
        measurements=measurements,
        reference=reference,
        ratio=ratio,
        tolerance=tolerance,
        verdict=PASS if ok else FAIL,
        seed=seed,
        note=note,
        runtime=runtime,
    )


# ---------------------------------------------------------------------------
# constants


def _suite_constants(cfg: SuiteConfig) -> list[AuditRecord]:
    recs = []
    t0 = time.perf_counter()
    worst = 0.0
    for d in range(2, 9):
        for k in range(1, d):
            a = grassmann_mass((d, k))
            b = grassmann_mass_sphere_ratio((d, k))
            worst = max(worst, abs(a - b) / a)
    recs.append(
        _record(
            "grassmann-mass-consistency",
            cfg.suite,
            [Measurement("max_relative_deviation", worst)],
            tolerance=1e-13,
            ok=worst <= 1e-13,
            seed=cfg.seed,
            note="gamma-product route vs sphere-area-ratio route, 2 <= d <= 8",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    worst = max(
        abs(stiefel_mass((d, 1)) - sphere_area(d - 1)) / sphere_area(d - 1) for d in range(1, 9)
    )
    recs.append(
        _record(
            "frame-mass-vs-sphere-area",
            cfg.suite,
            [Measurement("max_relative_deviation", worst)],
            tolerance=1e-13,
            ok=worst <= 1e-13,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    worst = max(
        abs(grassmann_mass((d, k)) - gamma_product(k, k) * stiefel_mass((d, k))) / grassmann_mass((d, k))
        for d in range(2, 9)
        for k in range(1, d)
    )
    recs.append(
        _record(
            "mass-product-identity",
            cfg.suite,
            [Measurement("max_relative_deviation", worst)],
            tolerance=1e-14,
            ok=worst <= 1e-14,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    finite = all(
        np.isfinite(v) and v > 0
        for d in range(2, 9)
        for k in range(1, d)
        for v in (
            grassmann_mass((d, k)),
            stiefel_mass((d, k)),
            d_constant((d, k)),
            np.exp(min(log_gamma_product(k, d), 700.0)),
        )
    )
    recs.append(
        _record(
            "positivity-and-finiteness",
            cfg.suite,
            [Measurement("all_positive_finite", 1.0 if finite else 0.0)],
            tolerance=0.5,
            ok=finite,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )
    return recs


# ---------------------------------------------------------------------------
# gaussian engine


def _random_packet(rng: np.random.Generator, n: int, complex_part: bool = True) -> GaussianPacket:
    r = rng.standard_normal((n, n))
    a = 0.5 * (r @ r.T) / n + (0.3 + 0.7 * rng.random()) * np.eye(n)
    if complex_part:
        s = rng.standard_normal((n, n))
        a = a + 0.3j * (s + s.T)
        b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        c = complex(rng.standard_normal(), rng.standard_normal())
    else:
        b = rng.standard_normal(n).astype(complex)
        c = complex(rng.standard_normal())
    return GaussianPacket(a, b, c)


def _suite_gaussian_engine(cfg: SuiteConfig) -> list[AuditRecord]:
    rng = SeededStream(cfg.seed, (1,)).generator()
    recs = []

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        p = _random_packet(rng, int(rng.integers(1, 4)))
        mass0 = lp_norm(modulus_squared(p), 1.0)
        for _ in range(10):
            t = float(rng.uniform(-3.0, 3.0))
            mass_t = lp_norm(modulus_squared(schrodinger_evolve(p, t)), 1.0)
            worst = max(worst, abs(mass_t - mass0) / mass0)
    recs.append(
        _record(
            "flow-unitarity",
            cfg.suite,
            [Measurement("max_relative_deviation", worst)],
            tolerance=1e-12,
            ok=worst <= 1e-12,
            seed=cfg.seed,
            note="100 random packets x 10 random times",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        p = _random_packet(rng, int(rng.integers(1, 4)))
        q = fourier_transform(fourier_transform(p))
        scale = (2.0 * np.pi) ** p.n
        worst = max(
            worst,
            float(np.max(np.abs(q.A - p.A)) / np.max(np.abs(p.A))),
            float(np.max(np.abs(q.b + p.b)) / max(1.0, np.max(np.abs(p.b)))),
            abs(np.exp(q.c) - scale * np.exp(p.c)) / abs(scale * np.exp(p.c)),
        )
    recs.append(
        _record(
            "fourier-involution",
            cfg.suite,
            [Measurement("max_relative_deviation", worst)],
            tolerance=1e-12,
            ok=worst <= 1e-12,
            seed=cfg.seed,
            note="double transform equals (2 pi)^n times reflection",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        p = _random_packet(rng, int(rng.integers(1, 4)))
        s_t, t_t = float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2))
        one = schrodinger_evolve(schrodinger_evolve(p, s_t), t_t)
        two = schrodinger_evolve(p, s_t + t_t)
        worst = max(
            worst,
            float(np.max(np.abs(one.A - two.A)) / np.max(np.abs(two.A))),
            float(np.max(np.abs(one.b - two.b)) / max(1.0, np.max(np.abs(two.b)))),
            abs(one.c - two.c) / max(1.0, abs(two.c)),
        )
    recs.append(
        _record(
            "flow-semigroup",
            cfg.suite,
            [Measurement("max_relative_deviation", worst)],
            tolerance=1e-12,
            ok=worst <= 1e-12,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    worst = 0.0
    for trial in range(4):
        d = 2 if trial % 2 == 0 else 3
        k = 1 + (trial % 2)
        p = _random_packet(rng, d, complex_part=False)
        frame_mat = manifolds._orthonormalize(rng.standard_normal((d, k)))
        frame = manifolds.OrthonormalFrame(frame_mat)
        raw = rng.standard_normal(d)
        offset = raw - frame_mat @ (frame_mat.T @ raw)
        plane = manifolds.AffineKPlane(frame, offset)
        from .gaussian import integrate_over_affine_plane

        closed = integrate_over_affine_plane(p, plane)

        def integrand(*ys):
            x = frame_mat @ np.array(ys) + offset
            return float(np.real(evaluate(p, x)))

        num, _ = integrate.nquad(integrand, [(-8, 8)] * k, opts={"epsabs": 1e-11, "epsrel": 1e-11})
        worst = max(worst, abs(np.real(closed) - num) / abs(num))
    recs.append(
        _record(
            "plane-integral-vs-quadrature",
            cfg.suite,
            [Measurement("max_relative_deviation", worst)],
            tolerance=1e-9,
            ok=worst <= 1e-9,
            seed=cfg.seed,
            note="closed form vs adaptive quadrature, d <= 3",
            runtime=time.perf_counter() - t0,
        )
    )
    return recs


# ---------------------------------------------------------------------------
# manifolds


def _suite_manifolds(cfg: SuiteConfig) -> list[AuditRecord]:
    n = cfg.samples or 100_000
    stream = SeededStream(cfg.seed, (2,))
    recs = []

    t0 = time.perf_counter()
    frames = manifolds.stiefel_frame_batch(4, 2, 4096, stream.child(0), cfg.workers)
    gram = np.einsum("nij,nik->njk", frames, frames)
    worst = float(np.max(np.abs(gram - np.eye(2))))
    recs.append(
        _record(
            "frame-orthonormality",
            cfg.suite,
            [Measurement("max_gram_defect", worst)],
            tolerance=1e-12,
            ok=worst <= 1e-12,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    est, err = manifolds.grassmann_expectation(lambda P: 1.0, (3, 1), 2048, stream.child(1), cfg.workers)
    exact = est == grassmann_mass((3, 1)) and err == 0.0
    recs.append(
        _record(
            "constant-integrand-mass",
            cfg.suite,
            [Measurement("estimate", est, err), Measurement("mass", grassmann_mass((3, 1)))],
            tolerance=1e-15,
            ok=exact,
            seed=cfg.seed,
            note="no Monte Carlo noise on constants",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    rng = stream.child(2).generator()
    m_fix = rng.standard_normal((3, 3))
    m_fix = 0.5 * (m_fix + m_fix.T)
    q_fix, _ = np.linalg.qr(rng.standard_normal((3, 3)))

    def stat(P):
        return float(np.einsum("ij,ji->", P, m_fix))

    e1, s1 = manifolds.grassmann_expectation(stat, (3, 1), n, stream.child(3), cfg.workers)

    def stat_rot(P):
        return stat(q_fix @ P @ q_fix.T)

    e2, s2 = manifolds.grassmann_expectation(stat_rot, (3, 1), n, stream.child(4), cfg.workers)
    pull = abs(e1 - e2) / float(np.hypot(s1, s2))
    expect = grassmann_mass((3, 1)) * np.trace(m_fix) / 3.0
    recs.append(
        _record(
            "orthogonal-invariance",
            cfg.suite,
            [
                Measurement("mean", e1, s1),
                Measurement("rotated_mean", e2, s2),
                Measurement("haar_prediction", expect),
            ],
            tolerance=4.0,
            ok=pull <= 4.0 and abs(e1 - expect) <= 4.0 * s1,
            seed=cfg.seed,
            note=f"pull {pull:.2f} sigma; projected-trace mean matches (k/d) mass tr M",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    gen = stream.child(5).generator()
    g = gen.standard_normal((n, 2))
    q = g / np.linalg.norm(g, axis=1, keepdims=True)
    angles = np.mod(np.arctan2(q[:, 1], q[:, 0]), 2.0 * np.pi) / (2.0 * np.pi)
    angles = np.sort(angles)
    ecdf_hi = (np.arange(1, n + 1)) / n
    ecdf_lo = np.arange(n) / n
    ks = float(max(np.max(ecdf_hi - angles), np.max(angles - ecdf_lo)))
    crit = 1.628 / np.sqrt(n)  # 1% critical value, asymptotic
    recs.append(
        _record(
            "circle-angle-uniformity",
            cfg.suite,
            [Measurement("ks_statistic", ks), Measurement("critical_value_1pct", crit)],
            tolerance=1.0,
            ok=ks < crit,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()

    def smooth(P):
        return float(np.exp(np.einsum("ij,ji->", P, m_fix[:2, :2] * 0.4)) * (1.0 + P[0, 0]))

    exact_val = manifolds.exact_grassmann_quadrature_2d(smooth)
    mc_val, mc_err = manifolds.grassmann_expectation(smooth, (2, 1), n, stream.child(6), cfg.workers)
    recs.append(
        _record(
            "quadrature-vs-monte-carlo-2d",
            cfg.suite,
            [Measurement("quadrature", exact_val), Measurement("monte_carlo", mc_val, mc_err)],
            tolerance=4.0,
            ok=abs(exact_val - mc_val) <= 4.0 * mc_err,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )
    return recs


# ---------------------------------------------------------------------------
# covariance lemma


def _suite_covariance_lemma(cfg: SuiteConfig) -> list[AuditRecord]:
    stream = SeededStream(cfg.seed, (3,))
    recs = []
    t0 = time.perf_counter()
    worst = 0.0
    for d in range(2, 7):
        gen = stream.child(d).generator()
        for _ in range(100):
            omega = weights.Configuration(gen.standard_normal((d + 1, d)))
            scale = float(np.max(np.abs(weights.covariance(omega))))
            worst = max(worst, pairing.covariance_lemma_check(omega) / scale)
    runtime = time.perf_counter() - t0
    recs.append(
        _record(
            "covariance-factorization",
            cfg.suite,
            [Measurement("max_relative_defect", worst), Measurement("runtime_seconds", runtime)],
            tolerance=1e-11,
            ok=worst <= 1e-11,
            seed=cfg.seed,
            note="100 random configurations per dimension, d = 2..6",
            runtime=runtime,
        )
    )

    t0 = time.perf_counter()
    worst_sq = max(
        float(np.max(np.abs(pairing.m_matrix(d) @ pairing.m_matrix(d) - (np.eye(d) + np.ones((d, d))))))
        for d in range(2, 7)
    )
    worst_det = max(abs(np.linalg.det(pairing.m_matrix(d)) - np.sqrt(d + 1.0)) for d in range(2, 7))
    recs.append(
        _record(
            "twist-matrix-square",
            cfg.suite,
            [Measurement("max_defect", worst_sq)],
            tolerance=1e-13,
            ok=worst_sq <= 1e-13,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )
    recs.append(
        _record(
            "twist-matrix-determinant",
            cfg.suite,
            [Measurement("max_defect", worst_det)],
            tolerance=1e-12,
            ok=worst_det <= 1e-12,
            seed=cfg.seed,
        )
    )
    return recs


# ---------------------------------------------------------------------------
# weights


def _suite_weights(cfg: SuiteConfig) -> list[AuditRecord]:
    n = cfg.samples or 20_000
    stream = SeededStream(cfg.seed, (4,))
    recs = []

    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for j in range(5):
        xi = weights.random_configuration(2, stream.child(10 + j))
        est, err = weights.i_weight_mc(xi, 1, 1024, stream.child(20 + j), cfg.workers)
        ok = ok and est == grassmann_mass((2, 1)) and err == 0.0
        worst = max(worst, abs(est - grassmann_mass((2, 1))))
    recs.append(
        _record(
            "exponent-zero-constant",
            cfg.suite,
            [Measurement("max_deviation_from_mass", worst)],
            tolerance=1e-15,
            ok=ok,
            seed=cfg.seed,
            note="power zero: weight is identically the Grassmann mass, zero variance",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    worst_pull = 0.0
    for idx, (d, k) in enumerate(((3, 1), (3, 2), (4, 1))):
        deg = weights.weight_exponent(d, k)
        xi = weights.normalize_configuration(weights.random_configuration(d, stream.child(30 + idx)))
        base, base_err = weights.i_weight_mc(xi, k, n, stream.child(40 + idx), cfg.workers)
        for lam in (0.5, 2.0, 10.0):
            scaled = weights.Configuration(lam * xi.points)
            est, err = weights.i_weight_mc(scaled, k, n, stream.child(50 + idx), cfg.workers)
            pull = abs(est - lam**deg * base) / float(np.hypot(err, lam**deg * base_err))
            worst_pull = max(worst_pull, pull)
    recs.append(
        _record(
            "weight-homogeneity",
            cfg.suite,
            [Measurement("worst_pull_sigma", worst_pull)],
            tolerance=4.0,
            ok=worst_pull <= 4.0,
            seed=cfg.seed,
            note="degree d(d-k)-2 scaling at lambda in {0.5, 2, 10} for (3,1), (3,2), (4,1)",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    worst_pull = 0.0
    pairs = [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]
    for j in range(50):
        d, k = pairs[j % len(pairs)]
        sub = stream.child(100 + j)
        xi = weights.normalize_configuration(weights.random_configuration(d, sub.child(0)))
        direct, de = weights.i_weight_mc(xi, k, n, sub.child(1), cfg.workers)
        eigen, ee = weights.i_weight_eigen_mc(xi, k, n, sub.child(2), cfg.workers)
        pull = abs(direct - eigen) / float(np.hypot(de, ee))
        worst_pull = max(worst_pull, pull)
    recs.append(
        _record(
            "dual-route-agreement",
            cfg.suite,
            [Measurement("worst_pull_sigma", worst_pull)],
            tolerance=4.0,
            ok=worst_pull <= 4.0,
            seed=cfg.seed,
            note="direct Grassmann route vs eigenvalue-frame route, 50 configurations",
            runtime=time.perf_counter() - t0,
        )
    )

    for d, k, tol in ((3, 1, 1e-3), (6, 5, 1e-2)):
        t0 = time.perf_counter()
        try:
            entry = weights.load_calibration()[(d, k)]
        except (weights.CalibrationError, KeyError) as exc:
            recs.append(
                _record(
                    f"quadratic-proportionality-({d},{k})",
                    cfg.suite,
                    [],
                    tolerance=tol,
                    ok=False,
                    seed=cfg.seed,
                    note=f"calibration unavailable: {exc}",
                )
            )
            continue
        recs.append(
            _record(
                f"quadratic-proportionality-({d},{k})",
                cfg.suite,
                [
                    Measurement("kappa", entry.kappa, entry.stderr),
                    Measurement("max_relative_residual", entry.residual),
                ],
                tolerance=tol,
                ok=entry.residual <= tol,
                seed=entry.seed,
                note=(
                    f"one-constant least squares over {entry.configs} configurations at "
                    f"{entry.samples} samples each; residual is the worst relative misfit"
                ),
                runtime=time.perf_counter() - t0,
            )
        )

    scan_pairs = ((3, 1), (3, 2), (4, 2))
    m_configs = cfg.extra.get("scan_configs", 10_000)
    scan_n = cfg.extra.get("scan_samples", 4096)
    for d, k in scan_pairs:
        t0 = time.perf_counter()
        lo1, hi1 = weights.comparability_scan((d, k), m_configs, scan_n, stream.child(200 + 10 * d + k), cfg.workers)
        lo2, hi2 = weights.comparability_scan((d, k), 2 * m_configs, scan_n, stream.child(200 + 10 * d + k), cfg.workers)
        drift = max(abs(lo1 - lo2) / lo2, abs(hi1 - hi2) / hi2)
        ok = np.isfinite(lo2) and np.isfinite(hi2) and lo2 > 0 and drift < 0.02
        recs.append(
            _record(
                f"comparability-bounds-({d},{k})",
                cfg.suite,
                [
                    Measurement("lower_bound", lo2),
                    Measurement("upper_bound", hi2),
                    Measurement("doubling_drift", drift),
                ],
                tolerance=0.02,
                ok=bool(ok),
                seed=cfg.seed,
                note=f"{m_configs} unit-normalized configurations, bounds stable under doubling",
                runtime=time.perf_counter() - t0,
            )
        )
    return recs


# ---------------------------------------------------------------------------
# drury / pairing consistency


def _random_real_packet_r6(rng: np.random.Generator) -> GaussianPacket:
    r = rng.standard_normal((6, 6))
    a = 0.5 * (r @ r.T) / 6 + (0.5 + 0.3 * rng.random()) * np.eye(6)
    return GaussianPacket(a, 0.4 * rng.standard_normal(6), 0.2 * rng.standard_normal())


def _random_isotropic_packets(rng: np.random.Generator, d: int) -> list[GaussianPacket]:
    packs = []
    for _ in range(d + 1):
        alpha = 0.5 + 0.5 * rng.random()
        mu = 0.5 * rng.standard_normal(d)
        packs.append(GaussianPacket(alpha * np.eye(d), 2.0 * alpha * mu, -alpha * float(mu @ mu)))
    return packs


def _suite_drury(cfg: SuiteConfig) -> list[AuditRecord]:
    n = cfg.samples or 100_000
    stream = SeededStream(cfg.seed, (5,))
    recs = []

    t0 = time.perf_counter()
    f = isotropic_packet(2, 1.0)
    rec = pairing.drury_audit([f, f, f], (2, 1), n, stream.child(0), seed=cfg.seed, workers=cfg.workers)
    rec.claim = "product-identity-(2,1)-closed-form"
    rec.runtime = time.perf_counter() - t0
    recs.append(rec)

    for d, k in ((3, 1), (3, 2)):
        t0 = time.perf_counter()
        packs = _random_isotropic_packets(stream.child(10 * d + k).generator(), d)
        rec = pairing.drury_audit(packs, (d, k), n, stream.child(20 * d + k), seed=cfg.seed, workers=cfg.workers)
        rec.runtime = time.perf_counter() - t0
        lhs, rhs = rec.measurements[0], rec.measurements[1]
        rel = max(lhs.stderr / abs(lhs.value), rhs.stderr / abs(rhs.value))
        if rel > 0.01:
            rec.verdict = FAIL
            rec.note += f"; relative stderr {rel:.3%} exceeds the 1% budget"
        recs.append(rec)

    t0 = time.perf_counter()
    rng = stream.child(7).generator()
    ratios = []
    for _ in range(20):
        pk = _random_real_packet_r6(rng)
        direct = pairing.pair_Ak_gaussian(pk, (2, 1), 0, stream).value
        oracle = pairing.delta_rho_pair_2d(pk).value
        ratios.append(direct / oracle)
    ratios = np.array(ratios)
    spread = float(np.ptp(ratios) / abs(np.mean(ratios)))
    dev = float(np.max(np.abs(ratios - d_constant((2, 1)))))
    ok = spread <= 1e-6 and dev <= 1e-6
    recs.append(
        _record(
            "pairing-ratio-2d",
            cfg.suite,
            [
                Measurement("mean_ratio", float(np.mean(ratios))),
                Measurement("relative_spread", spread),
                Measurement("deviation_from_constant", dev),
            ],
            tolerance=1e-6,
            ok=ok,
            seed=cfg.seed,
            reference=d_constant((2, 1)),
            note="singular pairing / delta-of-determinant oracle over 20 random packets",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    rng = stream.child(8).generator()
    base = _random_isotropic_packets(rng, 2)
    lam = 1.3
    scaled = [GaussianPacket(lam**2 * np.asarray(p.A), lam * np.asarray(p.b), p.c) for p in base]
    rec0 = pairing.drury_audit(base, (2, 1), 0, stream.child(9), seed=cfg.seed)
    rec1 = pairing.drury_audit(scaled, (2, 1), 0, stream.child(9), seed=cfg.seed)
    drift = abs(rec0.ratio - rec1.ratio) / abs(rec0.ratio)
    recs.append(
        _record(
            "scaling-consistency",
            cfg.suite,
            [Measurement("ratio_drift", drift)],
            tolerance=1e-6,
            ok=drift <= 1e-6,
            seed=cfg.seed,
            note=f"datum dilation by {lam}: both sides scale identically",
            runtime=time.perf_counter() - t0,
        )
    )
    return recs


# ---------------------------------------------------------------------------
# theorem 1.1 functional


def _suite_theorem11(cfg: SuiteConfig) -> list[AuditRecord]:
    tol_grid = cfg.tol or 1e-3
    recs = []

    t0 = time.perf_counter()
    ratios = [grid_mod.theorem11_functional_gaussian(a) for a in (0.25, 0.5, 1.0, 4.0)]
    spread = (max(ratios) - min(ratios)) / abs(np.mean(ratios))
    recs.append(
        _record(
            "sharp-ratio-width-independence",
            cfg.suite,
            [Measurement(f"ratio_alpha_{a}", r) for a, r in zip((0.25, 0.5, 1.0, 4.0), ratios)],
            tolerance=1e-8,
            ok=spread <= 1e-8,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )
    base_ratio = ratios[1]

    t0 = time.perf_counter()
    alpha = 0.7
    mu = np.array([0.4, -0.3])
    vel = np.array([1.1, 0.6])
    orbit = GaussianPacket(alpha * np.eye(2), 2 * alpha * mu + 1j * vel, -alpha * float(mu @ mu))
    v_orbit = grid_mod.theorem11_functional_packet(orbit)
    drift = abs(v_orbit - base_ratio) / base_ratio
    recs.append(
        _record(
            "sharp-ratio-orbit-invariance",
            cfg.suite,
            [Measurement("translated_modulated_ratio", v_orbit), Measurement("relative_drift", drift)],
            tolerance=1e-6,
            ok=drift <= 1e-6,
            seed=cfg.seed,
            note="translation + modulation of the datum",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    n_grid = cfg.extra.get("grid_n", 512)
    field = grid_mod.sample_packet_on_grid(isotropic_packet(2, 0.5), n_grid, 12.0)
    grid_ratio = grid_mod.theorem11_functional_numeric(field, m_angles=cfg.extra.get("grid_angles", 96))
    rel = abs(grid_ratio - base_ratio) / base_ratio
    recs.append(
        _record(
            "grid-vs-closed-form",
            cfg.suite,
            [Measurement("grid_ratio", grid_ratio), Measurement("closed_form_ratio", base_ratio)],
            tolerance=tol_grid,
            ok=rel <= tol_grid,
            seed=cfg.seed,
            note=f"n = {n_grid}, L = 12; relative deviation {rel:.2e}",
            runtime=time.perf_counter() - t0,
        )
    )

    t0 = time.perf_counter()
    field2 = grid_mod.sample_packet_on_grid(isotropic_packet(2, 0.25), n_grid, 12.0)
    grid_ratio2 = grid_mod.theorem11_functional_numeric(field2, m_angles=cfg.extra.get("grid_angles", 96))
    drift = abs(grid_ratio2 - grid_ratio) / grid_ratio
    recs.append(
        _record(
            "grid-rescaling-invariance",
            cfg.suite,
            [Measurement("rescaled_grid_ratio", grid_ratio2), Measurement("relative_drift", drift)],
            tolerance=tol_grid,
            ok=drift <= tol_grid,
            seed=cfg.seed,
            note="datum dilation on the same grid",
            runtime=time.perf_counter() - t0,
        )
    )

    printed = np.pi / 2.0
    recs.append(
        AuditRecord(
            claim="sharp-constant-measured",
            suite=cfg.suite,
            measurements=[
                Measurement("measured_cubed_norm_ratio", base_ratio),
                Measurement("discrepancy_factor_vs_printed", printed / base_ratio),
            ],
            reference=printed,
            ratio=base_ratio / printed,
            tolerance=None,
            verdict=REPORT_ONLY,
            seed=cfg.seed,
            note=(
                "measured constant under the explicit line-measure normalization (angle mass pi); "
                "the printed reference is normalization-sensitive, so this record is report-only"
            ),
        )
    )
    return recs


# ---------------------------------------------------------------------------
# theorem 2.2 radial audit


def _suite_theorem22(cfg: SuiteConfig) -> list[AuditRecord]:
    n = cfg.samples or 30_000
    stream = SeededStream(cfg.seed, (6,))
    recs = []

    t0 = time.perf_counter()
    ratios = {}
    for beta in (0.25, 0.5, 1.0):
        rec = grid_mod.theorem22_radial_audit(beta, (2, 1), n, stream.child(0), seed=cfg.seed, workers=cfg.workers)
        ratios[beta] = rec.ratio
        if beta == 0.5:
            rec.runtime = time.perf_counter() - t0
            recs.append(rec)
    spread = (max(ratios.values()) - min(ratios.values())) / abs(np.mean(list(ratios.values())))
    recs.append(
        _record(
            "radial-ratio-width-independence",
            cfg.suite,
            [Measurement(f"ratio_beta_{b}", r) for b, r in ratios.items()],
            tolerance=1e-4,
            ok=spread <= 1e-4,
            seed=cfg.seed,
            note="shared weight samples make the ratio width-independent to rounding",
            runtime=time.perf_counter() - t0,
        )
    )

    for d, k, bound in ((3, 1, 0.02), (3, 2, 0.02)):
        t0 = time.perf_counter()
        rec = grid_mod.theorem22_radial_audit(0.5, (d, k), n, stream.child(10 * d + k), seed=cfg.seed, workers=cfg.workers)
        rec.runtime = time.perf_counter() - t0
        recs.append(rec)
        ratio_err = rec.measurements[2].stderr
        recs.append(
            _record(
                f"radial-audit-precision-({d},{k})",
                cfg.suite,
                [Measurement("ratio_stderr", ratio_err)],
                tolerance=bound,
                ok=ratio_err <= bound,
                seed=cfg.seed,
                runtime=0.0,
            )
        )
    return recs


# ---------------------------------------------------------------------------
# extension audit (stretch)


def _suite_extension2d(cfg: SuiteConfig) -> list[AuditRecord]:
    recs = []
    t0 = time.perf_counter()
    origin = grid_mod.sphere6_transform_radial(1e-6)
    dev = abs(origin - sphere_area(5)) / sphere_area(5)
    recs.append(
        _record(
            "sphere-transform-origin-value",
            cfg.suite,
            [Measurement("value_at_origin", origin), Measurement("sphere_area", sphere_area(5))],
            tolerance=1e-8,
            ok=dev <= 1e-8,
            seed=cfg.seed,
            runtime=time.perf_counter() - t0,
        )
    )
    t0 = time.perf_counter()
    rec = grid_mod.extension_audit_2d(seed=cfg.seed)
    rec.runtime = time.perf_counter() - t0
    recs.append(rec)
    return recs


# ---------------------------------------------------------------------------
# extremality (perturbed data, one-sided)


_PERTURBATIONS = [
    lambda x, y: x,
    lambda x, y: y,
    lambda x, y: x * y,
    lambda x, y: x * (x * x - 3.0 * y * y),
    lambda x, y: y * (3.0 * x * x - y * y),
    lambda x, y: x * y * (x * x - y * y),
    lambda x, y: x**3,
    lambda x, y: x * y * y,
    lambda x, y: x * x - y * y,
    lambda x, y: x + y * y,
]


def _suite_extremality(cfg: SuiteConfig) -> list[AuditRecord]:
    stream = SeededStream(cfg.seed, (8,))
    n_grid = cfg.extra.get("grid_n", 256)
    m_angles = cfg.extra.get("grid_angles", 48)
    half = 12.0
    recs = []

    t_switch = cfg.extra.get("t_switch", 0.4)  # perturbed narrow modes disperse faster
    t0 = time.perf_counter()
    closed = grid_mod.theorem11_functional_gaussian(0.5)
    gauss_field = grid_mod.sample_packet_on_grid(isotropic_packet(2, 0.5), n_grid, half)
    gauss_grid = grid_mod.theorem11_functional_numeric(gauss_field, m_angles=m_angles, t_switch=t_switch, pad=2)
    error_bar = abs(gauss_grid - closed) + 1e-4 * closed

    x = gauss_field.axis()
    gx, gy = np.meshgrid(x, x, indexing="ij")
    envelope = np.exp(-0.75 * (gx**2 + gy**2))
    base = np.exp(-0.5 * (gx**2 + gy**2))

    rng = stream.generator()
    margins = []
    measurements = [Measurement("gaussian_grid_ratio", gauss_grid, error_bar)]
    base_mass = float(np.linalg.norm(base))
    for idx in range(20):
        poly = _PERTURBATIONS[idx % len(_PERTURBATIONS)]
        eps = float(rng.uniform(0.25, 0.45)) * (1.0 if idx % 2 == 0 else -1.0)
        bump = poly(gx, gy) * envelope * base
        bump *= base_mass / float(np.linalg.norm(bump))  # unit relative mass
        datum = base + eps * bump
        field = grid_mod.GridField(half, datum)
        ratio = grid_mod.theorem11_functional_numeric(field, m_angles=m_angles, t_switch=t_switch, pad=2)
        margin = (gauss_grid - ratio) / error_bar
        margins.append(margin)
        measurements.append(Measurement(f"perturbation_{idx:02d}_margin_sigma", margin))
    worst = min(margins)
    recs.append(
        _record(
            "gaussian-extremality-one-sided",
            cfg.suite,
            measurements,
            tolerance=3.0,
            ok=worst >= 3.0,
            seed=cfg.seed,
            note=(
                f"20 non-Gaussian perturbations on an n = {n_grid} grid; every ratio sits below the "
                f"Gaussian ratio by at least {worst:.1f} error bars (requirement: 3)"
            ),
            runtime=time.perf_counter() - t0,
        )
    )
    return recs


SUITES = {
    "constants": _suite_constants,
    "gaussian_engine": _suite_gaussian_engine,
    "manifolds": _suite_manifolds,
    "weights": _suite_weights,
    "drury": _suite_drury,
    "covariance_lemma": _suite_covariance_lemma,
    "theorem11": _suite_theorem11,
    "theorem22": _suite_theorem22,
    "extension2d": _suite_extension2d,
    "extremality": _suite_extremality,
}
