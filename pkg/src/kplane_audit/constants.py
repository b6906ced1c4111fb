"""Exact normalization constants: sphere areas, gamma-product normalizers,
Stiefel/Grassmann total masses and the sharp-constant prefactors.

All Grassmann/Stiefel measures in this package are *masses*, not
probabilities: integrating the constant 1 against them returns the values
computed here.  Everything is evaluated in log space and exponentiated once,
so the constants stay finite for dimensions well past the audit range d <= 8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class DimPair:
    """An ambient dimension d >= 2 together with a plane dimension 1 <= k <= d-1."""

    d: int
    k: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"ambient dimension must be >= 2, got d={self.d}")
        if not 1 <= self.k <= self.d - 1:
            raise ValueError(f"plane dimension must satisfy 1 <= k <= d-1, got k={self.k} for d={self.d}")


def _as_pair(pair) -> tuple[int, int]:
    """Accept a DimPair or a raw (d, k) tuple; k=d is allowed for internal masses."""
    if isinstance(pair, DimPair):
        return pair.d, pair.k
    d, k = pair
    if d < 1 or not 1 <= k <= d:
        raise ValueError(f"invalid dimension pair ({d}, {k})")
    return int(d), int(k)


def sphere_area(n: int) -> float:
    """Surface area of the unit n-sphere, 2*pi^((n+1)/2) / Gamma((n+1)/2)."""
    if n < 0:
        raise ValueError(f"sphere dimension must be >= 0, got {n}")
    return math.exp(log_sphere_area(n))


def log_sphere_area(n: int) -> float:
    if n < 0:
        raise ValueError(f"sphere dimension must be >= 0, got {n}")
    return math.log(2.0) + 0.5 * (n + 1) * math.log(math.pi) - math.lgamma(0.5 * (n + 1))


def log_gamma_product(n: int, z: float) -> float:
    """log of prod_{j=0}^{n-1} Gamma((z-j)/2) / (2 pi^((z-j)/2)).

    Requires z > n-1 so that every gamma argument is positive (the pole
    region of the analytic family is excluded on purpose).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if z <= n - 1:
        raise ValueError(f"need z > n-1 for positive gamma arguments, got z={z}, n={n}")
    total = 0.0
    for j in range(n):
        half = 0.5 * (z - j)
        total += math.lgamma(half) - math.log(2.0) - half * math.log(math.pi)
    return total


def gamma_product(n: int, z: float) -> float:
    return math.exp(log_gamma_product(n, z))


def stiefel_mass(pair) -> float:
    """Total mass of the uniform measure on orthonormal k-frames in R^d."""
    d, k = _as_pair(pair)
    return math.exp(-log_gamma_product(k, d))


def grassmann_mass(pair) -> float:
    """Total mass of the invariant measure on k-dimensional subspaces of R^d."""
    d, k = _as_pair(pair)
    return math.exp(log_gamma_product(k, k) - log_gamma_product(k, d))


def grassmann_mass_sphere_ratio(pair) -> float:
    """The same mass written as |S^(d-1)|...|S^(d-k)| / (|S^(k-1)|...|S^0|).

    An independent route to grassmann_mass; the two are cross-checked by the
    constants audit suite.
    """
    d, k = _as_pair(pair)
    log_num = sum(log_sphere_area(d - 1 - j) for j in range(k))
    log_den = sum(log_sphere_area(k - 1 - j) for j in range(k))
    return math.exp(log_num - log_den)


def c_constant(pair) -> float:
    """Sharp-constant prefactor (2 pi)^(d(k+1)) (d+1)^((d(d-k)+k-3)/2) |S^(d(d-k)-1)|."""
    d, k = _as_pair(pair)
    if k > d - 1:
        raise ValueError(f"need k <= d-1, got ({d}, {k})")
    log_c = (
        d * (k + 1) * math.log(2.0 * math.pi)
        + 0.5 * (d * (d - k) + k - 3) * math.log(d + 1.0)
        + log_sphere_area(d * (d - k) - 1)
    )
    return math.exp(log_c)


def d_constant(pair) -> float:
    """Sharp-constant prefactor 1 / (gamma_k(k) gamma_{d-k}(d-k))."""
    d, k = _as_pair(pair)
    if k > d - 1:
        raise ValueError(f"need k <= d-1, got ({d}, {k})")
    return math.exp(-log_gamma_product(k, k) - log_gamma_product(d - k, d - k))
