"""Spheres and balls in R^n: constants, product quadrature, reduction rules.

The central objects are a product quadrature on the unit sphere S^{n-1}
(Gauss rules in the cosines of the polar angles, uniform rule in the
azimuth) and one-dimensional rules for integrals of the form

    integral_{-R}^{R} f(s) (R^2 - s^2)^{(n-3)/2} ds,

which is what an n-dimensional ball or sphere integral of a function of a
single coordinate collapses to. Everything here is float64 and pure; rule
construction is memoized per dimension and node count.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_gegenbauer

from .errors import EvaluationError

#: Gamma-overflow policy: dimensions above this are rejected outright.
MAX_DIMENSION = 12

# Default (polar nodes per angle, azimuth nodes) for the product sphere rule.
# Node counts are L^(n-2) * M, so the per-angle budget has to shrink with n
# to stay desk-scale; the resulting polynomial exactness is still >= 11 at
# n = 7, which covers every polynomial-data use in the package.
_DEFAULT_SPHERE_SIZES = {
    1: (0, 2),
    2: (0, 128),
    3: (48, 96),
    4: (24, 48),
    5: (12, 24),
    6: (8, 16),
    7: (6, 12),
    8: (5, 10),
    9: (4, 8),
    10: (4, 8),
    11: (4, 8),
    12: (4, 8),
}


def _check_dimension(n: int, minimum: int = 1) -> int:
    if not isinstance(n, (int, np.integer)):
        raise ValueError(f"dimension must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise ValueError(f"dimension must be >= {minimum}, got {n}")
    if n > MAX_DIMENSION:
        raise ValueError(f"dimension {n} exceeds the supported maximum {MAX_DIMENSION}")
    return n


@dataclass(frozen=True)
class Dimension:
    """A validated space dimension with the parity data the solvers need."""

    n: int

    def __post_init__(self):
        _check_dimension(self.n)

    @property
    def parity(self) -> str:
        return "odd" if self.n % 2 else "even"

    @property
    def is_odd(self) -> bool:
        return self.n % 2 == 1

    @property
    def derivative_order(self) -> int:
        """Iterations of (1/t d/dt) in the closed-form solution: (n-3)/2 for
        odd n >= 3 and (n-2)/2 for even n >= 2."""
        if self.is_odd:
            if self.n < 3:
                raise ValueError("derivative order undefined for n = 1")
            return (self.n - 3) // 2
        return (self.n - 2) // 2


def double_factorial(k: int) -> int:
    """k!! with the empty product equal to 1 (k <= 0 returns 1)."""
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def _omega(n: int) -> float:
    # unguarded: the even-dimension descent route peeks one dimension up
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def unit_sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n: 2 pi^(n/2) / Gamma(n/2).

    n = 1 gives 2, the counting measure of the two-point set {-1, +1}.
    """
    return _omega(_check_dimension(n))


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n: pi^(n/2) / Gamma(n/2 + 1)."""
    n = _check_dimension(n)
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def solution_constant(n: int) -> float:
    """Normalization of the means-based solution formula.

    1/(n-2)!! for odd n >= 3 and 1/n!! for even n >= 2; this is the constant
    that makes the iterated radial derivative of the r^(n-2)-scaled sphere
    average (odd) or r^n-scaled weighted ball average (even) reproduce the
    wave propagator.
    """
    n = _check_dimension(n, minimum=2)
    if n % 2:
        return 1.0 / double_factorial(n - 2)
    return 1.0 / double_factorial(n)


@dataclass(frozen=True)
class GeomConstants:
    """Per-dimension constants: sphere area, ball volume, solution constant."""

    n: int
    surface_area: float
    ball_volume: float
    mean_constant: float | None  # None for n = 1 (d'Alembert needs none)


@lru_cache(maxsize=MAX_DIMENSION + 1)
def constants_for(n: int) -> GeomConstants:
    n = _check_dimension(n)
    mean_const = solution_constant(n) if n >= 2 else None
    return GeomConstants(n, unit_sphere_area(n), unit_ball_volume(n), mean_const)


# ---------------------------------------------------------------------------
# 1-D rules for the weight (R^2 - s^2)^{(n-3)/2} on (-R, R)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _leggauss(count: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(count)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=512)
def _unit_gegenbauer(n: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [-1, 1] for the weight (1 - x^2)^{(n-3)/2}.

    Odd n: the weight is a polynomial, so plain Gauss-Legendre absorbs it
    into the weights. Even n: substitute x = sin(theta) to remove the
    algebraic endpoint behavior and use Gauss-Legendre in theta. n = 2
    (weight (1 - x^2)^{-1/2}) is allowed here for the descent machinery even
    though the public reduction operations start at n = 3.
    """
    if n < 2:
        raise ValueError("reduction weight defined for n >= 2 only")
    if n % 2:
        m = (n - 3) // 2
        x, w = _leggauss(count)
        weights = w * (1.0 - x * x) ** m
        nodes = x.copy()
    else:
        theta, w = _leggauss(count)
        theta = theta * (math.pi / 2.0)  # map to (-pi/2, pi/2)
        nodes = np.sin(theta)
        weights = (math.pi / 2.0) * w * np.cos(theta) ** (n - 2)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class GegenbauerRule:
    """Quadrature for integral_{-R}^{R} f(s) (R^2 - s^2)^{(n-3)/2} ds."""

    radius: float
    n: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        values = np.asarray(f(self.nodes), dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise EvaluationError("integrand returned non-finite values on (-R, R)")
        return float(self.weights @ values)


def gegenbauer_rule(radius: float, n: int, count: int = 64) -> GegenbauerRule:
    n = _check_dimension(n, minimum=3)
    if radius <= 0:
        raise ValueError("radius must be positive")
    x, v = _unit_gegenbauer(n, count)
    nodes = radius * x
    weights = radius ** (n - 2) * v
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return GegenbauerRule(float(radius), n, nodes, weights)


def gegenbauer_weight_mass(radius: float, n: int) -> float:
    """Closed form of integral_{-R}^{R} (R^2 - s^2)^{(n-3)/2} ds."""
    return radius ** (n - 2) * _omega(n) / _omega(n - 1)


# ---------------------------------------------------------------------------
# Reduction formulas for integrands depending on a single coordinate
# ---------------------------------------------------------------------------


def _eval_profile(f, s: np.ndarray) -> np.ndarray:
    values = np.asarray(f(s), dtype=np.float64)
    if values.shape != s.shape:  # scalar-only callable
        values = np.asarray(np.vectorize(f)(s), dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise EvaluationError("integrand returned non-finite values")
    return values


def reduce_sphere_integral(f, radius: float, n: int, count: int = 64) -> float:
    """integral over the sphere of radius R in R^n of f(x_n), reduced to 1-D.

    Collapses to omega_{n-1} R^{n-1} * integral of f against the
    (1 - x^2)^{(n-3)/2} weight on [-1, 1].
    """
    n = _check_dimension(n, minimum=3)
    if radius <= 0:
        raise ValueError("radius must be positive")
    x, v = _unit_gegenbauer(n, count)
    values = _eval_profile(f, radius * x)
    return _omega(n - 1) * radius ** (n - 1) * float(v @ values)


def reduce_ball_integral(f, radius: float, n: int, count: int = 64, radial_count: int = 64) -> float:
    """integral over the ball of radius R in R^n of f(x_n), by nested quadrature.

    Outer Gauss-Legendre in the radius, inner Gegenbauer-weighted rule; the
    inner rule is shared across radii through the scaling s = rho * x.
    """
    n = _check_dimension(n, minimum=3)
    if radius <= 0:
        raise ValueError("radius must be positive")
    x, v = _unit_gegenbauer(n, count)
    u, wu = _leggauss(radial_count)
    rho = 0.5 * radius * (u + 1.0)
    w_rho = 0.5 * radius * wu
    values = _eval_profile(f, np.outer(rho, x))
    inner = values @ v
    return _omega(n - 1) * float((w_rho * rho ** (n - 1)) @ inner)


# ---------------------------------------------------------------------------
# Product quadrature on the unit sphere S^{n-1}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphereQuadrature:
    """Nodes (unit vectors) and weights summing to the sphere area omega_n."""

    dim: Dimension
    nodes: np.ndarray  # (K, n)
    weights: np.ndarray  # (K,)
    order: int  # polynomial exactness

    @property
    def n(self) -> int:
        return self.dim.n

    def to_csv(self, path) -> None:
        """Write `index, node components..., weight` rows."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["index"] + [f"x{k + 1}" for k in range(self.n)] + ["weight"])
            for i, (node, w) in enumerate(zip(self.nodes, self.weights)):
                writer.writerow([i] + [repr(float(c)) for c in node] + [repr(float(w))])


def _build_sphere_rule(n: int, polar: int, azimuth: int) -> SphereQuadrature:
    if n == 1:
        nodes = np.array([[1.0], [-1.0]])
        weights = np.array([1.0, 1.0])
        order = 10**6  # the two-point rule is exact for every polynomial
    elif n == 2:
        theta = 2.0 * math.pi * (np.arange(azimuth) + 0.5) / azimuth
        nodes = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(azimuth, 2.0 * math.pi / azimuth)
        order = azimuth - 1
    else:
        # polar angles phi_1..phi_{n-2}: Gauss rule in zeta = cos(phi_k) for
        # the absorbed weight (1 - zeta^2)^{(p-1)/2}, with sin-power
        # p = n - 1 - k; azimuth: uniform midpoint rule.
        zetas, zweights = [], []
        for k in range(1, n - 1):
            p = n - 1 - k
            z, w = roots_gegenbauer(polar, p / 2.0)
            zetas.append(z)
            zweights.append(w)
        theta = 2.0 * math.pi * (np.arange(azimuth) + 0.5) / azimuth
        grids = np.meshgrid(*zetas, theta, indexing="ij")
        zeta_grids, theta_grid = grids[:-1], grids[-1]
        wgrids = np.meshgrid(*zweights, np.full(azimuth, 2.0 * math.pi / azimuth), indexing="ij")

        sines = [np.sqrt(np.clip(1.0 - z * z, 0.0, None)) for z in zeta_grids]
        coords = [None] * n
        prefix = 1.0
        # x_n = zeta_1, x_{n-1} = sin(phi_1) zeta_2, ..., x_2/x_1 from azimuth
        for k, z in enumerate(zeta_grids):
            coords[n - 1 - k] = prefix * z
            prefix = prefix * sines[k]
        coords[1] = prefix * np.cos(theta_grid)
        coords[0] = prefix * np.sin(theta_grid)

        nodes = np.stack([c.ravel() for c in coords], axis=1)
        weights = np.ones_like(theta_grid)
        for w in wgrids:
            weights = weights * w
        weights = weights.ravel()
        order = min(2 * polar - 1, azimuth - 1)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SphereQuadrature(Dimension(n), nodes, weights, order)


@lru_cache(maxsize=128)
def _sphere_rule_cached(n: int, polar: int, azimuth: int) -> SphereQuadrature:
    return _build_sphere_rule(n, polar, azimuth)


def sphere_quadrature(n: int, polar: int | None = None, azimuth: int | None = None) -> SphereQuadrature:
    """Product quadrature on S^{n-1}; memoized per (n, polar, azimuth)."""
    n = _check_dimension(n)
    d_polar, d_azimuth = _DEFAULT_SPHERE_SIZES[n]
    return _sphere_rule_cached(n, polar or d_polar, azimuth or d_azimuth)


def sphere_quadrature_for_order(n: int, order: int) -> SphereQuadrature:
    """Smallest product rule exact for all polynomials of degree <= order."""
    n = _check_dimension(n)
    polar = max(2, (order + 2) // 2)
    azimuth = max(4, order + 1 + (order + 1) % 2)
    return _sphere_rule_cached(n, polar, azimuth)


def integrate_on_sphere(g, center, radius: float, rule: SphereQuadrature) -> float:
    """Quadrature for integral of g over the sphere of given center/radius.

    g must accept points shaped (..., n).
    """
    center = np.asarray(center, dtype=np.float64)
    if center.shape != (rule.n,):
        raise ValueError(f"center has shape {center.shape}, rule is for R^{rule.n}")
    if radius <= 0:
        raise ValueError("radius must be positive")
    points = center + radius * rule.nodes
    values = np.asarray(g(points), dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise EvaluationError("g returned non-finite values on the sphere")
    return radius ** (rule.n - 1) * float(rule.weights @ values)
