"""The iterated radial derivative (1/t d/dt)^m from equally spaced samples.

The operator is applied analytically to a local polynomial fit: with
a_{m,j} defined by the recurrence a_{m+1,j} = (j - 2m) a_{m,j} + a_{m,j-1},

    (1/t d/dt)^m F(t) = sum_{j=1..m} a_{m,j} t^(j-2m) F^(j)(t),

and the derivatives F^(j)(t) come from interpolating F through a symmetric
stencil of degree+1 equally spaced points. The result is exact (to rounding)
whenever F is a polynomial of degree <= the fit degree, which is what makes
polynomial test data bit-tight downstream.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import EvaluationError, StencilError

#: Below h = CONDITIONING_FLAG * t the divided differences start to lose
#: digits faster than the fit gains them; flag such requests.
CONDITIONING_FLAG = 1e-6


@dataclass(frozen=True)
class RadialDerivativeSpec:
    """How to realize (1/t d/dt)^iterations numerically.

    iterations: m, the number of (1/t d/dt) applications.
    h: stencil spacing; must satisfy h < t / (2 m + 6) at the evaluation
       radius so the stencil stays well inside t > 0.
    degree: local polynomial degree of the fit (>= iterations + 2).
    """

    iterations: int
    h: float
    degree: int

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.h <= 0:
            raise ValueError("h must be positive")
        if self.degree < self.iterations + 2:
            raise ValueError("degree must be at least iterations + 2")

    def validate_radius(self, t: float) -> None:
        if t <= 0:
            raise StencilError("evaluation radius must be positive")
        if self.h >= t / (2 * self.iterations + 6):
            raise StencilError(
                f"h = {self.h:g} too large for t = {t:g}: need h < t/(2m+6) = "
                f"{t / (2 * self.iterations + 6):g}"
            )
        if self.h < CONDITIONING_FLAG * t:
            warnings.warn(
                f"stencil spacing h = {self.h:g} below {CONDITIONING_FLAG:g}*t; "
                "divided differences may be rounding-limited",
                RuntimeWarning,
                stacklevel=3,
            )


def default_spec(iterations: int, t: float, oscillation: float = 0.0,
                 extra_degree: int = 0) -> RadialDerivativeSpec:
    """Spacing tuned to the evaluation radius and the integrand oscillation.

    oscillation is the magnitude of d/dt-frequencies present in F (for the
    exponential averages this is |xi|); h*oscillation ~ 0.05 balances the
    fit truncation against rounding.
    """
    h = t / (2 * iterations + 10)
    if oscillation > 0:
        h = min(h, 0.05 / oscillation)
    return RadialDerivativeSpec(iterations, h, 2 * iterations + 4 + extra_degree)


@lru_cache(maxsize=64)
def radial_chain_coefficients(m: int) -> tuple[tuple[int, int], ...]:
    """Pairs (j, a_{m,j}) such that D^m F = sum a_{m,j} t^(j-2m) F^(j)."""
    if m == 0:
        return ((0, 1),)
    coeffs = {1: 1}
    for level in range(1, m):
        nxt: dict[int, int] = {}
        for j, a in coeffs.items():
            nxt[j] = nxt.get(j, 0) + (j - 2 * level) * a
            nxt[j + 1] = nxt.get(j + 1, 0) + a
        coeffs = {j: a for j, a in nxt.items() if a != 0}
    return tuple(sorted(coeffs.items()))


def stencil_offsets(degree: int) -> np.ndarray:
    """Symmetric, equally spaced offsets (in units of h) for degree+1 points."""
    npts = degree + 1
    return np.arange(npts, dtype=np.float64) - (npts - 1) / 2.0


@lru_cache(maxsize=64)
def _fit_matrix(degree: int) -> np.ndarray:
    offsets = stencil_offsets(degree)
    scale = offsets[-1]
    v = np.vander(offsets / scale, increasing=True)
    inv = np.linalg.inv(v)
    inv.setflags(write=False)
    return inv


@dataclass(frozen=True)
class MeanSeries:
    """Samples of a radial profile on a symmetric stencil around some t."""

    radii: np.ndarray
    values: np.ndarray

    @classmethod
    def sample(cls, profile, t: float, spec: RadialDerivativeSpec,
               degree: int | None = None) -> "MeanSeries":
        degree = spec.degree if degree is None else degree
        radii = t + stencil_offsets(degree) * spec.h
        if radii[0] <= 0:
            raise StencilError(
                f"stencil of degree {degree} with h = {spec.h:g} reaches radius "
                f"{radii[0]:g} <= 0 at t = {t:g}")
        values = np.asarray(profile(radii))
        if values.shape != radii.shape:
            values = np.asarray([profile(r) for r in radii])
        if not np.all(np.isfinite(values)):
            raise EvaluationError("profile returned non-finite samples")
        return cls(radii, values)


def _fit_derivatives(series: MeanSeries, h: float, max_order: int) -> np.ndarray:
    """F^(0..max_order) at the stencil center from the polynomial interpolant."""
    degree = len(series.radii) - 1
    if max_order > degree:
        raise StencilError(f"need derivative order {max_order} but fit degree is {degree}")
    scale = stencil_offsets(degree)[-1] * h
    coeffs = _fit_matrix(degree) @ series.values
    return np.array(
        [math.factorial(j) * coeffs[j] / scale**j for j in range(max_order + 1)]
    )


def chain_apply(series: MeanSeries, m: int, t: float, h: float,
                time_derivative: bool = False):
    """Evaluate (1/t d/dt)^m at t from samples; optionally also its d/dt.

    Returns val, or (val, dval) when time_derivative is set.
    """
    chain = radial_chain_coefficients(m)
    max_order = m + (1 if time_derivative else 0)
    derivs = _fit_derivatives(series, h, max_order)
    val = sum(a * t ** (j - 2 * m) * derivs[j] for j, a in chain)
    if not time_derivative:
        return val
    dval = sum(
        a * ((j - 2 * m) * t ** (j - 2 * m - 1) * derivs[j] + t ** (j - 2 * m) * derivs[j + 1])
        for j, a in chain
    )
    return val, dval


def iterated_radial_derivative(profile, spec: RadialDerivativeSpec, t: float):
    """(1/t d/dt)^iterations of the sampled profile, evaluated at t.

    profile is called on the array of stencil radii (scalar fallback is
    handled); complex-valued profiles are supported and give complex output.
    """
    spec.validate_radius(t)
    series = MeanSeries.sample(profile, t, spec)
    result = chain_apply(series, spec.iterations, t, spec.h)
    if np.iscomplexobj(series.values):
        return complex(result)
    return float(result)
