"""Point and grid solvers for the wave-equation Cauchy problem.

Three independent routes:

* odd dimensions >= 3: iterated radial derivatives of r^(n-2)-scaled sphere
  averages of the data (Kirchhoff's formula when n = 3);
* even dimensions >= 2: the same chain on r^n-scaled weighted ball averages
  (Poisson's formula when n = 2);
* n = 1: the two traveling waves plus the integrated velocity.

A periodic FFT solver provides an independent oracle: each Fourier mode is a
harmonic oscillator, so the evolution is exact multiplication by cos(|k| t)
and t sinc(|k| t) on the lattice.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainSizeError, EvaluationError
from .fields import ScalarField
from .geometry import (
    Dimension,
    SphereQuadrature,
    _leggauss,
    _omega,
    solution_constant,
    sphere_quadrature,
    unit_ball_volume,
)
from .radial import MeanSeries, RadialDerivativeSpec, chain_apply, default_spec, stencil_offsets

_CHUNK_BYTES = 1 << 26  # cap on transient point arrays in the means solvers

BINARY_MAGIC = b"WAVE"
BINARY_VERSION = 1


@dataclass(frozen=True)
class CauchyProblem:
    phi: ScalarField
    psi: ScalarField
    dim: Dimension

    def __post_init__(self):
        if self.phi.dim != self.dim.n or self.psi.dim != self.dim.n:
            raise ValueError("initial data dimension does not match the problem dimension")

    @property
    def support_radius(self) -> float:
        return max(self.phi.support_radius, self.psi.support_radius)


@dataclass(frozen=True)
class SolutionSample:
    x: np.ndarray
    t: float
    u: float
    method: str
    error_estimate: float


# ---------------------------------------------------------------------------
# Means
# ---------------------------------------------------------------------------


def _sphere_sums(field, center: np.ndarray, radii: np.ndarray, rule: SphereQuadrature) -> np.ndarray:
    """S(r_j) = sum_i w_i field(center + r_j node_i), chunked over nodes."""
    n = rule.n
    n_radii = len(radii)
    out = np.zeros(n_radii)
    chunk = max(1, int(_CHUNK_BYTES // (max(n_radii, 1) * n * 8)))
    for start in range(0, rule.nodes.shape[0], chunk):
        nodes = rule.nodes[start:start + chunk]
        points = center + radii[:, None, None] * nodes[None, :, :]
        values = field(points)
        if not np.all(np.isfinite(values)):
            raise EvaluationError("field returned non-finite values on a sphere")
        out += values @ rule.weights[start:start + chunk]
    return out


def spherical_mean(psi: ScalarField, x, t: float, rule: SphereQuadrature | None = None) -> float:
    """Average of psi over the sphere of radius t centered at x."""
    x = np.asarray(x, dtype=np.float64)
    if t <= 0:
        raise ValueError("radius must be positive")
    rule = rule or sphere_quadrature(psi.dim)
    if rule.n != psi.dim or x.shape != (psi.dim,):
        raise ValueError("dimension mismatch between field, point and rule")
    return float(_sphere_sums(psi, x, np.array([t]), rule)[0] / _omega(rule.n))


def _weighted_sums(field, center: np.ndarray, radii: np.ndarray, rule: SphereQuadrature,
                   theta_count: int) -> np.ndarray:
    """W(R_j) = integral_0^{pi/2} sin^(n-1)(theta) S(R_j sin theta) d(theta)."""
    n = rule.n
    u, wu = _leggauss(theta_count)
    theta = (math.pi / 4.0) * (u + 1.0)
    w_theta = (math.pi / 4.0) * wu
    sin_theta = np.sin(theta)
    shell = (radii[:, None] * sin_theta[None, :]).ravel()
    sums = _sphere_sums(field, center, shell, rule).reshape(len(radii), theta_count)
    return (sums * sin_theta ** (n - 1)) @ w_theta


def weighted_ball_mean(psi: ScalarField, x, t: float, rule: SphereQuadrature | None = None,
                       theta_count: int = 64) -> float:
    """Weighted average of psi over the ball of radius t centered at x.

    The weight is (t^2 - |x - y|^2)^(-1/2) with normalization 1/(v_n t^n);
    the boundary singularity is removed by the r = t sin(theta) substitution.
    Even dimensions only.
    """
    x = np.asarray(x, dtype=np.float64)
    if t <= 0:
        raise ValueError("radius must be positive")
    if psi.dim % 2:
        raise ValueError("weighted ball mean is the even-dimension construction")
    rule = rule or sphere_quadrature(psi.dim)
    if rule.n != psi.dim or x.shape != (psi.dim,):
        raise ValueError("dimension mismatch between field, point and rule")
    w = _weighted_sums(psi, x, np.array([t]), rule, theta_count)[0]
    return float(w / (unit_ball_volume(psi.dim) * t))


# ---------------------------------------------------------------------------
# Point solvers
# ---------------------------------------------------------------------------


def _resolve_spec(problem: CauchyProblem, t: float, spec: RadialDerivativeSpec | None):
    m = problem.dim.derivative_order
    if spec is None:
        spec = default_spec(m, t)
    elif spec.iterations != m:
        raise ValueError(f"spec.iterations = {spec.iterations}, dimension needs {m}")
    spec.validate_radius(t)
    return spec


def _means_value(problem: CauchyProblem, x: np.ndarray, t: float, h: float,
                 spec: RadialDerivativeSpec, rule: SphereQuadrature,
                 theta_count: int) -> float:
    """Both solution terms from stencil-sampled means at spacing h."""
    n = problem.dim.n
    m = problem.dim.derivative_order
    constant = solution_constant(n)

    if problem.dim.is_odd:
        def series_for(field, degree):
            radii = t + stencil_offsets(degree) * h
            values = radii ** (n - 2) * _sphere_sums(field, x, radii, rule) / _omega(n)
            return MeanSeries(radii, values)
    else:
        def series_for(field, degree):
            radii = t + stencil_offsets(degree) * h
            sums = _weighted_sums(field, x, radii, rule, theta_count)
            values = radii ** (n - 1) * sums / unit_ball_volume(n)
            return MeanSeries(radii, values)

    total = 0.0
    if not problem.psi.is_zero:
        total += float(chain_apply(series_for(problem.psi, spec.degree), m, t, h))
    if not problem.phi.is_zero:
        _, dval = chain_apply(series_for(problem.phi, spec.degree + 2), m, t, h,
                              time_derivative=True)
        total += float(dval)
    return constant * total


def _solve_means_point(problem: CauchyProblem, x, t: float, method: str,
                       spec: RadialDerivativeSpec | None, rule: SphereQuadrature | None,
                       theta_count: int, with_error: bool) -> SolutionSample:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (problem.dim.n,):
        raise ValueError(f"point must have {problem.dim.n} components")
    if t < 0:
        raise ValueError("time must be non-negative")
    if t == 0.0:
        return SolutionSample(x, 0.0, float(problem.phi(x[None, :])[0]), method, 0.0)
    spec = _resolve_spec(problem, t, spec)
    rule = rule or sphere_quadrature(problem.dim.n)
    u = _means_value(problem, x, t, spec.h, spec, rule, theta_count)
    err = math.nan
    if with_error:
        u_half = _means_value(problem, x, t, spec.h / 2.0, spec, rule, theta_count)
        err = abs(u - u_half)
    return SolutionSample(x, t, u, method, err)


def solve_odd_point(problem: CauchyProblem, x, t: float,
                    spec: RadialDerivativeSpec | None = None,
                    rule: SphereQuadrature | None = None,
                    with_error: bool = True) -> SolutionSample:
    """Spherical-means solution at one point; odd dimensions >= 3."""
    if not problem.dim.is_odd or problem.dim.n < 3:
        raise ValueError("spherical-means solver needs an odd dimension >= 3")
    return _solve_means_point(problem, x, t, "spherical_means", spec, rule, 0, with_error)


def solve_even_point(problem: CauchyProblem, x, t: float,
                     spec: RadialDerivativeSpec | None = None,
                     rule: SphereQuadrature | None = None,
                     theta_count: int = 64,
                     with_error: bool = True) -> SolutionSample:
    """Weighted-ball-means solution at one point; even dimensions >= 2."""
    if problem.dim.is_odd:
        raise ValueError("weighted-means solver needs an even dimension")
    return _solve_means_point(problem, x, t, "weighted_means", spec, rule, theta_count, with_error)


def solve_dalembert_point(problem: CauchyProblem, x: float, t: float) -> SolutionSample:
    """The 1-D traveling-wave solution with adaptive quadrature for the velocity term."""
    if problem.dim.n != 1:
        raise ValueError("d'Alembert solver is for dimension 1")
    if t < 0:
        raise ValueError("time must be non-negative")
    from scipy.integrate import quad

    x = float(np.asarray(x, dtype=np.float64).reshape(()))
    phi, psi = problem.phi, problem.psi
    travel = 0.5 * (float(phi(np.array([x - t]))) + float(phi(np.array([x + t]))))
    if psi.is_zero or t == 0.0:
        integral, abserr = 0.0, 0.0
    else:
        integral, abserr = quad(lambda s: float(psi(np.array([s]))), x - t, x + t,
                                epsabs=1e-12, epsrel=1e-12, limit=200)
    return SolutionSample(np.array([x]), t, travel + 0.5 * integral, "dalembert", 0.5 * abserr)


def solve_point(problem: CauchyProblem, x, t: float, **kwargs) -> SolutionSample:
    """Dispatch to d'Alembert (n = 1) or the parity-appropriate means solver."""
    if problem.dim.n == 1:
        return solve_dalembert_point(problem, x, t)
    if problem.dim.is_odd:
        return solve_odd_point(problem, x, t, **kwargs)
    return solve_even_point(problem, x, t, **kwargs)


# ---------------------------------------------------------------------------
# Spectral oracle on a periodic grid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Periodic grid on [-L, L)^n with N points per axis."""

    half_width: float
    points: int
    dim: int

    def __post_init__(self):
        if self.half_width <= 0 or self.points < 2 or not 1 <= self.dim:
            raise ValueError("invalid grid specification")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    def axis(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.points)

    def mesh(self) -> np.ndarray:
        axes = [self.axis()] * self.dim
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def wavenumber_norm(self) -> np.ndarray:
        k = 2.0 * math.pi * np.fft.fftfreq(self.points, d=self.spacing)
        grids = np.meshgrid(*([k] * self.dim), indexing="ij")
        out = np.zeros(grids[0].shape)
        for g in grids:
            out += g * g
        return np.sqrt(out)


@dataclass(frozen=True)
class SpectralState:
    """Fourier coefficients of the initial data on a periodic lattice."""

    grid: GridSpec
    phi_hat: np.ndarray
    psi_hat: np.ndarray


@dataclass(frozen=True)
class SolutionGrid:
    values: np.ndarray
    grid: GridSpec
    t: float
    method: str
    error_estimate: float

    def value_at_index(self, index) -> float:
        return float(self.values[tuple(index)])

    def index_of(self, point) -> tuple[int, ...]:
        point = np.asarray(point, dtype=np.float64)
        idx = np.rint((point + self.grid.half_width) / self.grid.spacing).astype(int)
        lattice = -self.grid.half_width + idx * self.grid.spacing
        if not np.allclose(lattice, point, atol=1e-9):
            raise ValueError("point is not on the grid lattice")
        return tuple(int(i) % self.grid.points for i in idx)

    def value_at(self, point) -> float:
        return self.value_at_index(self.index_of(point))

    def to_csv(self, path) -> None:
        mesh = self.grid.mesh().reshape(-1, self.grid.dim)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([f"x{k + 1}" for k in range(self.grid.dim)]
                            + ["t", "u", "method", "error_estimate"])
            flat = self.values.ravel()
            for row, value in zip(mesh, flat):
                writer.writerow([repr(float(c)) for c in row]
                                + [repr(self.t), repr(float(value)), self.method,
                                   repr(float(self.error_estimate))])

    def to_binary(self, path) -> None:
        """Little-endian layout: magic 'WAVE', version u32, n u32, N per axis
        (u32 each), L f64, t f64, then the values as f64 in C order."""
        with open(path, "wb") as fh:
            fh.write(BINARY_MAGIC)
            fh.write(struct.pack("<II", BINARY_VERSION, self.grid.dim))
            fh.write(struct.pack(f"<{self.grid.dim}I", *([self.grid.points] * self.grid.dim)))
            fh.write(struct.pack("<dd", self.grid.half_width, self.t))
            fh.write(np.ascontiguousarray(self.values, dtype="<f8").tobytes())


def solution_grid_from_binary(path) -> SolutionGrid:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != BINARY_MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        version, dim = struct.unpack("<II", fh.read(8))
        if version != BINARY_VERSION:
            raise ValueError(f"unsupported version {version}")
        counts = struct.unpack(f"<{dim}I", fh.read(4 * dim))
        if len(set(counts)) != 1:
            raise ValueError("only uniform per-axis point counts are written")
        half_width, t = struct.unpack("<dd", fh.read(16))
        values = np.frombuffer(fh.read(), dtype="<f8").reshape(counts)
    return SolutionGrid(values.copy(), GridSpec(half_width, counts[0], dim), t,
                        "binary", math.nan)


def _sample_on_grid(field: ScalarField, grid: GridSpec) -> np.ndarray:
    return field(grid.mesh())


def spectral_state(problem: CauchyProblem, grid: GridSpec) -> SpectralState:
    if grid.dim != problem.dim.n:
        raise ValueError("grid dimension does not match the problem")
    phi_hat = np.fft.fftn(_sample_on_grid(problem.phi, grid))
    psi_hat = np.fft.fftn(_sample_on_grid(problem.psi, grid))
    return SpectralState(grid, phi_hat, psi_hat)


def _check_wraparound(problem: CauchyProblem, grid: GridSpec, t: float) -> None:
    for field in (problem.phi, problem.psi):
        if field.is_zero or field.periodic:
            continue  # wrap-safe: nothing to alias
        if not math.isfinite(field.support_radius):
            raise DomainSizeError("spectral solver needs compactly supported data "
                                  "(finite support_radius)")
        if grid.half_width <= field.support_radius + t:
            raise DomainSizeError(
                f"grid half-width {grid.half_width:g} <= support "
                f"{field.support_radius:g} + t {t:g}: the periodic images would "
                "contaminate the solution"
            )


def spectral_solve(problem: CauchyProblem, grid: GridSpec, t: float,
                   state: SpectralState | None = None) -> SolutionGrid:
    """Evolve by the exact per-mode oscillator factors and invert the FFT."""
    if t < 0:
        raise ValueError("time must be non-negative")
    _check_wraparound(problem, grid, t)
    state = state or spectral_state(problem, grid)
    knorm = grid.wavenumber_norm()
    u_hat = _kernels.wave_multiplier(
        np.ascontiguousarray(state.phi_hat.ravel()),
        np.ascontiguousarray(state.psi_hat.ravel()),
        np.ascontiguousarray(knorm.ravel()),
        float(t),
    ).reshape(state.phi_hat.shape)
    u = np.fft.ifftn(u_hat)
    return SolutionGrid(np.ascontiguousarray(u.real), grid, float(t), "spectral",
                        float(np.max(np.abs(u.imag))))


def hermitian_defect(state: SpectralState) -> float:
    """Max deviation from the conjugate symmetry real data must satisfy."""
    worst = 0.0
    for arr in (state.phi_hat, state.psi_hat):
        mirrored = arr
        for axis in range(arr.ndim):
            mirrored = np.roll(np.flip(mirrored, axis=axis), 1, axis=axis)
        worst = max(worst, float(np.max(np.abs(arr - np.conj(mirrored)))))
    return worst


def spectral_energy(state: SpectralState, t: float) -> float:
    """Discrete energy sum |u_hat_t|^2 + |k|^2 |u_hat|^2; conserved in t."""
    knorm = state.grid.wavenumber_norm()
    zt = knorm * t
    u_hat = state.phi_hat * np.cos(zt) + state.psi_hat * t * _kernels.sinc_ratio_numpy(zt)
    ut_hat = -state.phi_hat * knorm * np.sin(zt) + state.psi_hat * np.cos(zt)
    return float(np.sum(np.abs(ut_hat) ** 2 + (knorm * np.abs(u_hat)) ** 2))


# ---------------------------------------------------------------------------
# Discrete wave-operator residual on an (x, t) slab
# ---------------------------------------------------------------------------


def wave_residual(values: np.ndarray, h_x: float, h_t: float) -> float:
    """Max |second time difference - discrete Laplacian| on slab interior.

    values has the time axis first: shape (T, N_1, ..., N_d) with T >= 3 and
    every spatial extent >= 3.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim < 2:
        raise ValueError("slab must have a time axis and at least one space axis")
    if values.shape[0] < 3 or any(s < 3 for s in values.shape[1:]):
        raise ValueError("slab too thin: need >= 3 points along every axis")
    interior = values[(slice(1, -1),) * values.ndim]
    u_tt = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / (h_t * h_t)
    u_tt = u_tt[(slice(None),) + (slice(1, -1),) * (values.ndim - 1)]
    lap = np.zeros_like(interior)
    for axis in range(1, values.ndim):
        lo = [slice(1, -1)] * values.ndim
        hi = [slice(1, -1)] * values.ndim
        lo[axis] = slice(0, -2)
        hi[axis] = slice(2, None)
        lap += (values[tuple(hi)] - 2.0 * interior + values[tuple(lo)]) / (h_x * h_x)
    return float(np.max(np.abs(u_tt - lap)))


def samples_to_csv(samples: list[SolutionSample], path) -> None:
    """CSV with the SolutionGrid column layout, one row per sample."""
    if not samples:
        raise ValueError("no samples to write")
    n = len(samples[0].x)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{k + 1}" for k in range(n)] + ["t", "u", "method", "error_estimate"])
        for s in samples:
            writer.writerow([repr(float(c)) for c in s.x]
                            + [repr(float(s.t)), repr(float(s.u)), s.method,
                               repr(float(s.error_estimate))])
