"""Closed-form solvers for the n-dimensional wave-equation Cauchy problem.

Spherical means (odd n), weighted ball means (even n), d'Alembert (n = 1),
an FFT spectral oracle, and numeric verification of the sinc-kernel
identities that tie them together.
"""

__version__ = "0.1.0"

from .errors import ConfigError, DomainSizeError, EvaluationError, StencilError
from .fields import ScalarField, bump, constant, gaussian, harmonic, make_field, zero
from .geometry import (
    Dimension,
    GegenbauerRule,
    GeomConstants,
    SphereQuadrature,
    constants_for,
    gegenbauer_rule,
    gegenbauer_weight_mass,
    integrate_on_sphere,
    reduce_ball_integral,
    reduce_sphere_integral,
    solution_constant,
    sphere_quadrature,
    sphere_quadrature_for_order,
    unit_ball_volume,
    unit_sphere_area,
)
from .kernels import (
    DistributionFunctional,
    KernelQuery,
    ball_weighted_exponential_average,
    distribution_fourier_check,
    identity_record,
    identity_sweep,
    normalization_constant,
    sinc_kernel,
    sphere_exponential_average,
    verify_even_identity,
    verify_odd_identity,
)
from .montecarlo import ball_monte_carlo, sphere_monte_carlo
from .radial import MeanSeries, RadialDerivativeSpec, default_spec, iterated_radial_derivative
from .solvers import (
    CauchyProblem,
    GridSpec,
    SolutionGrid,
    SolutionSample,
    SpectralState,
    hermitian_defect,
    solution_grid_from_binary,
    solve_dalembert_point,
    solve_even_point,
    solve_odd_point,
    solve_point,
    spectral_energy,
    spectral_solve,
    spectral_state,
    spherical_mean,
    wave_residual,
    weighted_ball_mean,
)

__all__ = [name for name in dir() if not name.startswith("_")]
