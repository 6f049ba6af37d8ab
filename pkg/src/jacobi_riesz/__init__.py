"""Jacobi polynomial expansions on sequences: quadrature, exact kernels,
heat semigroup, fractional integrals, Riesz transform and weighted checks."""

from .errors import ConvergenceError, DomainError, NumericError
from .jacobi import (
    JacobiParams,
    eval_p,
    eval_p_derivative,
    eval_p_table,
    eval_P_unnormalized,
    norm_constant,
    recurrence_coeffs,
    uniform_bound,
)
from .kernels import (
    KernelMatrix,
    fractional_kernel,
    fractional_kernel_matrix,
    fractional_kernel_time_domain,
    heat_kernel,
    heat_kernel_matrix,
    riesz_kernel,
    riesz_kernel_matrix,
    split_even_odd,
)
from .quadrature import QuadratureRule, adaptive_integrate, gauss_jacobi, integrate
from .sequences import (
    FiniteSequence,
    apply_calJ,
    apply_delta,
    apply_delta_star,
    apply_J,
    delta_coeffs,
    truncate_operator,
)
from .special import log_gamma
from .transforms import (
    TransformResult,
    fractional_integral,
    heat_semigroup,
    riesz_sigma_approach,
    riesz_spectral,
    riesz_transform,
)
from .weights import WeightSeq, ap_constant, power_weight, weight_comparability

__version__ = "0.1.0"
