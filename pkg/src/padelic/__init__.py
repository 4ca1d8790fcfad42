"""Exact p-adic and adelic analysis with closed-form quadratic propagators."""

from .action import (
    BoundaryData,
    ClassicalAction,
    FundamentalMatrix,
    QuadraticLagrangian,
    action_coefficients,
    full_action,
    solve_fundamental,
)
from .adelic import (
    Adele,
    adelic_kernel,
    chi_product,
    group_condition_check,
    hilbert_product,
    lambda_product,
    norm_product,
    vacuum_check,
)
from .config import Config, ConfigError
from .exact import (
    Amplitude,
    BudgetExceededError,
    ConvergenceError,
    PadelicError,
    SingularError,
    UnitPhase,
    Valuation,
    norm,
    valuation,
)
from .integrals import gaussian1d, gaussian_nd
from .kernel import PropagatorRequest, composition_check, kernel_v, real_kernel
from .number_theory import chi, hilbert, lambda_v, legendre, omega

__version__ = "0.1.0"

__all__ = [
    "Adele",
    "Amplitude",
    "BoundaryData",
    "BudgetExceededError",
    "ClassicalAction",
    "Config",
    "ConfigError",
    "ConvergenceError",
    "FundamentalMatrix",
    "PadelicError",
    "PropagatorRequest",
    "QuadraticLagrangian",
    "SingularError",
    "UnitPhase",
    "Valuation",
    "action_coefficients",
    "adelic_kernel",
    "chi",
    "chi_product",
    "composition_check",
    "full_action",
    "gaussian1d",
    "gaussian_nd",
    "group_condition_check",
    "hilbert",
    "hilbert_product",
    "kernel_v",
    "lambda_product",
    "lambda_v",
    "legendre",
    "norm",
    "norm_product",
    "omega",
    "real_kernel",
    "solve_fundamental",
    "vacuum_check",
    "valuation",
]
