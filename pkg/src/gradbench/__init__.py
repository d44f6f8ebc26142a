"""Finite-difference gradients and Hessians in bases adapted from the
history of descent directions, with a BFGS harness and benchmark tooling.
"""

from .direction_history import DirectionHistory, mgs_orthonormalize
from .finite_difference import (
    BasisMatrix,
    FdScheme,
    GradientEstimate,
    HessianEstimate,
    IllConditionedBasisError,
    ObjectiveFn,
    directional_derivative,
    gradient_in_basis,
    hessian_in_basis,
    vanilla_gradient,
)
from .optimizer import (
    BfgsOptions,
    LineSearchError,
    OptimResult,
    bfgs_minimize,
    line_search,
)
from .smart_estimator import SmartEstimator, wrap
from .testbed import FUNCTION_NAMES, TestFunction, get_test_function, grad_mse

__version__ = "0.1.0"

__all__ = [
    "BasisMatrix",
    "BfgsOptions",
    "DirectionHistory",
    "FdScheme",
    "FUNCTION_NAMES",
    "GradientEstimate",
    "HessianEstimate",
    "IllConditionedBasisError",
    "LineSearchError",
    "ObjectiveFn",
    "OptimResult",
    "SmartEstimator",
    "TestFunction",
    "bfgs_minimize",
    "directional_derivative",
    "get_test_function",
    "grad_mse",
    "gradient_in_basis",
    "hessian_in_basis",
    "line_search",
    "mgs_orthonormalize",
    "vanilla_gradient",
    "wrap",
]
