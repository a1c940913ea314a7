"""Affine composition operators on weighted Bergman spaces of the right half-plane."""

from .dynamics import DynamicsReport, SpectrumDescriptor, classify, is_hyperbolic, operator_norm, spectrum
from .errors import (
    DivergentIntegral,
    DomainError,
    IllConditionedWarning,
    NoInteriorFixedPoint,
    NotInvertible,
    QuadratureNotConverged,
    RegimeMismatch,
    WeightMismatch,
    ZeroAtTarget,
    ZeroImage,
)
from .kernelspace import (
    KernelVector,
    apply_adjoint,
    apply_composition,
    evaluate,
    gram,
    inner_product,
    kernel_eval,
    kernel_norm,
    norm,
    prune,
)
from .laplace import ProfileFunction, ProfileTerm, hat_adjoint_apply, hat_apply, isometry_check, laplace_transform, mu_norm
from .symbols import AffineSymbol, angular_derivative_at_infinity, compose, fixed_point, inverse, iterate

__version__ = "0.1.0"

__all__ = [
    "AffineSymbol",
    "DivergentIntegral",
    "DomainError",
    "DynamicsReport",
    "IllConditionedWarning",
    "KernelVector",
    "NoInteriorFixedPoint",
    "NotInvertible",
    "ProfileFunction",
    "ProfileTerm",
    "QuadratureNotConverged",
    "RegimeMismatch",
    "SpectrumDescriptor",
    "WeightMismatch",
    "ZeroAtTarget",
    "ZeroImage",
    "angular_derivative_at_infinity",
    "apply_adjoint",
    "apply_composition",
    "classify",
    "compose",
    "evaluate",
    "fixed_point",
    "gram",
    "hat_adjoint_apply",
    "hat_apply",
    "inner_product",
    "inverse",
    "is_hyperbolic",
    "isometry_check",
    "iterate",
    "kernel_eval",
    "kernel_norm",
    "laplace_transform",
    "mu_norm",
    "norm",
    "operator_norm",
    "prune",
    "spectrum",
]
