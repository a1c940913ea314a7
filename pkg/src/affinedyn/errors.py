"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """A point lies outside the open right half-plane."""


class WeightMismatch(ValueError):
    """Two objects living in spaces with different weights were combined."""


class NotInvertible(ValueError):
    """The affine symbol has no inverse among self-maps of the half-plane."""


class DivergentIntegral(ValueError):
    """A Gamma-type integral does not converge for the requested exponents."""


class QuadratureNotConverged(RuntimeError):
    """Successive quadrature refinements disagree beyond the tolerance."""


class RegimeMismatch(ValueError):
    """An experiment was called outside the parameter regime it is built for."""


class ZeroAtTarget(ValueError):
    """Every candidate base point gave a vanishing evaluation."""


class ZeroImage(ValueError):
    """The image of the seed vector under the operator is zero."""


class NoInteriorFixedPoint(ValueError):
    """The symbol has no fixed point inside the half-plane."""


class IllConditionedWarning(UserWarning):
    """A Gram matrix is badly conditioned; the computed norm may be inaccurate."""
