"""Affine self-maps w -> a*w + b of the right half-plane."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .errors import NotInvertible

# Real parts of translations below this are treated as exactly zero.
RE_B_TOL = 1e-12
MAX_ITERATE = 10**6


def check_alpha(alpha: float) -> float:
    """Validate a Bergman weight and return it as a float."""
    alpha = float(alpha)
    if not alpha > -1.0 or not math.isfinite(alpha):
        raise ValueError(f"weight alpha must satisfy alpha > -1, got {alpha!r}")
    return alpha


@dataclass(frozen=True)
class AffineSymbol:
    """The self-map phi(w) = a*w + b of the right half-plane.

    ``a`` must be positive and ``b`` must have non-negative real part.  A real
    part within ``RE_B_TOL`` of zero is snapped to exactly zero so that the
    dichotomy Re(b) = 0 / Re(b) > 0 is decided once, at construction.
    """

    a: float
    b: complex = 0j

    def __post_init__(self) -> None:
        a = float(self.a)
        b = complex(self.b)
        if not (a > 0.0 and math.isfinite(a)):
            raise ValueError(f"multiplier a must be a finite positive real, got {self.a!r}")
        if not (math.isfinite(b.real) and math.isfinite(b.imag)):
            raise ValueError(f"translation b must be finite, got {self.b!r}")
        if b.real < -RE_B_TOL:
            raise ValueError(f"translation must satisfy Re(b) >= 0, got Re(b)={b.real!r}")
        if abs(b.real) <= RE_B_TOL:
            b = complex(0.0, b.imag)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __call__(self, w: complex) -> complex:
        return apply(self, w)

    @property
    def re_b_zero(self) -> bool:
        """True when the translation is purely imaginary (C_phi invertible)."""
        return self.b.real == 0.0

    @property
    def is_identity(self) -> bool:
        return self.a == 1.0 and self.b == 0

    def to_json(self) -> dict[str, float]:
        return {"a": self.a, "b_re": self.b.real, "b_im": self.b.imag}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> AffineSymbol:
        return cls(float(data["a"]), complex(float(data["b_re"]), float(data["b_im"])))


IDENTITY = AffineSymbol(1.0, 0j)


@dataclass(frozen=True)
class FixedPoint:
    """Fixed point data of an affine symbol.

    ``point`` is None when there is no finite fixed point (a pure translation)
    or when every point is fixed (the identity, flagged by ``all_fixed``).
    """

    point: complex | None
    interior: bool
    all_fixed: bool = False


def apply(phi: AffineSymbol, w: complex) -> complex:
    return phi.a * complex(w) + phi.b


def compose(phi: AffineSymbol, psi: AffineSymbol) -> AffineSymbol:
    """Return phi o psi."""
    return AffineSymbol(phi.a * psi.a, phi.a * psi.b + phi.b)


def iterate(phi: AffineSymbol, n: int) -> AffineSymbol:
    """The n-fold composition of ``phi`` with itself (identity for n = 0).

    The multiplier is formed as exp(n log a) and the translation factor
    (1 - a^n)/(1 - a) as expm1(n log a)/expm1(log a), which stays accurate
    when a is close to 1.
    """
    n = _check_n(n)
    if n == 0:
        return IDENTITY
    log_a = math.log(phi.a)
    if phi.a == 1.0 or math.expm1(log_a) == 0.0:
        return AffineSymbol(phi.a ** n, n * phi.b)
    try:
        a_n = math.exp(n * log_a)
        factor = math.expm1(n * log_a) / math.expm1(log_a)
    except OverflowError:
        raise OverflowError(f"iterate {n} of {phi} leaves the floating-point range") from None
    if a_n == 0.0 or not math.isfinite(factor * abs(phi.b)):
        raise OverflowError(f"iterate {n} of {phi} leaves the floating-point range")
    return AffineSymbol(a_n, factor * phi.b)


def iterate_log_data(phi: AffineSymbol, n: int) -> tuple[float, float]:
    """Log-domain data of the n-th iterate: (n log a, log(2 Re b_n)).

    ``b_n`` is the translation of the n-th iterate.  The second entry is
    ``-inf`` when Re(b_n) = 0.  Both stay finite for any n up to the cap,
    where forming a^n or b_n directly would overflow.
    """
    n = _check_n(n)
    log_a = math.log(phi.a)
    n_log_a = n * log_a
    re_b = phi.b.real
    if n == 0 or re_b == 0.0:
        return n_log_a, -math.inf
    log_2re = math.log(2.0 * re_b)
    if phi.a == 1.0 or math.expm1(log_a) == 0.0:
        return n_log_a, log_2re + math.log(n)
    # log((a^n - 1)/(a - 1)), written so that neither power overflows.
    if log_a > 0:
        num = n_log_a + math.log(-math.expm1(-n_log_a))
        den = log_a + math.log(-math.expm1(-log_a))
    else:
        num = math.log(-math.expm1(n_log_a))
        den = math.log(-math.expm1(log_a))
    return n_log_a, log_2re + num - den


def inverse(phi: AffineSymbol) -> AffineSymbol:
    """Inverse symbol (1/a, -b/a); only defined when Re(b) = 0."""
    if not phi.re_b_zero:
        raise NotInvertible(
            f"phi(w) = {phi.a}w + {phi.b} has Re(b) > 0; its inverse is not a self-map of the half-plane"
        )
    return AffineSymbol(1.0 / phi.a, -phi.b / phi.a)


def fixed_point(phi: AffineSymbol) -> FixedPoint:
    if phi.a == 1.0:
        if phi.b == 0:
            return FixedPoint(None, interior=True, all_fixed=True)
        return FixedPoint(None, interior=False)
    p = phi.b / (1.0 - phi.a)
    return FixedPoint(p, interior=p.real > 0.0)


def angular_derivative_at_infinity(phi: AffineSymbol) -> float:
    """phi'(oo) = lim w/phi(w) = 1/a."""
    return 1.0 / phi.a


def _check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise TypeError(f"iteration count must be an integer, got {n!r}")
    n = int(n)
    if n < 0:
        raise ValueError(f"iteration count must be non-negative, got {n}")
    if n > MAX_ITERATE:
        raise ValueError(f"iteration count {n} exceeds the cap {MAX_ITERATE}")
    return n
