"""Finite combinations of reproducing kernels of the weighted Bergman space.

A vector f = sum_i c_i k_{w_i} is stored by its points and coefficients.
Inner products reduce to Gram sums through <k_w, k_z> = k_w(z), so every
norm here is exact up to floating-point rounding.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .errors import DomainError, IllConditionedWarning, WeightMismatch
from .symbols import AffineSymbol, check_alpha

PRUNE_TOL = 1e-13
COND_WARN = 1e12
NEGATIVE_FLAG = 1e-8


def kernel_constant(alpha: float) -> float:
    """2^alpha (alpha + 1), the numerator of the kernel."""
    return 2.0 ** alpha * (alpha + 1.0)


def kernel_eval(alpha: float, w: complex, z: complex) -> complex:
    """k_w(z) = 2^alpha (alpha+1) / (z + conj(w))^(alpha+2), principal power."""
    alpha = check_alpha(alpha)
    w, z = complex(w), complex(z)
    if w.real <= 0 or z.real <= 0:
        raise DomainError(f"kernel arguments must lie in the right half-plane, got w={w}, z={z}")
    return kernel_constant(alpha) * (z + w.conjugate()) ** (-(alpha + 2.0))


def kernel_log_norm(alpha: float, w: np.ndarray | complex) -> np.ndarray | float:
    """log ||k_w|| = (log(2^alpha (alpha+1)) - (alpha+2) log(2 Re w)) / 2."""
    re = np.real(w)
    return 0.5 * (math.log(kernel_constant(alpha)) - (alpha + 2.0) * np.log(2.0 * re))


def kernel_norm(alpha: float, w: complex) -> float:
    """||k_w|| = sqrt(k_w(w))."""
    with np.errstate(over="ignore", under="ignore"):
        sq = kernel_constant(alpha) * (2.0 * complex(w).real) ** (-(alpha + 2.0))
    if 0.0 < sq < math.inf:
        return math.sqrt(sq)
    return float(np.exp(kernel_log_norm(alpha, complex(w))))


@dataclass(frozen=True, eq=False)
class KernelVector:
    """f = sum_i coeffs[i] * k_{points[i]} in the space with weight ``alpha``."""

    alpha: float
    points: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def __post_init__(self) -> None:
        alpha = check_alpha(self.alpha)
        pts = np.atleast_1d(np.asarray(self.points, dtype=complex)).copy()
        cs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if pts.ndim != 1 or pts.shape != cs.shape:
            raise ValueError(f"points and coeffs must be 1-D of equal length, got {pts.shape} and {cs.shape}")
        if pts.size and not np.all(pts.real > 0):
            bad = pts[~(pts.real > 0)][0]
            raise DomainError(f"kernel point {bad} is not in the right half-plane")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(cs))):
            raise ValueError("kernel points and coefficients must be finite")
        pts.flags.writeable = False
        cs.flags.writeable = False
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def kernel(cls, w: complex, alpha: float, coeff: complex = 1.0) -> KernelVector:
        return cls(alpha, [complex(w)], [complex(coeff)])

    @classmethod
    def zero(cls, alpha: float) -> KernelVector:
        return cls(alpha)

    def __len__(self) -> int:
        return int(self.points.size)

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other: KernelVector) -> KernelVector:
        if not isinstance(other, KernelVector):
            return NotImplemented
        _check_same_weight(self, other)
        return KernelVector(
            self.alpha,
            np.concatenate([self.points, other.points]),
            np.concatenate([self.coeffs, other.coeffs]),
        )

    def __neg__(self) -> KernelVector:
        return KernelVector(self.alpha, self.points, -self.coeffs)

    def __sub__(self, other: KernelVector) -> KernelVector:
        if not isinstance(other, KernelVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: complex) -> KernelVector:
        return KernelVector(self.alpha, self.points, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> KernelVector:
        return self * (1.0 / complex(scalar))

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "terms": [
                {"w_re": w.real, "w_im": w.imag, "c_re": c.real, "c_im": c.imag}
                for w, c in zip(self.points.tolist(), self.coeffs.tolist())
            ],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> KernelVector:
        terms = data.get("terms", [])
        return cls(
            float(data["alpha"]),
            [complex(t["w_re"], t["w_im"]) for t in terms],
            [complex(t["c_re"], t["c_im"]) for t in terms],
        )


def _check_same_weight(f: KernelVector, g: KernelVector) -> None:
    if f.alpha != g.alpha:
        raise WeightMismatch(f"weights differ: {f.alpha} vs {g.alpha}")


def _check_points(points: Iterable[complex]) -> np.ndarray:
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if pts.size and not np.all(pts.real > 0):
        raise DomainError("all points must lie in the right half-plane")
    return pts


def gram(points, alpha: float) -> np.ndarray:
    """G[i, j] = k_{w_j}(w_i) for the given points."""
    alpha = check_alpha(alpha)
    pts = _check_points(points)
    s = pts[:, None] + pts.conj()[None, :]
    return kernel_constant(alpha) * s ** (-(alpha + 2.0))


def _unit_gram(points: np.ndarray, other: np.ndarray, p: float) -> np.ndarray:
    # <k_w, k_z> / (||k_w|| ||k_z||); every entry has modulus <= 1.
    re = np.sqrt(points.real)[:, None] * np.sqrt(other.real)[None, :]
    return (2.0 * re / (points[:, None] + other.conj()[None, :])) ** p


def _scaled_weights(f: KernelVector) -> tuple[np.ndarray, float]:
    # c_i ||k_{w_i}|| rescaled so the largest has modulus 1, plus log of that scale.
    mask = f.coeffs != 0
    logs = np.full(len(f), -np.inf)
    logs[mask] = np.log(np.abs(f.coeffs[mask])) + kernel_log_norm(f.alpha, f.points[mask])
    top = float(np.max(logs)) if mask.any() else -np.inf
    if not np.isfinite(top):
        return np.zeros(len(f), dtype=complex), -np.inf
    u = np.zeros(len(f), dtype=complex)
    u[mask] = np.exp(logs[mask] - top) * (f.coeffs[mask] / np.abs(f.coeffs[mask]))
    return u, top


def inner_product(f: KernelVector, g: KernelVector) -> complex:
    """<f, g>, linear in f and conjugate-linear in g."""
    _check_same_weight(f, g)
    if len(f) == 0 or len(g) == 0:
        return 0j
    u, su = _scaled_weights(f)
    v, sv = _scaled_weights(g)
    if not (np.isfinite(su) and np.isfinite(sv)):
        return 0j
    # M[j, i] = <k_{w_i}, k_{z_j}> normalised.
    m = _unit_gram(g.points, f.points, f.alpha + 2.0)
    return complex(np.vdot(v, m @ u) * math.exp(su + sv))


def _norm_parts(f: KernelVector, check: bool) -> tuple[float, float]:
    """Return (log_scale, unit_norm) with ||f|| = exp(log_scale) * unit_norm."""
    g = combine(f)
    u, scale = _scaled_weights(g)
    if not np.isfinite(scale):
        return -math.inf, 0.0
    ghat = _unit_gram(g.points, g.points, g.alpha + 2.0)
    raw = float(np.real(np.vdot(u, ghat @ u)))
    if check:
        mass = float(np.sum(np.abs(u) ** 2))
        if raw < -NEGATIVE_FLAG * mass:
            warnings.warn(
                f"Gram quadratic form is negative ({raw:.3e} against mass {mass:.3e}); "
                "kernel points are nearly dependent",
                IllConditionedWarning,
                stacklevel=3,
            )
        if len(g) > 1:
            cond = gram_condition_unit(ghat)
            if cond > COND_WARN:
                warnings.warn(
                    f"Gram matrix condition estimate {cond:.3e} exceeds {COND_WARN:.0e}",
                    IllConditionedWarning,
                    stacklevel=3,
                )
    return scale, math.sqrt(max(raw, 0.0))


def gram_condition_unit(ghat: np.ndarray) -> float:
    eig = np.linalg.eigvalsh(ghat)
    lo = eig[0]
    if lo <= 0:
        return math.inf
    return float(eig[-1] / lo)


def gram_condition(points, alpha: float) -> float:
    """Condition estimate of the diagonally equilibrated Gram matrix."""
    pts = _check_points(points)
    return gram_condition_unit(_unit_gram(pts, pts, check_alpha(alpha) + 2.0))


def norm(f: KernelVector, check: bool = True) -> float:
    """||f||; emits IllConditionedWarning when the Gram data are unreliable."""
    scale, unit = _norm_parts(f, check)
    if unit == 0.0:
        return 0.0
    return unit * math.exp(scale)


def log_norm(f: KernelVector, check: bool = True) -> float:
    """log ||f|| without forming ||f|| (no overflow for huge coefficients)."""
    scale, unit = _norm_parts(f, check)
    if unit == 0.0:
        return -math.inf
    return scale + math.log(unit)


def shifted_log_norm(f: KernelVector, log_two_shift: float) -> float:
    """log || sum_i c_i k_{w_i + s} || for the real shift s = exp(log_two_shift)/2.

    Translating every point by a real s turns the Gram entries into
    k/(w_i + conj(w_j) + 2s)^(alpha+2).  Shifts far beyond the point cloud are
    handled by the leading term |sum c_i| ||k_s||, whose relative error is
    below |w|/s.
    """
    if log_two_shift == -math.inf:
        return log_norm(f)
    g = combine(f)
    if len(g) == 0:
        return -math.inf
    span = float(np.max(np.abs(g.points)))
    if log_two_shift < 700.0 and math.exp(log_two_shift) < 1e14 * max(span, 1.0):
        s = 0.5 * math.exp(log_two_shift)
        return log_norm(KernelVector(g.alpha, g.points + s, g.coeffs))
    total = abs(complex(np.sum(g.coeffs)))
    if total == 0.0:
        raise FloatingPointError("leading term cancels; shifted norm needs higher order")
    return math.log(total) + 0.5 * (math.log(kernel_constant(g.alpha)) - (g.alpha + 2.0) * log_two_shift)


def evaluate(f: KernelVector, z):
    """f(z) = sum_i c_i k_{w_i}(z); ``z`` may be a scalar or an array."""
    zz = np.asarray(z, dtype=complex)
    if np.any(zz.real <= 0):
        raise DomainError("evaluation point must lie in the right half-plane")
    if len(f) == 0:
        out = np.zeros(zz.shape, dtype=complex)
    else:
        base = zz[..., None] + f.points.conj()
        out = kernel_constant(f.alpha) * np.sum(f.coeffs * base ** (-(f.alpha + 2.0)), axis=-1)
    return complex(out) if out.ndim == 0 else out


def apply_composition(phi: AffineSymbol, f: KernelVector) -> KernelVector:
    """C_phi f = f o phi, using C_phi k_w = a^-(alpha+2) k_{(w + conj b)/a}."""
    return KernelVector(
        f.alpha,
        (f.points + np.conj(phi.b)) / phi.a,
        f.coeffs * phi.a ** (-(f.alpha + 2.0)),
    )


def apply_adjoint(phi: AffineSymbol, f: KernelVector) -> KernelVector:
    """C_phi^* f, using C_phi^* k_w = k_{phi(w)}."""
    return KernelVector(f.alpha, phi.a * f.points + phi.b, f.coeffs)


def combine(f: KernelVector) -> KernelVector:
    """Merge bit-identical points and drop exactly-zero coefficients."""
    if len(f) == 0:
        return f
    acc: dict[complex, complex] = {}
    for w, c in zip(f.points.tolist(), f.coeffs.tolist()):
        acc[w] = acc.get(w, 0j) + c
    items = [(w, c) for w, c in acc.items() if c != 0]
    if len(items) == len(f):
        return f
    return KernelVector(f.alpha, [w for w, _ in items], [c for _, c in items])


def prune(f: KernelVector, tol: float = PRUNE_TOL) -> KernelVector:
    """Merge near-coincident points and drop negligible terms.

    A term is folded into an earlier kept point within distance ``tol`` only
    if the induced error |c| ||k_w - k_w'|| is at most ``tol``; a term is
    dropped if |c| ||k_w|| < tol.  Each folded or dropped term moves f by at
    most ``tol`` in norm.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    f = combine(f)
    alpha = f.alpha
    kept_w: list[complex] = []
    kept_c: list[complex] = []
    for w, c in zip(f.points.tolist(), f.coeffs.tolist()):
        merged = False
        if tol > 0:
            for i, v in enumerate(kept_w):
                if abs(w - v) < tol and abs(c) * _kernel_distance(alpha, w, v) <= tol:
                    kept_c[i] += c
                    merged = True
                    break
        if not merged:
            kept_w.append(w)
            kept_c.append(c)
    out_w, out_c = [], []
    for w, c in zip(kept_w, kept_c):
        if c == 0 or abs(c) * kernel_norm(alpha, w) < tol:
            continue
        out_w.append(w)
        out_c.append(c)
    return KernelVector(alpha, out_w, out_c)


def _kernel_distance(alpha: float, w: complex, v: complex) -> float:
    sq = (
        kernel_eval(alpha, w, w).real
        + kernel_eval(alpha, v, v).real
        - 2.0 * kernel_eval(alpha, w, v).real
    )
    return math.sqrt(max(sq, 0.0))
