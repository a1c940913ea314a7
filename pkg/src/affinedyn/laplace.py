"""The Laplace-side model L^2(R+, mu_alpha) with dmu = Gamma(1+alpha)/(2^alpha t^(alpha+1)) dt.

Profiles are finite sums F(t) = sum_j gamma_j t^beta_j exp(-c_j t).  The
family is closed under the conjugated operator and its adjoint, and every
inner product is a Gamma integral in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy.special import gammaln

from .errors import DivergentIntegral, QuadratureNotConverged, WeightMismatch
from .kernelspace import KernelVector, kernel_constant
from .quadrature import _legendre, half_line_rule
from .symbols import AffineSymbol, check_alpha


@dataclass(frozen=True)
class ProfileTerm:
    gamma: complex
    beta: float
    c: complex


@dataclass(frozen=True)
class ProfileFunction:
    alpha: float
    terms: tuple[ProfileTerm, ...] = ()

    def __post_init__(self) -> None:
        alpha = check_alpha(self.alpha)
        terms = tuple(
            t if isinstance(t, ProfileTerm) else ProfileTerm(*t) for t in self.terms
        )
        clean = []
        for t in terms:
            term = ProfileTerm(complex(t.gamma), float(t.beta), complex(t.c))
            if not term.c.real > 0:
                raise ValueError(f"decay rate must have Re(c) > 0, got {term.c}")
            if not term.beta > alpha / 2.0:
                raise DivergentIntegral(
                    f"exponent beta={term.beta} must exceed alpha/2={alpha / 2} for a finite mu-norm"
                )
            clean.append(term)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def single(cls, alpha: float, gamma: complex, beta: float, c: complex) -> ProfileFunction:
        return cls(alpha, (ProfileTerm(gamma, beta, c),))

    @classmethod
    def kernel_profile(cls, alpha: float, w: complex, coeff: complex = 1.0) -> ProfileFunction:
        """The profile whose Laplace transform is coeff * k_w."""
        alpha = check_alpha(alpha)
        gamma = coeff * kernel_constant(alpha) / math.gamma(alpha + 2.0)
        return cls.single(alpha, gamma, alpha + 1.0, complex(w).conjugate())

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for term in self.terms:
            out = out + term.gamma * t ** term.beta * np.exp(-term.c * t)
        return out

    def __add__(self, other: ProfileFunction) -> ProfileFunction:
        if self.alpha != other.alpha:
            raise WeightMismatch(f"weights differ: {self.alpha} vs {other.alpha}")
        return ProfileFunction(self.alpha, self.terms + other.terms)

    def __mul__(self, scalar: complex) -> ProfileFunction:
        s = complex(scalar)
        return ProfileFunction(self.alpha, tuple(ProfileTerm(t.gamma * s, t.beta, t.c) for t in self.terms))

    __rmul__ = __mul__

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "terms": [
                {
                    "gamma_re": t.gamma.real,
                    "gamma_im": t.gamma.imag,
                    "beta": t.beta,
                    "c_re": t.c.real,
                    "c_im": t.c.imag,
                }
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> ProfileFunction:
        return cls(
            float(data["alpha"]),
            tuple(
                ProfileTerm(complex(t["gamma_re"], t["gamma_im"]), float(t["beta"]), complex(t["c_re"], t["c_im"]))
                for t in data.get("terms", [])
            ),
        )


def _gamma_over_power(s: float, z: complex) -> complex:
    # Gamma(s) / z^s with the principal power; Re(z) > 0, s > 0.
    return complex(np.exp(gammaln(s) - s * np.log(complex(z))))


def mu_inner_product(f: ProfileFunction, g: ProfileFunction) -> complex:
    """<F, G> in L^2(R+, mu_alpha) via int t^(s-1) e^(-z t) dt = Gamma(s)/z^s."""
    if f.alpha != g.alpha:
        raise WeightMismatch(f"weights differ: {f.alpha} vs {g.alpha}")
    alpha = f.alpha
    total = 0j
    for tf in f.terms:
        for tg in g.terms:
            s = tf.beta + tg.beta - alpha
            if s <= 0:
                raise DivergentIntegral(f"exponent sum {s} <= 0")
            total += tf.gamma * tg.gamma.conjugate() * _gamma_over_power(s, tf.c + tg.c.conjugate())
    return total * math.gamma(1.0 + alpha) / 2.0 ** alpha


def mu_norm(f: ProfileFunction) -> float:
    return math.sqrt(max(mu_inner_product(f, f).real, 0.0))


@dataclass(frozen=True)
class LaplaceImage:
    """w -> sum_j gamma_j Gamma(beta_j + 1) / (w + c_j)^(beta_j + 1)."""

    profile: ProfileFunction

    def __call__(self, w):
        ww = np.asarray(w, dtype=complex)
        out = np.zeros(ww.shape, dtype=complex)
        for t in self.profile.terms:
            out = out + t.gamma * math.gamma(t.beta + 1.0) * (ww + t.c) ** (-(t.beta + 1.0))
        return complex(out) if out.ndim == 0 else out


def laplace_transform(f: ProfileFunction) -> KernelVector | LaplaceImage:
    """Laplace transform of a profile.

    When every term has beta = alpha + 1 the image is a finite kernel
    combination and a KernelVector is returned; otherwise a LaplaceImage.
    """
    alpha = f.alpha
    if all(t.beta == alpha + 1.0 for t in f.terms):
        scale = math.gamma(alpha + 2.0) / kernel_constant(alpha)
        return KernelVector(
            alpha,
            [t.c.conjugate() for t in f.terms],
            [t.gamma * scale for t in f.terms],
        )
    return LaplaceImage(f)


def hat_apply(phi: AffineSymbol, f: ProfileFunction) -> ProfileFunction:
    """(C^ F)(t) = (1/a) exp(-b t/a) F(t/a)."""
    a, b = phi.a, phi.b
    return ProfileFunction(
        f.alpha,
        tuple(ProfileTerm(t.gamma * a ** (-t.beta - 1.0), t.beta, (t.c + b) / a) for t in f.terms),
    )


def hat_adjoint_apply(phi: AffineSymbol, f: ProfileFunction) -> ProfileFunction:
    """(C^* F)(t) = a^-(alpha+1) exp(-conj(b) t) F(a t)."""
    a, b = phi.a, phi.b
    return ProfileFunction(
        f.alpha,
        tuple(
            ProfileTerm(t.gamma * a ** (t.beta - (f.alpha + 1.0)), t.beta, a * t.c + b.conjugate())
            for t in f.terms
        ),
    )


def intertwining_check(phi: AffineSymbol, f: ProfileFunction, sample_points: Sequence[complex]) -> float:
    """max_z |L(F)(phi(z)) - L(C^ F)(z)| over the sample points."""
    z = np.asarray(sample_points, dtype=complex)
    lhs = LaplaceImage(f)(phi.a * z + phi.b)
    rhs = LaplaceImage(hat_apply(phi, f))(z)
    return float(np.max(np.abs(lhs - rhs))) if z.size else 0.0


def normality_commutator(phi: AffineSymbol, f: ProfileFunction, t) -> np.ndarray:
    """|(C^ C^* - C^* C^) F (t)| sampled at the given t."""
    left = hat_apply(phi, hat_adjoint_apply(phi, f))
    right = hat_adjoint_apply(phi, hat_apply(phi, f))
    return np.abs(left(t) - right(t))


def predicted_commutator(phi: AffineSymbol, f: ProfileFunction, t) -> np.ndarray:
    """a^-(alpha+2) |exp(-2 Re(b) t / a) - exp(-2 Re(b) t)| |F(t)|."""
    t = np.asarray(t, dtype=float)
    rb = phi.b.real
    return (
        phi.a ** (-(f.alpha + 2.0))
        * np.abs(np.exp(-2.0 * rb * t / phi.a) - np.exp(-2.0 * rb * t))
        * np.abs(f(t))
    )


# --- quadrature cross-checks ---------------------------------------------------

T0 = 1e-8
RATIO = 2.0
TAIL_TOL = 1e-16


def _upper_cutoff(scale: float, decay_power: float, big: float = 1e30) -> float:
    # smallest X with X^(-decay_power) below the tail tolerance, relative to scale
    if decay_power <= 0:
        return big
    return min(big, scale * TAIL_TOL ** (-1.0 / decay_power))


def mu_norm_quadrature(f: ProfileFunction, order: int = 20) -> float:
    """||F||_mu by composite Gauss quadrature on graded panels [t0 r^k, t0 r^(k+1)]."""
    if not f.terms:
        return 0.0
    alpha = f.alpha
    betas = [t.beta for t in f.terms]
    power = 2.0 * min(betas) - alpha - 1.0
    rate = min(t.c.real for t in f.terms)
    # |F|^2 decays like exp(-2 rate t) t^(2 beta_max); stop where that is below TAIL_TOL
    t_max = max(1.0, (2.0 * max(betas) + 40.0) / rate)
    while math.exp(-2.0 * rate * t_max) * t_max ** max(2.0 * max(betas) - alpha, 0.0) > TAIL_TOL:
        t_max *= 2.0
    nodes, weights = half_line_rule(power, T0, t_max, order, RATIO)
    # weights include t^power; divide it back out of |F|^2 t^-(alpha+1)
    vals = np.abs(f(nodes)) ** 2 * nodes ** (-alpha - 1.0 - power)
    sq = float(np.sum(weights * vals)) * math.gamma(1.0 + alpha) / 2.0 ** alpha
    return math.sqrt(max(sq, 0.0))


def _y_rule(centers: Sequence[float], h: float, y_max: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    edges = {-y_max, y_max}
    k_max = int(math.ceil(math.log(2.0 * y_max / h) / math.log(RATIO))) + 1
    offsets = h * RATIO ** np.arange(k_max)
    for c in centers:
        edges.add(c)
        for off in offsets:
            for e in (c - off, c + off):
                if -y_max < e < y_max:
                    edges.add(float(e))
    e = np.array(sorted(edges))
    x, w = _legendre(order)
    a, b = e[:-1, None], e[1:, None]
    half = 0.5 * (b - a)
    return ((a + b) * 0.5 + half * x).ravel(), (half * w).ravel()


def bergman_norm_quadrature(f: ProfileFunction, order: int = 20) -> float:
    """||L F|| from the area integral (1/pi) int int |LF(x+iy)|^2 x^alpha dx dy."""
    if not f.terms:
        return 0.0
    alpha = f.alpha
    image = LaplaceImage(f)
    beta_min = min(t.beta for t in f.terms)
    lo = min(t.c.real for t in f.terms)
    hi = max(max(abs(t.c) for t in f.terms), 1.0)
    # int |LF(x+iy)|^2 dy ~ x^-(2 beta + 1); with the x^alpha weight the x-tail is X^(alpha - 2 beta)
    x_max = _upper_cutoff(hi, 2.0 * beta_min - alpha)
    y_max = max(x_max, hi) * TAIL_TOL ** (-1.0 / (2.0 * beta_min + 1.0))
    y_max = min(y_max, 1e32)
    xs, wx = half_line_rule(alpha, T0, x_max, order, RATIO)
    ys, wy = _y_rule(sorted({-t.c.imag for t in f.terms}), 0.5 * lo, y_max, order)
    total = 0.0
    chunk = max(1, 2_000_000 // ys.size)
    for i in range(0, xs.size, chunk):
        z = xs[i : i + chunk, None] + 1j * ys[None, :]
        vals = np.abs(image(z)) ** 2
        total += float(wx[i : i + chunk] @ (vals @ wy))
    return math.sqrt(max(total / math.pi, 0.0))


@dataclass(frozen=True)
class IsometryResult:
    bergman_norm: float
    mu_norm: float
    gap: float
    table: tuple[tuple[int, float, float, float], ...]

    def csv_rows(self) -> list[list[Any]]:
        return [["level", "bergman_norm", "mu_norm", "gap"]] + [list(r) for r in self.table]


def isometry_check(
    f: ProfileFunction,
    orders: Sequence[int] = (12, 20, 28),
    tol: float = 1e-6,
) -> IsometryResult:
    """Compare the quadrature Bergman norm of L F with the closed-form mu-norm of F.

    Refines the Gauss order level by level; the last two levels must agree to
    ``tol`` (relative) or QuadratureNotConverged is raised.
    """
    closed = mu_norm(f)
    if not f.terms or closed == 0.0:
        return IsometryResult(0.0, 0.0, 0.0, ((0, 0.0, 0.0, 0.0),))
    rows = []
    values = []
    for level, order in enumerate(orders):
        b = bergman_norm_quadrature(f, order)
        values.append(b)
        rows.append((level, b, closed, abs(b - closed) / closed))
    if len(values) > 1 and abs(values[-1] - values[-2]) > tol * abs(values[-1]):
        raise QuadratureNotConverged(
            f"Bergman quadrature levels disagree: {values[-2]!r} vs {values[-1]!r}"
        )
    final = values[-1]
    return IsometryResult(final, closed, abs(final - closed) / closed, tuple(rows))
