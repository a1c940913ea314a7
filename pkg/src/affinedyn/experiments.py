"""Numerical witnesses for the dynamical classification.

Every routine works on exact kernel combinations, so the only error source is
floating-point rounding.  Orbits are built by successive application of C_phi,
which keeps the points of C_phi x_n bit-identical to those stored in x_(n+1);
differences then cancel exactly after ``combine``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import kernelspace as ks
from .dynamics import classify, log_operator_norm, spectrum
from .errors import (
    IllConditionedWarning,
    NoInteriorFixedPoint,
    RegimeMismatch,
    ZeroAtTarget,
    ZeroImage,
)
from .kernelspace import KernelVector
from .symbols import AffineSymbol, check_alpha, fixed_point, inverse, iterate, iterate_log_data

DEFAULT_SEED = 20231117
MAX_HORIZON = 10**4
Z0_GRID = (1.0, 2.0, 1 + 1j, 2 - 1j, 0.5, 3.0, 0.5 + 2j, 1 - 2j, 4.0, 0.25 + 0.5j)

# (a, b, alpha) covering every branch of the classification.
DEFAULT_PANEL: tuple[tuple[float, complex, float], ...] = (
    (1.0, 0j, 0.0),
    (1.0, 1j, 3.0),
    (1.0, 1 + 0j, 0.0),
    (1.0, 2 + 3j, 1.0),
    (0.5, 1j, 0.0),
    (0.5, 0j, 2.0),
    (0.5, 1 + 0j, 0.0),
    (0.7, 0.3 + 0j, 0.0),
    (2.0, 0j, 0.0),
    (2.0, 1j, 1.5),
    (2.0, 1 + 1j, 0.0),
    (4.0, 2 + 0j, -0.5),
)


def panel_symbols(panel=DEFAULT_PANEL) -> list[tuple[AffineSymbol, float]]:
    return [(AffineSymbol(a, b), alpha) for a, b, alpha in panel]


def random_kernel_vector(
    rng: np.random.Generator,
    alpha: float,
    terms: int | None = None,
    re_range: tuple[float, float] = (0.2, 3.0),
    im_range: tuple[float, float] = (-3.0, 3.0),
) -> KernelVector:
    if terms is None:
        terms = int(rng.integers(1, 5))
    pts = rng.uniform(*re_range, terms) + 1j * rng.uniform(*im_range, terms)
    cs = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    return KernelVector(alpha, pts, cs)


def default_vectors(alpha: float, seed: int = DEFAULT_SEED) -> list[KernelVector]:
    """k_1, k_2, k_(1+i) and a seeded three-term combination."""
    rng = np.random.default_rng(seed)
    return [
        KernelVector.kernel(1.0, alpha),
        KernelVector.kernel(2.0, alpha),
        KernelVector.kernel(1 + 1j, alpha),
        random_kernel_vector(rng, alpha, terms=3),
    ]


def _power(phi: AffineSymbol, alpha: float) -> float:
    # c = a^(-(alpha+2)/2) = ||C_phi||
    return math.exp(log_operator_norm(phi, alpha))


# --- orbit norms ----------------------------------------------------------------


@dataclass
class OrbitResult:
    n: np.ndarray
    log_norm: np.ndarray
    log_norm_successive: np.ndarray
    max_log_gap: float
    cross_checked_until: int
    ill_conditioned: bool = False

    @property
    def norms(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_norm)

    def csv_rows(self) -> list[list[Any]]:
        rows: list[list[Any]] = [["n", "norm", "log_norm"]]
        for n, ln in zip(self.n.tolist(), self.log_norm.tolist()):
            rows.append([n, math.exp(ln) if ln < 700 else math.inf, ln])
        return rows

    def to_json(self) -> dict[str, Any]:
        return {
            "horizon": int(self.n[-1]),
            "max_relative_gap": self.max_log_gap,
            "cross_checked_until": self.cross_checked_until,
            "ill_conditioned": self.ill_conditioned,
            "final_log_norm": float(self.log_norm[-1]),
        }


def _log_norm_iterate(phi: AffineSymbol, f: KernelVector, n: int) -> float:
    # C_phi^n = C_(phi^[n]) with phi^[n](w) = A w + B.  The Gram entries of
    # C_(phi^[n]) f are A^-(alpha+2) k/(w_i + conj(w_j) + 2 Re B)^(alpha+2), so
    # only A and Re B enter; Im B drops out exactly and never costs digits.
    n_log_a, log_two_re = iterate_log_data(phi, n)
    return -0.5 * (f.alpha + 2.0) * n_log_a + ks.shifted_log_norm(f, log_two_re)


def _frame_step(phi: AffineSymbol):
    """One application of C_phi to kernel points, written in a Gram-preserving frame.

    Points map by w -> (w + conj b)/a.  For a != 1 this is a dilation about
    q = conj(b)/(a - 1); stepping offsets from Re q (Im q dropped, which
    leaves every w_i + conj(w_j) unchanged) avoids the cancellation that
    appears when the points collapse onto a fixed point with Im q != 0.
    """
    if phi.a == 1.0:
        shift = np.conj(phi.b)
        return 0.0, lambda v: v + shift
    q = np.conj(phi.b) / (phi.a - 1.0)
    re_q = q.real
    return q.imag, lambda v: re_q + (v - re_q) / phi.a


def orbit_norms(phi: AffineSymbol, alpha: float, f: KernelVector, horizon: int) -> OrbitResult:
    """||C_phi^n f|| for n = 0..horizon, computed two independent ways.

    The iterate route uses the closed-form n-th iterate; the successive route
    maps the kernel points one step at a time and carries the coefficient
    scale a^(-(alpha+2)n) as a logarithm.  The successive route stops being
    available once the points leave the floating-point range.
    """
    alpha = check_alpha(alpha)
    if f.alpha != alpha:
        raise ValueError("vector weight differs from alpha")
    if not 0 <= horizon <= MAX_HORIZON:
        raise ValueError(f"horizon must lie in [0, {MAX_HORIZON}]")
    f = ks.combine(f)
    if len(f) == 0:
        raise ValueError("orbit of the zero vector requested")
    p = alpha + 2.0
    log_a = math.log(phi.a)
    ns = np.arange(horizon + 1)
    direct = np.empty(horizon + 1)
    succ = np.full(horizon + 1, np.nan)
    im_q, step = _frame_step(phi)
    pts = f.points - 1j * im_q
    alive = True
    checked = 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IllConditionedWarning)
        for n in range(horizon + 1):
            direct[n] = _log_norm_iterate(phi, f, n)
            if alive:
                if n > 0:
                    pts = step(pts)
                if np.all(np.isfinite(pts)) and np.all(pts.real > 0) and np.all(np.abs(pts) < 1e300):
                    succ[n] = -p * n * log_a + ks.log_norm(KernelVector(alpha, pts, f.coeffs))
                    checked = n
                else:
                    alive = False
        ill = any(issubclass(w.category, IllConditionedWarning) for w in caught)
    if ill:
        warnings.warn("orbit norms involved ill-conditioned Gram matrices", IllConditionedWarning, stacklevel=2)
    mask = ~np.isnan(succ)
    gap = float(np.max(np.abs(np.expm1(direct[mask] - succ[mask])))) if mask.any() else math.nan
    return OrbitResult(ns, direct, succ, gap, checked, ill)


# --- norm estimates ------------------------------------------------------------


@dataclass
class NormEstimateReport:
    symbol: AffineSymbol
    alpha: float
    samples: int
    bound: float
    max_equality_violation: float | None
    max_ratio: float
    max_inequality_violation: float

    def to_json(self) -> dict[str, Any]:
        return {
            "symbol": self.symbol.to_json(),
            "alpha": self.alpha,
            "samples": self.samples,
            "bound": self.bound,
            "max_equality_violation": self.max_equality_violation,
            "max_ratio": self.max_ratio,
            "max_inequality_violation": self.max_inequality_violation,
        }


def verify_norm_estimates(
    phi: AffineSymbol,
    alpha: float,
    sample_count: int = 100,
    seed: int = DEFAULT_SEED,
    exponent: float | None = None,
) -> NormEstimateReport:
    """Check ||C_phi f|| against a^(-(alpha+2)/2) ||f|| on random kernel vectors.

    ``exponent`` overrides alpha + 2 in the bound (used to confirm that a
    wrong exponent is caught).
    """
    alpha = check_alpha(alpha)
    p = alpha + 2.0 if exponent is None else exponent
    bound = phi.a ** (-p / 2.0)
    rng = np.random.default_rng(seed)
    eq_viol = 0.0
    max_ratio = 0.0
    ineq = 0.0
    used = 0
    while used < sample_count:
        f = random_kernel_vector(rng, alpha)
        nf = ks.norm(f, check=False)
        if nf == 0.0:
            continue
        used += 1
        ratio = ks.norm(ks.apply_composition(phi, f), check=False) / nf
        max_ratio = max(max_ratio, ratio)
        ineq = max(ineq, ratio / bound - 1.0)
        if phi.re_b_zero:
            eq_viol = max(eq_viol, abs(ratio / bound - 1.0))
    return NormEstimateReport(
        phi, alpha, used, bound, eq_viol if phi.re_b_zero else None, max_ratio, max(ineq, 0.0)
    )


# --- lower estimate ------------------------------------------------------------


@dataclass
class LowerEstimateReport:
    symbol: AffineSymbol
    alpha: float
    delta: float
    n0: int | None
    z0: complex
    z1: complex
    horizon: int
    attempts: list[complex]
    rows: list[tuple[int, float, float]]  # (n, ||C^n g|| a^((alpha+2)n/2), |g(psi_n(z0))|)

    def scaled_norm(self, n: int) -> float:
        return self.rows[n][1]

    def csv_rows(self) -> list[list[Any]]:
        return [["n", "scaled_norm", "g_at_psi_n_z0", "delta"]] + [
            [n, r, gv, self.delta] for n, r, gv in self.rows
        ]

    def to_json(self) -> dict[str, Any]:
        return {
            "symbol": self.symbol.to_json(),
            "alpha": self.alpha,
            "delta": self.delta,
            "n0": self.n0,
            "z0": [self.z0.real, self.z0.imag],
            "z1": [self.z1.real, self.z1.imag],
            "horizon": self.horizon,
            "z0_attempts": [[z.real, z.imag] for z in self.attempts],
        }


def lower_estimate_delta(
    phi: AffineSymbol,
    alpha: float,
    g: KernelVector,
    z0: complex | None = None,
    horizon: int = 60,
) -> LowerEstimateReport:
    """The constant delta with ||C^n g|| >= delta a^(-(alpha+2)n/2) for large n.

    delta = |g(z1)| / (2 ||k_z0||), z1 = z0 + b/(1-a); ``g`` is normalised
    first.  n0 is the smallest n from which the bound holds up to ``horizon``.
    """
    alpha = check_alpha(alpha)
    if not 0.0 < phi.a < 1.0:
        raise RegimeMismatch(f"lower estimate needs a in (0, 1), got a={phi.a}")
    ng = ks.norm(g)
    if ng == 0.0:
        raise ValueError("g must be nonzero")
    g = g / ng
    shift = phi.b / (1.0 - phi.a)
    candidates = ([complex(z0)] if z0 is not None else []) + [complex(z) for z in Z0_GRID]
    attempts: list[complex] = []
    chosen = None
    for cand in candidates[:10]:
        attempts.append(cand)
        z1 = cand + shift
        val = abs(ks.evaluate(g, z1))
        if val > 1e-12 * ks.kernel_norm(alpha, z1):
            chosen = (cand, z1, val)
            break
    if chosen is None:
        raise ZeroAtTarget("g vanishes at z0 + b/(1-a) for every tried z0")
    z0c, z1, gz1 = chosen
    delta = gz1 / (2.0 * ks.kernel_norm(alpha, z0c))

    p = alpha + 2.0
    log_a = math.log(phi.a)
    rows = []
    for n in range(horizon + 1):
        scaled = math.exp(_log_norm_iterate(phi, g, n) + 0.5 * p * n * log_a)
        # psi_n(w) = w + (1 - a^n)/(1 - a) b
        psi_shift = -math.expm1(n * log_a) / -math.expm1(log_a) * phi.b if n else 0j
        rows.append((n, scaled, abs(ks.evaluate(g, z0c + psi_shift))))
    n0 = None
    for n in range(horizon, -1, -1):
        if rows[n][1] >= delta:
            n0 = n
        else:
            break
    if n0 is not None:
        n0 = max(n0, 1)
    return LowerEstimateReport(phi, alpha, delta, n0, z0c, z1, horizon, attempts, rows)


# --- pseudo-orbits and shadowing ---------------------------------------------


@dataclass
class PseudoOrbit:
    """x_1, x_2, ... with ||C_phi x_n - x_(n+1)|| <= delta (index 1 is vectors[0])."""

    symbol: AffineSymbol
    alpha: float
    delta: float
    vectors: list[KernelVector]
    gaps: list[float]
    mode: str

    def __len__(self) -> int:
        return len(self.vectors)

    def x(self, n: int) -> KernelVector:
        return self.vectors[n - 1]

    def to_json(self) -> dict[str, Any]:
        return {
            "symbol": self.symbol.to_json(),
            "alpha": self.alpha,
            "delta": self.delta,
            "mode": self.mode,
            "length": len(self.vectors),
            "max_gap": max(self.gaps) if self.gaps else 0.0,
        }


def _gap(phi: AffineSymbol, x: KernelVector, y: KernelVector) -> float:
    return ks.norm(ks.combine(ks.apply_composition(phi, x) - y), check=False)


def _random_error(rng: np.random.Generator, alpha: float, size: float) -> KernelVector:
    w = rng.uniform(0.5, 2.5) + 1j * rng.uniform(-2.0, 2.0)
    phase = np.exp(2j * np.pi * rng.uniform())
    return KernelVector.kernel(w, alpha, phase * size / ks.kernel_norm(alpha, w))


def make_pseudo_orbit(
    phi: AffineSymbol,
    alpha: float,
    x: KernelVector,
    delta: float,
    length: int,
    mode: str = "equal_gap",
    seed: int = DEFAULT_SEED,
    noise: float = 1.0,
) -> PseudoOrbit:
    """Build a positive delta-pseudo-orbit of C_phi with ``length`` entries.

    ``equal_gap``: x_n = delta/||Tx|| sum_{j=1}^{n-1} T^(n-j) x, so x_1 = 0 and every
    gap equals delta.  Built through x_(n+1) = T x_n + (delta/||Tx||) T x.

    ``perturbed``: x_1 = x and x_(n+1) = T x_n + e_n with e_n a single kernel
    term of norm delta * noise * U, U uniform on (0, 1], drawn from ``seed``.
    """
    alpha = check_alpha(alpha)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if length < 1:
        raise ValueError("length must be at least 1")
    if not 0.0 <= noise <= 1.0:
        raise ValueError("noise must lie in [0, 1]")
    if mode == "equal_gap":
        tx = ks.apply_composition(phi, x)
        ntx = ks.norm(tx)
        if ntx == 0.0:
            raise ZeroImage("C_phi x = 0; choose a nonzero seed vector")
        step = tx * (delta / ntx)
        vectors = [KernelVector.zero(alpha)]
        for _ in range(length - 1):
            vectors.append(ks.apply_composition(phi, vectors[-1]) + step)
    elif mode == "perturbed":
        rng = np.random.default_rng(seed)
        vectors = [x]
        for _ in range(length - 1):
            size = delta * noise * (1.0 - rng.uniform())
            nxt = ks.apply_composition(phi, vectors[-1])
            if size > 0:
                nxt = nxt + _random_error(rng, alpha, size)
            vectors.append(nxt)
    else:
        raise ValueError(f"unknown pseudo-orbit mode {mode!r}")
    gaps = [_gap(phi, vectors[i], vectors[i + 1]) for i in range(length - 1)]
    worst = max(gaps, default=0.0)
    if worst > delta * (1.0 + 1e-9):
        raise RuntimeError(f"pseudo-orbit gap {worst!r} exceeds delta={delta!r}")
    return PseudoOrbit(phi, alpha, delta, vectors, gaps, mode)


@dataclass
class ShadowReport:
    shadow_point: KernelVector
    epsilon_bound: float
    epsilon_observed: float
    horizon: int
    truncation_bound: float
    terms: int
    errors: list[float] = field(default_factory=list)

    def csv_rows(self) -> list[list[Any]]:
        return [["n", "value", "bound"]] + [[n, e, self.epsilon_bound] for n, e in enumerate(self.errors)]

    def to_json(self) -> dict[str, Any]:
        return {
            "epsilon_bound": self.epsilon_bound,
            "epsilon_observed": self.epsilon_observed,
            "horizon": self.horizon,
            "truncation_bound": self.truncation_bound,
            "series_terms": self.terms,
            "shadow_point_terms": len(self.shadow_point),
        }


def _shadow_errors(po: PseudoOrbit, x: KernelVector, horizon: int) -> list[float]:
    # ||C^n x - x_(n+1)|| for n = 0 .. horizon-1
    errs = []
    y = x
    for n in range(horizon):
        if n > 0:
            y = ks.apply_composition(po.symbol, y)
        errs.append(ks.norm(ks.combine(y - po.vectors[n]), check=False))
    return errs


def shadow_contraction(po: PseudoOrbit, horizon: int | None = None) -> ShadowReport:
    """Shadow a pseudo-orbit of a contraction (a > 1) by its first element.

    ||C^n x_1 - x_(n+1)|| <= delta sum_j c^j <= delta/(1-c) with c = ||C_phi|| < 1.
    """
    phi = po.symbol
    if not phi.a > 1.0:
        raise RegimeMismatch(f"contraction shadowing needs a > 1, got a={phi.a}")
    c = _power(phi, po.alpha)
    h = len(po) if horizon is None else min(horizon, len(po))
    x = po.vectors[0]
    errs = _shadow_errors(po, x, h)
    return ShadowReport(x, po.delta / (1.0 - c), max(errs), h, 0.0, 0, errs)


def series_tail_terms(delta: float, c_inv: float, epsilon_target: float) -> int:
    """Smallest J0 with delta c'^(J0+1)/(1-c') < 0.01 epsilon_target."""
    j = 0
    while delta * c_inv ** (j + 1) / (1.0 - c_inv) >= 0.01 * epsilon_target:
        j += 1
    return j


def shadow_expansion(
    po: PseudoOrbit,
    horizon: int | None = None,
    epsilon_target: float | None = None,
    prune_tol: float = ks.PRUNE_TOL,
) -> ShadowReport:
    """Shadow a pseudo-orbit of an invertible expansion (a < 1, Re b = 0).

    x = x_1 + sum_{k<J} C^-(k+1) d_k with d_k = x_(k+2) - C x_(k+1).  With
    c' = ||C^-1|| < 1 the exact shadow satisfies ||C^n x - x_(n+1)|| <=
    delta c'/(1-c'); dropping the terms k >= J moves the n-th orbit point by
    at most delta c'^(J+1-n)/(1-c').  J = horizon + J0 with J0 from
    ``series_tail_terms`` keeps that below 1% of the target up to the horizon.
    """
    phi = po.symbol
    if not (0.0 < phi.a < 1.0 and phi.re_b_zero):
        raise RegimeMismatch(f"expansion shadowing needs a in (0,1) and Re(b)=0, got {phi}")
    alpha = po.alpha
    c_inv = 1.0 / _power(phi, alpha)
    main = po.delta * c_inv / (1.0 - c_inv)
    target = main if epsilon_target is None else epsilon_target
    j0 = series_tail_terms(po.delta, c_inv, target)
    if horizon is None:
        horizon = len(po) - 1 - j0
    big_j = horizon + j0
    if horizon < 1 or big_j > len(po) - 1:
        raise ValueError(
            f"pseudo-orbit of length {len(po)} too short for horizon {horizon} and {j0} tail terms"
        )
    inv = inverse(phi)
    # a term dropped from x is amplified by c'^-n along the orbit
    tol = prune_tol * c_inv ** horizon
    x = po.vectors[0]
    for k in range(big_j):
        d = ks.combine(po.vectors[k + 1] - ks.apply_composition(phi, po.vectors[k]))
        for _ in range(k + 1):
            d = ks.apply_composition(inv, d)
        x = ks.prune(x + d, tol)
    tail = po.delta * c_inv ** (j0 + 1) / (1.0 - c_inv)
    errs = _shadow_errors(po, x, horizon)
    return ShadowReport(x, main + tail, max(errs), horizon, tail, big_j, errs)


# --- non-shadowing at an interior fixed point ----------------------------------


@dataclass
class WitnessReport:
    fixed_point: complex
    kernel_norm: float
    drift_slope: float
    expected_slope: float
    budget: float
    n_star: int
    values: list[float]

    def csv_rows(self) -> list[list[Any]]:
        return [["n", "value", "bound"]] + [[n, v, 2.0 * self.budget] for n, v in enumerate(self.values, start=1)]

    def to_json(self) -> dict[str, Any]:
        return {
            "fixed_point": [self.fixed_point.real, self.fixed_point.imag],
            "kernel_norm_at_fixed_point": self.kernel_norm,
            "drift_slope": self.drift_slope,
            "expected_slope": self.expected_slope,
            "budget": self.budget,
            "n_star": self.n_star,
        }


def non_shadowing_witness(
    phi: AffineSymbol,
    alpha: float,
    delta: float,
    epsilon: float,
    max_length: int = MAX_HORIZON,
) -> WitnessReport:
    """A delta-pseudo-orbit that no orbit epsilon-shadows, for an interior fixed point p.

    x_1 = 0, x_(n+1) = C x_n + delta k_p/||k_p||.  Since (C^n x)(p) = x(p),
    any epsilon-shadow x obeys |x(p) - x_n(p)| <= epsilon ||k_p|| for all n;
    n = 1 forces |x(p)| <= epsilon ||k_p|| (the budget), so x_n(p) may never
    exceed 2 epsilon ||k_p||.  But x_n(p) = (n-1) delta ||k_p||, and n_star is
    the first index where the measured value breaks that ceiling.
    """
    alpha = check_alpha(alpha)
    fp = fixed_point(phi)
    if fp.all_fixed or fp.point is None or not fp.interior:
        raise NoInteriorFixedPoint(f"{phi} has no fixed point in the right half-plane")
    if delta <= 0 or epsilon <= 0:
        raise ValueError("delta and epsilon must be positive")
    p = fp.point
    kp_norm = ks.kernel_norm(alpha, p)
    e = KernelVector.kernel(p, alpha, delta / kp_norm)
    budget = epsilon * kp_norm
    ceiling = 2.0 * epsilon * kp_norm * (1.0 + 1e-9)
    x = KernelVector.zero(alpha)
    values = [0.0]
    while values[-1] <= ceiling:
        if len(values) >= max_length:
            raise RuntimeError(f"no violation within {max_length} steps")
        x = ks.apply_composition(phi, x) + e
        values.append(float(np.real(ks.evaluate(x, p))))
    n_star = len(values)
    slope = (values[-1] - values[0]) / (n_star - 1)
    return WitnessReport(p, kp_norm, slope, delta * kp_norm, budget, n_star, values)


# --- Cesaro averages -----------------------------------------------------------


@dataclass
class CesaroReport:
    log_averages: np.ndarray  # index n-1 holds log of (1/n) sum_{j<=n} ||C^j f||
    norm_f: float
    bound: float | None  # M, or None when unbounded
    max_ratio: float  # max average / ||f||
    witness_n: int | None
    threshold: float | None
    lower_bounds: list[tuple[int, float]]

    @property
    def averages(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_averages)

    def csv_rows(self) -> list[list[Any]]:
        out: list[list[Any]] = [["n", "value", "bound"]]
        m = None if self.bound is None else self.bound * self.norm_f
        for n, la in enumerate(self.log_averages.tolist(), start=1):
            out.append([n, math.exp(la) if la < 700 else math.inf, m if m is not None else ""])
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "horizon": int(self.log_averages.size),
            "norm_f": self.norm_f,
            "M": "unbounded" if self.bound is None else self.bound,
            "max_average_over_norm": self.max_ratio,
            "witness_n": self.witness_n,
            "threshold": self.threshold,
        }


def cesaro_bound(phi: AffineSymbol, alpha: float) -> float | None:
    """M = 1 for a = 1, max{1, c/(1-c)} for a > 1, None (unbounded) for a < 1."""
    if phi.a == 1.0:
        return 1.0
    if phi.a < 1.0:
        return None
    c = _power(phi, alpha)
    return max(1.0, c / (1.0 - c))


def cesaro_averages(
    phi: AffineSymbol,
    alpha: float,
    f: KernelVector,
    horizon: int,
    threshold: float = 10.0,
) -> CesaroReport:
    """(1/n) sum_{j=1}^n ||C^j f|| for n = 1..horizon.

    For a < 1 also reports the first n with average > threshold * ||f|| and
    the certified lower bounds delta c^n / n ||f|| from the lower estimate.
    """
    alpha = check_alpha(alpha)
    orbit = orbit_norms(phi, alpha, f, horizon)
    logs = orbit.log_norm[1:]
    cums = np.logaddexp.accumulate(logs)
    log_avg = cums - np.log(np.arange(1, horizon + 1))
    nf = ks.norm(f)
    m = cesaro_bound(phi, alpha)
    max_ratio = float(np.exp(np.max(log_avg) - math.log(nf))) if horizon else 0.0
    witness = None
    lower: list[tuple[int, float]] = []
    if m is None:
        hit = np.nonzero(log_avg > math.log(threshold * nf))[0]
        witness = int(hit[0]) + 1 if hit.size else None
        est = lower_estimate_delta(phi, alpha, f, horizon=horizon)
        c = _power(phi, alpha)
        if est.n0 is not None:
            lower = [(n, est.delta * c ** n / n * nf) for n in range(max(est.n0, 1), horizon + 1)]
    return CesaroReport(log_avg, nf, m, max_ratio, witness, threshold if m is None else None, lower)


# --- irregular-vector scan -----------------------------------------------------


@dataclass
class IrregularRow:
    norm_f: float
    min_norm: float
    max_norm: float
    n0: int | None
    n_two: int | None
    signature_ok: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "norm_f": self.norm_f,
            "min_norm": self.min_norm,
            "max_norm": self.max_norm,
            "n0": self.n0,
            "n_two": self.n_two,
            "signature_ok": self.signature_ok,
        }


def irregular_scan(phi: AffineSymbol, alpha: float, fs: Sequence[KernelVector], horizon: int) -> list[IrregularRow]:
    """Finite-horizon min/max of ||C^n f|| and the two norm mechanisms behind them.

    a >= 1: the orbit stays below ||f||.  a < 1: beyond n_two, the first n >= n0
    with delta c^n ||f|| >= 2, every orbit norm is at least 2.  This checks the
    mechanisms; it does not prove that irregular vectors are absent.
    """
    rows = []
    c = _power(phi, alpha)
    for f in fs:
        orb = orbit_norms(phi, alpha, f, horizon)
        norms = orb.norms
        nf = float(norms[0])
        n0 = n_two = None
        if phi.a >= 1.0:
            ok = bool(np.all(norms <= nf * (1.0 + 1e-10)))
        else:
            est = lower_estimate_delta(phi, alpha, f, horizon=horizon)
            n0 = est.n0
            ok = n0 is not None
            if n0 is not None:
                for n in range(n0, horizon + 1):
                    if est.delta * c ** n * nf >= 2.0:
                        n_two = n
                        break
                if n_two is not None:
                    ok = bool(np.all(norms[n_two:] >= 2.0))
        rows.append(IrregularRow(nf, float(np.min(norms)), float(np.max(norms)), n0, n_two, ok))
    return rows


# --- spectral radius ---------------------------------------------------------


@dataclass(frozen=True)
class SpectralRadiusReport:
    estimate: float
    theorem_value: float
    descriptor_radius: float
    gap: float

    def to_json(self) -> dict[str, Any]:
        return {
            "estimate": self.estimate,
            "theorem_value": self.theorem_value,
            "descriptor_radius": self.descriptor_radius,
            "gap": self.gap,
        }


def spectral_radius_estimate(phi: AffineSymbol, alpha: float, horizon: int = 50) -> SpectralRadiusReport:
    """||C_phi^N||^(1/N) from the norm of the N-th iterate, against a^(-(alpha+2)/2)."""
    if horizon < 10:
        raise ValueError("horizon must be at least 10")
    try:
        log_norm_n = log_operator_norm(iterate(phi, horizon), alpha)
    except OverflowError:
        n_log_a, _ = iterate_log_data(phi, horizon)
        log_norm_n = -(alpha + 2.0) / 2.0 * n_log_a
    est = math.exp(log_norm_n / horizon)
    theory = math.exp(log_operator_norm(phi, alpha))
    radius = spectrum(phi, alpha).max_modulus
    return SpectralRadiusReport(est, theory, radius, abs(est - theory))


def concordance(phi: AffineSymbol, alpha: float, seed: int = DEFAULT_SEED, quick: bool = False) -> dict[str, Any]:
    """Run the witness matching each classified property and report agreement."""
    rep = classify(phi, alpha)
    out: dict[str, Any] = {"symbol": phi.to_json(), "alpha": alpha}
    vecs = default_vectors(alpha, seed)
    horizon = 30 if quick else 60
    if rep.positive_expansive.value:
        rows = irregular_scan(phi, alpha, [v / ks.norm(v) for v in vecs], horizon)
        out["positive_expansive_witness"] = all(r.signature_ok and r.n_two is not None for r in rows)
    if rep.positive_shadowing.value:
        delta = 0.01
        if phi.a > 1.0:
            po = make_pseudo_orbit(phi, alpha, vecs[0], delta, 40 if quick else 100, "perturbed", seed)
            sh = shadow_contraction(po)
        else:
            po = make_pseudo_orbit(phi, alpha, vecs[0], delta, 20 if quick else 30, "perturbed", seed)
            sh = shadow_expansion(po)
        out["shadowing_witness"] = sh.epsilon_observed <= sh.epsilon_bound * (1.0 + 1e-6)
    fp = fixed_point(phi)
    if fp.point is not None and fp.interior:
        w = non_shadowing_witness(phi, alpha, 0.1, 1.0)
        out["non_shadowing_witness"] = w.n_star
    if rep.cesaro_bounded.value:
        ok = True
        for v in vecs:
            cr = cesaro_averages(phi, alpha, v, horizon)
            ok &= bool(np.all(cr.averages <= cr.bound * cr.norm_f + 1e-9))
        out["cesaro_witness"] = ok
    return out
