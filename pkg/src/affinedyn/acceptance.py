"""The acceptance suite: nine numbered checks with fixed tolerances and time limits."""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import kernelspace as ks
from .dynamics import classify
from .errors import IllConditionedWarning
from .experiments import (
    DEFAULT_PANEL,
    DEFAULT_SEED,
    cesaro_averages,
    default_vectors,
    lower_estimate_delta,
    make_pseudo_orbit,
    non_shadowing_witness,
    panel_symbols,
    random_kernel_vector,
    series_tail_terms,
    shadow_contraction,
    shadow_expansion,
    spectral_radius_estimate,
)
from .kernelspace import KernelVector
from .laplace import ProfileFunction, isometry_check, normality_commutator, predicted_commutator
from .report import write_json
from .symbols import AffineSymbol


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    observed: dict[str, Any]
    expected: dict[str, Any]
    runtime: float = 0.0
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g} s)" if self.limit is not None else ""
        return f"[{status}] criterion {self.number}: {self.name}  {self.runtime:.2f} s{lim}"

    def to_json(self) -> dict[str, Any]:
        # runtimes vary between runs and live in timing.json instead
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "observed": self.observed,
            "expected": self.expected,
        }


def _unit_k1(alpha: float) -> KernelVector:
    return KernelVector.kernel(1.0, alpha, 1.0 / ks.kernel_norm(alpha, 1.0))


def c1_isometry(quick: bool = False) -> CriterionResult:
    observed: dict[str, Any] = {}
    ok = True
    worst_time = 0.0
    for alpha in (-0.5, 0.0, 1.0):
        t0 = time.perf_counter()
        f = ProfileFunction.single(alpha, 1.0, alpha + 1.0, 1.0)
        res = isometry_check(f)
        dt = time.perf_counter() - t0
        worst_time = max(worst_time, dt)
        ok &= res.gap < 1e-6 and dt < 5.0
        entry = {"bergman_norm": res.bergman_norm, "mu_norm": res.mu_norm, "relative_gap": res.gap}
        if alpha == 0.0:
            k1 = ks.kernel_norm(0.0, 1.0)
            ok &= abs(res.bergman_norm - 0.5) < 1e-6 and abs(res.mu_norm - 0.5) < 1e-12 and k1 == 0.5
        observed[f"alpha={alpha:g}"] = entry
    return CriterionResult(
        1,
        "kernel/Laplace isometry",
        ok,
        observed,
        {"relative_gap_below": 1e-6, "alpha=0_norms": 0.5, "seconds_per_alpha_below": 5.0},
    )


def _norm_cases(rng: np.random.Generator, count: int, zero_re: bool) -> list[tuple[AffineSymbol, float]]:
    alphas = (-0.5, 0.0, 1.0, 2.3)
    out = []
    for _ in range(count):
        a = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        b_im = rng.uniform(-3.0, 3.0)
        b_re = 0.0 if zero_re else rng.uniform(0.01, 3.0)
        out.append((AffineSymbol(a, complex(b_re, b_im)), float(alphas[rng.integers(len(alphas))])))
    return out


def c2_norm_estimates(quick: bool = False, exponent_offset: float = 0.0) -> CriterionResult:
    """``exponent_offset`` perturbs alpha + 2 in the bound; any nonzero value must fail."""
    count = 50 if quick else 200
    rng = np.random.default_rng(DEFAULT_SEED)
    eq_worst = 0.0
    for phi, alpha in _norm_cases(rng, count, True):
        f = random_kernel_vector(rng, alpha)
        bound = phi.a ** (-(alpha + 2.0 + exponent_offset) / 2.0)
        ratio = ks.norm(ks.apply_composition(phi, f), check=False) / ks.norm(f, check=False)
        eq_worst = max(eq_worst, abs(ratio / bound - 1.0))
    ineq_worst = 0.0
    for phi, alpha in _norm_cases(rng, count, False):
        f = random_kernel_vector(rng, alpha)
        bound = phi.a ** (-(alpha + 2.0 + exponent_offset) / 2.0)
        ratio = ks.norm(ks.apply_composition(phi, f), check=False) / ks.norm(f, check=False)
        ineq_worst = max(ineq_worst, ratio / bound - 1.0)
    ineq_worst = max(ineq_worst, 0.0)
    ok = eq_worst < 1e-10 and ineq_worst <= 1e-10
    return CriterionResult(
        2,
        "norm identity and inequality",
        ok,
        {"cases_per_family": count, "max_equality_violation": eq_worst, "max_inequality_violation": ineq_worst},
        {"equality_tolerance": 1e-10, "inequality_tolerance": 1e-10},
    )


def c3_lower_estimate(quick: bool = False) -> CriterionResult:
    observed: dict[str, Any] = {}
    ok = True
    for a, b, alpha in ((0.5, 1 + 0j, 0.0), (0.3, 2 + 1j, 1.0), (0.8, 0.1 + 0j, -0.5)):
        phi = AffineSymbol(a, b)
        rep = lower_estimate_delta(phi, alpha, _unit_k1(alpha), z0=1.0, horizon=60)
        holds = rep.n0 is not None and all(rep.rows[n][1] >= rep.delta for n in range(rep.n0, 61))
        ok &= holds
        observed[f"a={a:g},b={b},alpha={alpha:g}"] = {"delta": rep.delta, "n0": rep.n0, "bound_holds": holds}
        if (a, b, alpha) == (0.5, 1 + 0j, 0.0):
            ok &= rep.delta == 0.125
    return CriterionResult(
        3,
        "lower-estimate pipeline",
        ok,
        observed,
        {"horizon": 60, "delta_for_a=0.5,b=1,alpha=0": 0.125},
    )


def load_golden() -> list[dict[str, Any]]:
    text = resources.files("affinedyn").joinpath("data/classify_panel.json").read_text()
    return json.loads(text)["entries"]


_GOLDEN_FLAGS = (
    "invertible",
    "unitary",
    "normal",
    "expansive",
    "uniformly_expansive",
    "positive_expansive",
    "uniformly_positive_expansive",
    "li_yorke",
    "positive_shadowing",
    "cesaro_bounded",
    "hyperbolic",
)


def golden_mismatches(entry: dict[str, Any]) -> list[str]:
    phi = AffineSymbol(entry["a"], complex(entry["b_re"], entry["b_im"]))
    rep = classify(phi, entry["alpha"])
    vals = rep.values()
    bad = [name for name in _GOLDEN_FLAGS if vals[name] != entry[name]]
    if not math.isclose(vals["operator_norm"], entry["operator_norm"], rel_tol=1e-14):
        bad.append("operator_norm")
    want = entry["spectrum"]
    got = rep.spectrum.to_json()
    if got["kind"] != want["kind"]:
        bad.append("spectrum.kind")
    elif "radius" in want and not math.isclose(got["radius"], want["radius"], rel_tol=1e-14):
        bad.append("spectrum.radius")
    elif "generator_re" in want and (
        got["generator_re"] != want["generator_re"] or got["generator_im"] != want["generator_im"]
    ):
        bad.append("spectrum.generator")
    return bad


def c4_classifier(quick: bool = False) -> CriterionResult:
    golden = load_golden()
    mismatches = {}
    for entry in golden:
        bad = golden_mismatches(entry)
        if bad:
            mismatches[f"a={entry['a']:g},b={entry['b_re']:g}+{entry['b_im']:g}i,alpha={entry['alpha']:g}"] = bad
    return CriterionResult(
        4,
        "classifier truth table",
        not mismatches and len(golden) == 12,
        {"entries": len(golden), "mismatches": mismatches},
        {"entries": 12, "mismatches": {}},
    )


def c5_shadowing(quick: bool = False) -> CriterionResult:
    delta = 0.01
    phi = AffineSymbol(2.0, 1 + 1j)
    length = 40 if quick else 100
    seeds = range(DEFAULT_SEED, DEFAULT_SEED + (2 if quick else 5))
    contraction = []
    for seed in seeds:
        po = make_pseudo_orbit(phi, 0.0, _unit_k1(0.0), delta, length, "perturbed", seed)
        contraction.append(shadow_contraction(po).epsilon_observed)
    c_obs = max(contraction)

    psi = AffineSymbol(0.5, 1j)
    horizon = 20
    j0 = series_tail_terms(delta, 0.5, delta)
    po = make_pseudo_orbit(psi, 0.0, _unit_k1(0.0), delta, horizon + j0 + 1, "perturbed", DEFAULT_SEED)
    ex = shadow_expansion(po, horizon=horizon)
    ok = c_obs <= 0.02 and ex.epsilon_observed <= ex.epsilon_bound * (1.0 + 1e-6)
    return CriterionResult(
        5,
        "shadowing witnesses",
        ok,
        {
            "contraction_epsilon_observed": c_obs,
            "expansion_epsilon_observed": ex.epsilon_observed,
            "expansion_epsilon_bound": ex.epsilon_bound,
            "expansion_truncation": ex.truncation_bound,
        },
        {"contraction_bound": 0.02, "expansion_main_bound": 0.01},
    )


def c6_witness(quick: bool = False) -> CriterionResult:
    rep = non_shadowing_witness(AffineSymbol(0.7, 0.3 + 0j), 0.0, 0.1, 1.0)
    ok = abs(rep.fixed_point - 1.0) < 1e-15 and abs(rep.drift_slope - 0.05) < 1e-12 and rep.n_star > 1
    return CriterionResult(
        6,
        "non-shadowing witness",
        ok,
        {"fixed_point": [rep.fixed_point.real, rep.fixed_point.imag], "n_star": rep.n_star, "slope": rep.drift_slope},
        {"fixed_point": [1.0, 0.0], "slope": 0.05},
    )


def c7_cesaro(quick: bool = False) -> CriterionResult:
    horizon = 40 if quick else 100
    worst = -math.inf
    ill = 0
    for phi, alpha in panel_symbols():
        if phi.a < 1.0:
            continue
        for v in default_vectors(alpha):
            # collapsing kernel points (a > 1, Re b > 0) are expected to warn
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", IllConditionedWarning)
                rep = cesaro_averages(phi, alpha, v, horizon)
            ill += bool(caught)
            worst = max(worst, float(np.max(rep.averages - rep.bound * rep.norm_f)))
    witness = cesaro_averages(AffineSymbol(0.5, 0j), 0.0, KernelVector.kernel(1.0, 0.0), horizon)
    ok = worst <= 1e-9 and witness.witness_n is not None
    return CriterionResult(
        7,
        "Cesaro dichotomy",
        ok,
        {"max_excess_over_M_norm": worst, "witness_n_for_a=0.5": witness.witness_n, "ill_conditioned_orbits": ill},
        {"max_excess_below": 1e-9, "witness": "finite n with average > 10 ||k_1||"},
    )


def c8_gelfand(quick: bool = False) -> CriterionResult:
    worst = 0.0
    worst_radius = 0.0
    for phi, alpha in panel_symbols():
        rep = spectral_radius_estimate(phi, alpha, 50)
        worst = max(worst, rep.gap)
        worst_radius = max(worst_radius, abs(rep.estimate - rep.descriptor_radius))
    ok = worst < 1e-12 and worst_radius < 1e-12
    return CriterionResult(
        8,
        "Gelfand consistency",
        ok,
        {"max_gap": worst, "max_descriptor_gap": worst_radius},
        {"gap_below": 1e-12},
    )


COMMUTATOR_GRID = np.linspace(0.05, 12.0, 240)


def c9_normality(quick: bool = False) -> CriterionResult:
    observed = {}
    ok = True
    for phi, alpha in panel_symbols():
        f = ProfileFunction.single(alpha, 1.0, alpha + 1.0, 1.0)
        comm = float(np.max(normality_commutator(phi, f, COMMUTATOR_GRID)))
        normal = phi.a == 1.0 or phi.re_b_zero
        key = f"a={phi.a:g},b={phi.b},alpha={alpha:g}"
        if normal:
            ok &= comm < 1e-9
            observed[key] = {"normal": True, "commutator": comm}
        else:
            gap = float(np.max(predicted_commutator(phi, f, COMMUTATOR_GRID)))
            ok &= gap > 0 and comm >= gap * (1.0 - 1e-9)
            observed[key] = {"normal": False, "commutator": comm, "predicted_gap": gap}
    return CriterionResult(
        9,
        "normality dichotomy",
        ok,
        observed,
        {"normal_commutator_below": 1e-9, "non_normal": "commutator >= predicted positive gap"},
    )


CRITERIA: tuple[tuple[Callable[..., CriterionResult], float | None], ...] = (
    (c1_isometry, 15.0),
    (c2_norm_estimates, 10.0),
    (c3_lower_estimate, 10.0),
    (c4_classifier, 1.0),
    (c5_shadowing, 30.0),
    (c6_witness, 5.0),
    (c7_cesaro, 10.0),
    (c8_gelfand, None),
    (c9_normality, None),
)


def run_suite(
    quick: bool = False,
    out: Path | None = None,
    exponent_offset: float = 0.0,
    echo: Callable[[str], None] | None = None,
) -> list[CriterionResult]:
    """Run every criterion; write summary.json and timing.json when ``out`` is given."""
    results = []
    for fn, limit in CRITERIA:
        t0 = time.perf_counter()
        if fn is c2_norm_estimates:
            res = fn(quick, exponent_offset=exponent_offset)
        else:
            res = fn(quick)
        res.runtime = time.perf_counter() - t0
        res.limit = limit
        if limit is not None and res.runtime >= limit:
            res.passed = False
            res.observed["runtime_exceeded"] = True
        results.append(res)
        if echo is not None:
            echo(res.line())
    if out is not None:
        write_json(
            out / "summary.json",
            {
                "quick": quick,
                "all_passed": all(r.passed for r in results),
                "criteria": [r.to_json() for r in results],
            },
        )
        write_json(out / "timing.json", {f"criterion_{r.number}": r.runtime for r in results})
    return results


__all__ = ["CriterionResult", "run_suite", "load_golden", "golden_mismatches", "DEFAULT_PANEL"]
