import math

import numpy as np
import pytest

from affinedyn import kernelspace as ks
from affinedyn.errors import NoInteriorFixedPoint, RegimeMismatch, ZeroAtTarget, ZeroImage
from affinedyn.experiments import (
    DEFAULT_PANEL,
    concordance,
    cesaro_averages,
    cesaro_bound,
    default_vectors,
    irregular_scan,
    lower_estimate_delta,
    make_pseudo_orbit,
    non_shadowing_witness,
    orbit_norms,
    panel_symbols,
    series_tail_terms,
    shadow_contraction,
    shadow_expansion,
    spectral_radius_estimate,
    verify_norm_estimates,
)
from affinedyn.kernelspace import KernelVector
from affinedyn.symbols import AffineSymbol


def k(w, alpha=0.0, c=1.0):
    return KernelVector.kernel(w, alpha, c)


def unit_k1(alpha=0.0):
    return k(1.0, alpha, 1.0 / ks.kernel_norm(alpha, 1.0))


# --- orbit norms


def test_orbit_of_imaginary_translation_halves():
    res = orbit_norms(AffineSymbol(2, 1j), 0.0, k(1), 40)
    expected = 0.5 * 2.0 ** -np.arange(41)
    assert np.allclose(res.norms, expected, rtol=1e-12, atol=0)
    assert res.max_log_gap < 1e-8


def test_identity_orbit_is_constant():
    f = k(1) + k(2 + 1j, c=-0.5j)
    res = orbit_norms(AffineSymbol(1, 0), 0.0, f, 10)
    assert np.allclose(res.norms, ks.norm(f), rtol=1e-14, atol=0)


def test_expanding_orbit_grows_like_lower_estimate():
    phi = AffineSymbol(0.5, 1)
    res = orbit_norms(phi, 0.0, unit_k1(), 60)
    est = lower_estimate_delta(phi, 0.0, unit_k1(), z0=1.0, horizon=60)
    n = np.arange(est.n0, 61)
    assert np.all(res.norms[n] >= est.delta * 2.0 ** n)


@pytest.mark.filterwarnings("ignore::affinedyn.errors.IllConditionedWarning")
def test_orbit_routes_agree_on_panel():
    for phi, alpha in panel_symbols():
        for f in default_vectors(alpha):
            res = orbit_norms(phi, alpha, f, 60)
            assert res.max_log_gap < 1e-8, (phi, alpha)


def test_orbit_reaches_max_horizon_in_log_domain():
    res = orbit_norms(AffineSymbol(3.0, 1.0), 0.0, k(1), 10**4)
    assert np.all(np.isfinite(res.log_norm))
    # ||C^n k_1|| ~ 3^-2n ||k_{b_n}|| with Re b_n ~ 3^n/2: decays like 3^-2n
    slope = (res.log_norm[-1] - res.log_norm[-1001]) / 1000
    assert slope == pytest.approx(-2 * math.log(3.0), rel=1e-6)


def test_orbit_preconditions():
    with pytest.raises(ValueError):
        orbit_norms(AffineSymbol(2, 0), 0.0, KernelVector.zero(0.0), 5)
    with pytest.raises(ValueError):
        orbit_norms(AffineSymbol(2, 0), 0.0, k(1), 10**4 + 1)


# --- norm estimates


def test_norm_estimate_equality():
    rep = verify_norm_estimates(AffineSymbol(3, 2j), 1.0, 100)
    assert rep.max_equality_violation < 1e-10


def test_norm_estimate_inequality():
    rep = verify_norm_estimates(AffineSymbol(3, 1), 1.0, 100)
    assert rep.max_equality_violation is None
    assert rep.max_ratio <= 3 ** -1.5 + 1e-10
    assert rep.max_inequality_violation <= 1e-10


def test_wrong_exponent_is_detected():
    rep = verify_norm_estimates(AffineSymbol(3, 2j), 1.0, 20, exponent=2.0)
    assert rep.max_equality_violation > 0.1


# --- lower estimate


def test_lower_estimate_exact_delta():
    rep = lower_estimate_delta(AffineSymbol(0.5, 1), 0.0, unit_k1(), z0=1.0)
    assert rep.z1 == 3
    assert rep.delta == 0.125
    assert rep.n0 is not None
    for n in range(rep.n0, 61):
        assert rep.scaled_norm(n) >= rep.delta


def test_lower_estimate_without_translation():
    g = unit_k1()
    rep = lower_estimate_delta(AffineSymbol(0.5, 0), 0.0, g, z0=1.0)
    assert rep.z1 == 1
    assert rep.delta == pytest.approx(abs(ks.evaluate(g, 1.0)) / (2 * ks.kernel_norm(0.0, 1.0)), rel=1e-15)
    # psi_n is the identity, so the intermediate column is constant
    assert len({round(r[2], 15) for r in rep.rows}) == 1


def test_lower_estimate_retries_grid_when_g_vanishes():
    # g = k_1 - k_2 vanishes nowhere on the grid's first point? force a zero at z1 = 1 + shift
    g = k(1.0) - k(1.0) * 1.0 + k(3.0)
    rep = lower_estimate_delta(AffineSymbol(0.5, 0), 0.0, g, z0=1.0)
    assert rep.attempts[0] == 1.0


def test_lower_estimate_zero_at_target(monkeypatch):
    import affinedyn.experiments as ex

    monkeypatch.setattr(ex.ks, "evaluate", lambda f, z: 0.0)
    with pytest.raises(ZeroAtTarget):
        ex.lower_estimate_delta(AffineSymbol(0.5, 1), 0.0, unit_k1())


def test_lower_estimate_regime():
    with pytest.raises(RegimeMismatch):
        lower_estimate_delta(AffineSymbol(2, 1), 0.0, unit_k1())


# --- pseudo-orbits


def test_equal_gap_pseudo_orbit_first_terms():
    phi = AffineSymbol(0.7, 0.3 + 1j)
    x = k(1) + k(2j + 1, c=0.5)
    po = make_pseudo_orbit(phi, 0.0, x, 0.05, 2, "equal_gap")
    assert len(po.x(1)) == 0
    tx = ks.apply_composition(phi, x)
    assert ks.norm(ks.combine(po.x(2) - tx * (0.05 / ks.norm(tx)))) < 1e-15
    assert po.gaps[0] == pytest.approx(0.05, rel=1e-12)


def test_equal_gap_pseudo_orbit_gaps_equal_delta():
    po = make_pseudo_orbit(AffineSymbol(2, 0), 0.0, k(1), 0.01, 10, "equal_gap")
    assert np.allclose(po.gaps, 0.01, rtol=0, atol=1e-12)


def test_equal_gap_pseudo_orbit_matches_sum_formula():
    phi = AffineSymbol(1.5, 0.2 - 1j)
    x = k(1 + 1j)
    po = make_pseudo_orbit(phi, 0.0, x, 0.1, 6, "equal_gap")
    scale = 0.1 / ks.norm(ks.apply_composition(phi, x))
    for n in range(1, 7):
        acc = KernelVector.zero(0.0)
        for j in range(1, n):
            y = x
            for _ in range(n - j):
                y = ks.apply_composition(phi, y)
            acc = acc + y
        assert ks.norm(po.x(n) - acc * scale, check=False) < 1e-14


def test_noiseless_perturbed_orbit_is_exact():
    po = make_pseudo_orbit(AffineSymbol(2, 1), 0.0, k(1), 0.1, 8, "perturbed", noise=0.0)
    assert max(po.gaps) == 0.0


def test_perturbed_orbit_within_delta_and_seeded():
    a = make_pseudo_orbit(AffineSymbol(2, 1), 0.0, k(1), 0.1, 20, "perturbed", seed=3)
    b = make_pseudo_orbit(AffineSymbol(2, 1), 0.0, k(1), 0.1, 20, "perturbed", seed=3)
    assert max(a.gaps) <= 0.1 * (1 + 1e-9)
    assert a.gaps == b.gaps


def test_pseudo_orbit_rejects_zero_seed_vector():
    with pytest.raises(ZeroImage):
        make_pseudo_orbit(AffineSymbol(2, 1), 0.0, KernelVector.zero(0.0), 0.1, 5, "equal_gap")
    with pytest.raises(ValueError):
        make_pseudo_orbit(AffineSymbol(2, 1), 0.0, k(1), 0.0, 5)


# --- shadowing


def test_contraction_shadow_bound():
    po = make_pseudo_orbit(AffineSymbol(2, 1), 0.0, k(1), 0.01, 100, "perturbed")
    rep = shadow_contraction(po)
    assert rep.epsilon_bound == pytest.approx(0.02, rel=1e-15)
    assert rep.epsilon_observed <= rep.epsilon_bound


def test_contraction_shadow_of_exact_orbit():
    po = make_pseudo_orbit(AffineSymbol(2, 1), 0.0, k(1), 0.01, 30, "perturbed", noise=0.0)
    assert shadow_contraction(po).epsilon_observed == 0.0


def test_contraction_bound_for_a4():
    po = make_pseudo_orbit(AffineSymbol(4, 0), 0.0, k(1), 0.1, 50, "perturbed", seed=9)
    rep = shadow_contraction(po)
    assert rep.epsilon_bound == pytest.approx(0.1 / 0.75, rel=1e-15)
    assert rep.epsilon_observed <= rep.epsilon_bound


def test_contraction_shadow_of_equal_gap_orbit():
    po = make_pseudo_orbit(AffineSymbol(2, 1 + 1j), 0.0, k(1), 0.01, 60, "equal_gap")
    rep = shadow_contraction(po)
    assert rep.epsilon_observed <= rep.epsilon_bound


def test_contraction_regime():
    po = make_pseudo_orbit(AffineSymbol(0.5, 1j), 0.0, k(1), 0.01, 5)
    with pytest.raises(RegimeMismatch):
        shadow_contraction(po)


def test_series_tail_terms():
    # 0.01 * 0.5^(J+1)/0.5 < 0.01 * 0.01  ->  0.5^J < 0.01  ->  J = 7
    assert series_tail_terms(0.01, 0.5, 0.01) == 7


def test_expansion_shadow_bound():
    po = make_pseudo_orbit(AffineSymbol(0.5, 1j), 0.0, unit_k1(), 0.01, 41, "perturbed")
    rep = shadow_expansion(po, horizon=20)
    assert rep.epsilon_bound == pytest.approx(0.01 + rep.truncation_bound, rel=1e-15)
    assert rep.epsilon_observed <= rep.epsilon_bound


def test_expansion_bound_for_quarter():
    po = make_pseudo_orbit(AffineSymbol(0.25, 0), 0.0, unit_k1(), 0.01, 30, "perturbed", seed=5)
    rep = shadow_expansion(po, horizon=15)
    assert rep.epsilon_bound - rep.truncation_bound == pytest.approx(0.01 / 3, rel=1e-14)
    assert rep.epsilon_observed <= rep.epsilon_bound


def test_expansion_shadow_of_exact_orbit():
    po = make_pseudo_orbit(AffineSymbol(0.5, 1j), 0.0, unit_k1(), 0.01, 30, "perturbed", noise=0.0)
    rep = shadow_expansion(po, horizon=10)
    assert rep.epsilon_observed == 0.0
    assert ks.norm(ks.combine(rep.shadow_point - po.x(1))) == 0.0


def test_expansion_at_higher_weight():
    po = make_pseudo_orbit(AffineSymbol(0.5, 2j), 2.0, unit_k1(2.0), 0.01, 40, "perturbed", seed=2)
    rep = shadow_expansion(po, horizon=15)
    assert rep.epsilon_observed <= rep.epsilon_bound


def test_expansion_regime():
    po = make_pseudo_orbit(AffineSymbol(0.5, 1), 0.0, k(1), 0.01, 5)
    with pytest.raises(RegimeMismatch):
        shadow_expansion(po)


# --- non-shadowing witness


def test_witness_drift():
    rep = non_shadowing_witness(AffineSymbol(0.7, 0.3), 0.0, 0.1, 1.0)
    assert rep.fixed_point == pytest.approx(1.0, abs=1e-15)
    assert rep.kernel_norm == pytest.approx(0.5, rel=1e-15)
    assert rep.drift_slope == pytest.approx(0.05, rel=1e-12)
    # x_n(p) = (n-1) delta ||k_p|| exceeds 2 eps ||k_p|| = 1 first at n = 22
    assert rep.n_star == 22
    assert np.allclose(rep.values, 0.05 * np.arange(len(rep.values)), rtol=1e-12, atol=1e-15)


def test_witness_requires_interior_fixed_point():
    with pytest.raises(NoInteriorFixedPoint):
        non_shadowing_witness(AffineSymbol(1, 1), 0.0, 0.1, 1.0)
    with pytest.raises(NoInteriorFixedPoint):
        non_shadowing_witness(AffineSymbol(2, 1), 0.0, 0.1, 1.0)


# --- Cesaro


def test_cesaro_translation_bounded_by_norm():
    f = unit_k1()
    rep = cesaro_averages(AffineSymbol(1, 1), 0.0, f, 200)
    assert rep.bound == 1.0
    assert np.all(rep.averages <= 1 + 1e-10)


def test_cesaro_contraction_bound():
    assert cesaro_bound(AffineSymbol(2, 0), 0.0) == 1.0
    assert cesaro_bound(AffineSymbol(1.2, 0), 0.0) == pytest.approx((1 / 1.2) / (1 - 1 / 1.2))
    for f in default_vectors(0.0):
        rep = cesaro_averages(AffineSymbol(2, 0), 0.0, f, 100)
        assert np.all(rep.averages <= rep.norm_f + 1e-9)


def test_cesaro_expansion_witness():
    rep = cesaro_averages(AffineSymbol(0.5, 0), 0.0, k(1), 60)
    assert rep.bound is None and rep.to_json()["M"] == "unbounded"
    assert rep.witness_n is not None
    n = rep.witness_n
    assert rep.averages[n - 1] > 10 * rep.norm_f
    assert np.all(rep.averages[: n - 1] <= 10 * rep.norm_f)
    for m, lb in rep.lower_bounds:
        assert rep.averages[m - 1] >= lb * (1 - 1e-12)


# --- irregular scan and spectral radius


def test_irregular_scan_signatures():
    rows = irregular_scan(AffineSymbol(1, 1j), 0.0, [unit_k1()], 30)
    assert rows[0].min_norm == pytest.approx(rows[0].max_norm, rel=1e-12)
    rows = irregular_scan(AffineSymbol(2, 1), 0.0, [unit_k1()], 30)
    assert rows[0].signature_ok
    norms = orbit_norms(AffineSymbol(2, 1), 0.0, unit_k1(), 30).norms
    assert np.all(norms <= 2.0 ** -np.arange(31) * (1 + 1e-10))
    rows = irregular_scan(AffineSymbol(0.5, 1), 0.0, [k(1)], 60)
    assert rows[0].signature_ok and rows[0].n_two is not None


@pytest.mark.parametrize("a, alpha, expected", [(2, 0, 0.5), (1, 0, 1.0), (0.5, 2, 4.0)])
def test_spectral_radius(a, alpha, expected):
    rep = spectral_radius_estimate(AffineSymbol(a, 0.3), alpha, 50)
    assert rep.estimate == pytest.approx(expected, rel=1e-13)
    assert rep.gap < 1e-12
    with pytest.raises(ValueError):
        spectral_radius_estimate(AffineSymbol(a, 0), alpha, 5)


@pytest.mark.filterwarnings("ignore::affinedyn.errors.IllConditionedWarning")
def test_panel_concordance():
    assert len(DEFAULT_PANEL) == 12
    for phi, alpha in panel_symbols():
        out = concordance(phi, alpha, quick=True)
        for key, value in out.items():
            if key.endswith("_witness") and key != "non_shadowing_witness":
                assert value is True, (phi, alpha, key)
        if "non_shadowing_witness" in out:
            assert out["non_shadowing_witness"] > 1
