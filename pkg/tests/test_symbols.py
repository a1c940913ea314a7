import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affinedyn.errors import NotInvertible
from affinedyn.symbols import (
    IDENTITY,
    AffineSymbol,
    angular_derivative_at_infinity,
    apply,
    check_alpha,
    compose,
    fixed_point,
    inverse,
    iterate,
    iterate_log_data,
)

a_st = st.floats(0.1, 10.0)
re_st = st.floats(0.0, 5.0)
im_st = st.floats(-5.0, 5.0)


def close(phi, psi, tol=1e-12):
    return math.isclose(phi.a, psi.a, rel_tol=tol) and abs(phi.b - psi.b) <= tol * max(1.0, abs(psi.b))


@pytest.mark.parametrize(
    "a, b, w, expected",
    [(1, 0, 3 + 4j, 3 + 4j), (2, 1, 1, 3), (0.5, 1j, 2, 1 + 1j)],
)
def test_apply(a, b, w, expected):
    assert apply(AffineSymbol(a, b), w) == expected
    assert AffineSymbol(a, b)(w) == expected


def test_rejects_invalid_parameters():
    with pytest.raises(ValueError, match="a"):
        AffineSymbol(0.0, 0)
    with pytest.raises(ValueError, match="a"):
        AffineSymbol(-1.0, 0)
    with pytest.raises(ValueError, match="Re"):
        AffineSymbol(1.0, -0.5 + 1j)
    with pytest.raises(ValueError):
        check_alpha(-1.0)
    assert check_alpha(-0.5) == -0.5


def test_tiny_real_part_snaps_to_zero():
    phi = AffineSymbol(2.0, -1e-13 + 1j)
    assert phi.b == 1j and phi.re_b_zero
    assert not AffineSymbol(2.0, 1e-11).re_b_zero


def test_compose_examples():
    assert compose(AffineSymbol(2, 1), AffineSymbol(2, 1)) == AffineSymbol(4, 3)
    assert compose(IDENTITY, AffineSymbol(3, 2 + 1j)) == AffineSymbol(3, 2 + 1j)
    assert compose(AffineSymbol(0.5, 1j), AffineSymbol(2, 0)) == AffineSymbol(1, 1j)


def test_iterate_examples():
    assert iterate(AffineSymbol(1, 1j), 3) == AffineSymbol(1, 3j)
    assert iterate(AffineSymbol(2, 1), 2) == AffineSymbol(4, 3)
    assert iterate(AffineSymbol(0.3, 2 + 1j), 0) == IDENTITY


def test_iterate_near_one_is_stable():
    phi = AffineSymbol(1.0 + 1e-10, 1.0)
    # (a^n - 1)/(a - 1) -> n as a -> 1
    assert iterate(phi, 1000).b.real == pytest.approx(1000.0, rel=1e-6)


def test_iterate_cap_and_overflow():
    with pytest.raises(ValueError):
        iterate(AffineSymbol(2, 0), 10**6 + 1)
    with pytest.raises(ValueError):
        iterate(AffineSymbol(2, 0), -1)
    with pytest.raises(OverflowError):
        iterate(AffineSymbol(2, 0), 5000)


def test_iterate_log_data_matches_direct_form():
    phi = AffineSymbol(1.7, 0.4 + 2j)
    n_log_a, log_two_re = iterate_log_data(phi, 40)
    direct = iterate(phi, 40)
    assert n_log_a == pytest.approx(math.log(direct.a), rel=1e-13)
    assert log_two_re == pytest.approx(math.log(2 * direct.b.real), rel=1e-13)
    # finite far past the floating-point range of a^n
    big = iterate_log_data(AffineSymbol(3.0, 1.0), 10**4)
    assert all(math.isfinite(v) for v in big)
    assert iterate_log_data(AffineSymbol(3.0, 1j), 10)[1] == -math.inf


@settings(max_examples=200, deadline=None)
@given(a_st, re_st, im_st, st.integers(0, 40), st.integers(0, 40))
def test_semigroup_law(a, re_b, im_b, n, m):
    phi = AffineSymbol(a, complex(re_b, im_b))
    lhs = iterate(phi, n + m)
    rhs = compose(iterate(phi, n), iterate(phi, m))
    assert math.isclose(math.log(lhs.a), math.log(rhs.a), rel_tol=1e-12, abs_tol=1e-12)
    assert abs(lhs.b - rhs.b) <= 1e-12 * max(1.0, abs(rhs.b))


@settings(max_examples=100, deadline=None)
@given(a_st, re_st, im_st, st.integers(1, 64))
def test_iterate_matches_repeated_compose(a, re_b, im_b, n):
    phi = AffineSymbol(a, complex(re_b, im_b))
    acc = IDENTITY
    for _ in range(n):
        acc = compose(phi, acc)
    it = iterate(phi, n)
    assert math.isclose(math.log(it.a), math.log(acc.a), rel_tol=1e-12, abs_tol=1e-12)
    assert abs(it.b - acc.b) <= 1e-12 * max(1.0, abs(acc.b))


def test_inverse_examples():
    assert inverse(AffineSymbol(2, 0)) == AffineSymbol(0.5, 0)
    assert inverse(AffineSymbol(0.5, 1j)) == AffineSymbol(2, -2j)
    with pytest.raises(NotInvertible):
        inverse(AffineSymbol(1, 1))


@settings(max_examples=100, deadline=None)
@given(a_st, im_st)
def test_inverse_round_trip(a, im_b):
    phi = AffineSymbol(a, 1j * im_b)
    assert close(compose(phi, inverse(phi)), IDENTITY)
    assert close(compose(inverse(phi), phi), IDENTITY)


def test_fixed_points():
    fp = fixed_point(AffineSymbol(0.7, 0.3))
    assert fp.point == pytest.approx(1.0, abs=1e-15) and fp.interior
    fp = fixed_point(AffineSymbol(2, 1))
    assert fp.point == -1 and not fp.interior
    fp = fixed_point(AffineSymbol(1, 1j))
    assert fp.point is None and not fp.interior and not fp.all_fixed
    assert fixed_point(IDENTITY).all_fixed


@pytest.mark.parametrize("a, b, expected", [(4, 0, 0.25), (1, 5, 1.0), (0.5, 1j, 2.0)])
def test_angular_derivative(a, b, expected):
    phi = AffineSymbol(a, b)
    assert angular_derivative_at_infinity(phi) == expected
    # oracle: w / phi(w) for large real w
    w = 1e12
    assert abs(w / phi(w) - expected) < 1e-9


def test_json_round_trip():
    phi = AffineSymbol(0.5, 1 + 2j)
    assert phi.to_json() == {"a": 0.5, "b_re": 1.0, "b_im": 2.0}
    assert AffineSymbol.from_json(phi.to_json()) == phi
