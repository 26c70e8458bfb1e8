import pytest
from hypothesis import given, strategies as st
from sympy import Rational

from app.calculus import apply_diffop, del_op, delb_op
from app.errors import NotIntegrable
from app.integration import (
    integral_value,
    integrate_plane,
    integrate_sphere,
    invariance_residuals,
    is_integrable,
    moment_table,
    plane_family,
    plane_integral_value,
    solve_moments,
    sphere_moment,
    translation_residuals,
    verify_invariance_recursion,
    verify_plane_translation_invariance,
)
from app.scalar import ONE, classical_limit, qint, qpow
from app.vfields import act_func
from app.zalgebra import FuncElement, FuncMonomial, monomial, rho_power, z, zb


def test_normalization():
    assert integrate_sphere(FuncElement.one()) == 1


def test_rho_moments():
    assert integrate_sphere(rho_power(-2)) == ONE / (1 + qpow(2) + qpow(4))


@given(st.integers(0, 10))
def test_moments_and_classical_limit(l):
    value = integrate_sphere(rho_power(-l))
    assert value == sphere_moment(l) == ONE / qint(l + 1)
    assert classical_limit(value) == Rational(1, l + 1)


def test_domain():
    assert is_integrable(FuncMonomial(0, 0, 0))
    assert is_integrable(FuncMonomial(2, 1, 0))
    assert not is_integrable(FuncMonomial(1, 1, 0))
    assert not is_integrable(FuncMonomial(0, 0, 1))


def test_not_integrable_names_monomial():
    with pytest.raises(NotIntegrable) as excinfo:
        integrate_sphere(z())
    assert excinfo.value.monomial == (0, 0, 1)
    assert excinfo.value.to_dict()["monomial"] == {"m": 0, "a": 0, "b": 1}


@pytest.mark.parametrize("l", range(2, 7))
def test_zb_z_moments(l):
    value = integrate_sphere(zb() * z() * rho_power(-l))
    assert value == ONE / qint(l) - ONE / qint(l + 1)


def test_charged_monomials_vanish():
    result = integral_value(monomial(3, 1, 0))
    assert result.value == 0
    assert result.status == "zero-by-invariance"
    assert integral_value(rho_power(-1)).status == "finite"


def test_solved_moments_match_closed_form():
    moments = solve_moments(6)
    assert len(moments) == 7
    assert all(moments[l] == sphere_moment(l) for l in range(7))


def test_moment_table():
    table = moment_table(3)
    assert table[(0, 2)] == ONE / qint(3)
    assert table[(1, 2)] == ONE / qint(2) - ONE / qint(3)


def test_invariance_recursion():
    report = verify_invariance_recursion(6)
    assert [row["l"] for row in report] == list(range(1, 7))
    with pytest.raises(ValueError):
        verify_invariance_recursion(0)


def test_integral_is_invariant():
    values = list(invariance_residuals(8))
    assert all(value == 0 for _, _, value in values if value is not None)
    assert any(value is None for _, _, value in values)
    assert any(mono.m == 8 for _, mono, value in values if value is not None)


def test_invariance_of_a_single_function():
    assert integrate_sphere(act_func("H", z() * rho_power(-3))) == 0
    assert integrate_sphere(act_func("Zp", zb() * rho_power(-3))) == 0


def test_plane_integral():
    assert integrate_plane(rho_power(-4)) == ONE / qint(3)
    assert plane_integral_value(rho_power(-4)).status == "finite"
    assert plane_integral_value(monomial(4, 0, 1)).status == "zero-by-invariance"


def test_plane_integral_of_one_diverges():
    with pytest.raises(NotIntegrable):
        integrate_plane(FuncElement.one())


def test_plane_integral_of_a_derivative_vanishes():
    assert integrate_plane(apply_diffop(del_op(), rho_power(-3))) == 0
    assert integrate_plane(apply_diffop(delb_op(), rho_power(-3))) == 0


def test_plane_translation_invariance():
    report = verify_plane_translation_invariance(list(plane_family(3, 4)))
    assert len(report) == 6
    assert all(row["status"] == "pass" for row in report)


def test_plane_translation_invariance_full_family():
    report = verify_plane_translation_invariance()
    assert len(report) == 18
    assert [row["f"] for row in report][-3:] == ["rhoi^8", "rhoi^9 * zb", "rhoi^9 * z"]


def test_translation_residuals_are_signed():
    residuals = translation_residuals(rho_power(-3))
    assert len(residuals) == 4
    assert all(value == 0 for value in residuals.values())


def test_translation_of_zero():
    report = verify_plane_translation_invariance([("0", FuncElement.zero())])
    assert report == [{"f": "0", "status": "pass"}]


def test_translation_propagates_not_integrable():
    with pytest.raises(NotIntegrable):
        translation_residuals(z())


def test_invariance_recursion_to_twelve():
    report = verify_invariance_recursion(12)
    assert [row["l"] for row in report] == list(range(1, 13))
