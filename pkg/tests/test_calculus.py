import pytest
from hypothesis import given

from app.calculus import (
    DiffOp,
    FormElement,
    apply_diffop,
    del_op,
    delb_op,
    delta,
    delta_bar,
    dz,
    dzb,
    exterior_d,
    gauge_closed_form,
    gauge_derivative,
    graded_commutator,
    normalize_form,
    star_calc,
    star_form,
    xi_closed_forms,
    xi_forms,
)
from app.scalar import LAM, ONE, qpow
from app.zalgebra import rho_power, rhoi, z, zb
from tests.conftest import functions


def test_form_commutation():
    assert dz() * z() == z() * dz() * qpow(2)
    assert dz() * zb() == zb() * dz() * qpow(-2)
    assert dz() * dzb() == -dzb() * dz() * qpow(-2)
    assert dz() * dz() == 0


def test_normalize_form_matches_product():
    assert normalize_form({("dz", "z"): ONE}) == z() * dz() * qpow(2)
    assert normalize_form({("dzb", "rhoi", "dz"): ONE}) == dzb() * rhoi() * dz()


def test_derivatives_on_generators():
    assert apply_diffop(del_op(), z()) == 1
    assert apply_diffop(delb_op(), z()) == 0
    assert apply_diffop(delb_op(), zb()) == 1
    assert apply_diffop(del_op(), z() * z()) == z() * (1 + qpow(-2))


def test_derivative_relations():
    d, db = del_op(), delb_op()
    assert d * z() == 1 + DiffOp.lift(z()) * d * qpow(-2)
    assert db * zb() == 1 + DiffOp.lift(zb()) * db * qpow(2)
    assert d * db == db * d * qpow(-2)


def test_exterior_derivative():
    assert exterior_d(z()) == dz()
    assert exterior_d(zb()) == dzb()
    assert exterior_d(zb() * z()) == zb() * dz() + z() * dzb() * qpow(2)
    assert exterior_d(dz()) == 0
    assert exterior_d(ONE) == 0


@given(functions())
def test_d_squared_vanishes(f):
    assert exterior_d(exterior_d(f)) == 0


@given(functions(), functions())
def test_leibniz_rule(f, g):
    assert exterior_d(f * g) == exterior_d(f) * g + f * exterior_d(g)


@given(functions())
def test_holomorphic_split(f):
    assert delta(f) + delta_bar(f) == exterior_d(f)
    assert delta(delta(f)) == 0


def test_delta_on_generators():
    assert delta(z()) == dz()
    assert delta(zb()) == 0
    assert delta_bar(zb()) == dzb()


def test_star_of_derivatives():
    d, db = del_op(), delb_op()
    assert star_calc(d) == db * (-qpow(-2)) + DiffOp.lift(z() * rhoi()) * (1 + qpow(-2))
    assert star_calc(d, "plane") == db * (-qpow(2))
    for variant in ("sphere", "plane"):
        assert star_calc(star_calc(d, variant), variant) == d
        assert star_calc(star_calc(db, variant), variant) == db


def test_unknown_star_variant():
    with pytest.raises(ValueError):
        star_calc(del_op(), "torus")


@given(functions())
def test_star_on_forms_is_involutive(f):
    omega = dz() * f + f * dzb()
    assert star_form(star_form(omega)) == omega


def test_star_on_basis_forms():
    assert star_form(dz()) == dzb()
    assert star_form(FormElement.lift(z())) == zb()


def test_gauge_derivatives():
    assert gauge_derivative(0) == (del_op(), delb_op())
    for n in range(1, 3):
        d_n, db_n = gauge_derivative(n)
        assert (d_n, db_n) == gauge_closed_form(n)
        assert d_n * z() == 1 + DiffOp.lift(z()) * d_n * qpow(-2)
    with pytest.raises(ValueError):
        gauge_derivative(-1)


def test_xi_closed_forms():
    forms = xi_forms()
    closed = xi_closed_forms()
    assert forms.dXi == closed["dXi"]
    assert forms.Xi2 == closed["Xi2"]
    assert closed["dXi"] == dzb() * rho_power(-2) * dz() * (2 * qpow(1))
    assert star_form(forms.Xi) == -forms.Xi


@given(functions())
def test_xi_generates_d(f):
    big_xi = xi_forms().Xi
    assert graded_commutator(big_xi, FormElement.lift(f)) == exterior_d(f) * LAM


def test_xi_on_one_forms():
    big_xi = xi_forms().Xi
    for omega in (dz(), dzb(), z() * dz()):
        assert graded_commutator(big_xi, omega) == exterior_d(omega) * LAM


def test_xi_square_is_central():
    xi2 = xi_forms().Xi2
    for x in (z(), zb(), rhoi(), dz(), dzb()):
        x = FormElement.lift(x)
        assert xi2 * x == x * xi2
