import cmath
import math

import pytest
from hypothesis import given

from app.calculus import exterior_d
from app.poisson import (
    bracket_rows,
    circle_integral_xi,
    circle_split_term,
    classical_d,
    classical_limit_elem,
    numeric_north_pole_checks,
    p_dz,
    p_rho,
    p_z,
    p_zb,
    plane_area_integral,
    poisson_bracket,
    verify_poisson,
    w_bracket_rows,
)
from app.zalgebra import FuncElement, z, zb
from tests.conftest import functions


def test_basic_bracket():
    assert poisson_bracket(zb(), z()) == p_rho()
    assert poisson_bracket(z(), zb()) == -p_rho()
    assert poisson_bracket(FuncElement.one(), z()) == 0


def test_limit_is_commutative():
    assert classical_limit_elem(z() * zb()) == p_z() * p_zb()
    assert classical_limit_elem(zb() * z()) == p_zb() * p_z()


def test_form_brackets():
    assert poisson_bracket(exterior_d(z()), z()) == p_z() * p_dz()


@given(functions(max_degree=2), functions(max_degree=2))
def test_antisymmetry(f, g):
    assert poisson_bracket(f, g) == -poisson_bracket(g, f)


@given(functions(max_terms=2, max_degree=1), functions(max_terms=2, max_degree=1), functions(max_terms=2, max_degree=1))
def test_leibniz(f, g, h):
    lhs = poisson_bracket(f, g * h)
    rhs = poisson_bracket(f, g) * classical_limit_elem(h) + classical_limit_elem(g) * poisson_bracket(f, h)
    assert lhs == rhs


@given(functions(max_degree=2))
def test_limit_commutes_with_d(f):
    assert classical_limit_elem(exterior_d(f)) == classical_d(classical_limit_elem(f))


def test_identity_rows():
    for identity, residual in bracket_rows():
        assert residual == 0, identity


def test_w_brackets():
    for identity, ok in w_bracket_rows():
        assert ok, identity


def test_verify_rows():
    rows = verify_poisson(seed=11, count=2)
    assert all(row["status"] == "pass" for row in rows)


@pytest.mark.parametrize("r", [0.5, 0.1, 0.01])
def test_contour_integral_of_xi(r):
    value = circle_integral_xi(r)
    assert cmath.isclose(value, -4j * math.pi / (1 + r * r), rel_tol=1e-8)


def test_split_term_vanishes_with_radius():
    assert abs(circle_split_term(0.01)) < abs(circle_split_term(0.1)) < abs(circle_split_term(0.5))


def test_total_area():
    assert cmath.isclose(plane_area_integral(), 4j * math.pi, rel_tol=1e-6)


def test_numeric_checks():
    rows = numeric_north_pole_checks()
    extrapolated = rows[-1]
    assert extrapolated.check == "contour Xi, r -> 0"
    assert cmath.isclose(extrapolated.value, -4j * math.pi, rel_tol=1e-4)
    assert rows[0].to_dict()["check"] == "contour Xi, r = 0.5"


def test_numeric_checks_reject_bad_radii():
    with pytest.raises(ValueError):
        numeric_north_pole_checks([1.5])
    with pytest.raises(ValueError):
        numeric_north_pole_checks([])
