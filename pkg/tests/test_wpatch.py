import pytest
from hypothesis import given

from app.calculus import dz, dzb
from app.errors import PatchError
from app.wpatch import (
    Q_R,
    RHO,
    W,
    classical_in_w,
    d_commutes_with_embed,
    dz_local,
    embed,
    local_inverse,
    pole_data,
    shift_rule_residual,
    star_commutes_with_embed,
    verify_w_relations,
    verify_wpatch,
    w_derivative,
    w_generators,
    xi_in_w,
    z_local,
    zb_local,
)
from app.zalgebra import z, zb
from tests.conftest import functions


def test_w_inverts_z():
    w = w_generators().w
    assert w * z_local() == 1
    assert z_local() * w == 1
    assert local_inverse(w) == z_local()


def test_local_inverse_rejects_sums_and_forms():
    with pytest.raises(PatchError):
        local_inverse(z_local() + 1)
    with pytest.raises(PatchError):
        local_inverse(dz_local())


def test_embed_generators():
    assert embed(z()) == z_local()
    assert embed(zb()) == zb_local()
    assert embed(dz()) * embed(dzb()) == embed(dz() * dzb())


@given(functions(max_degree=2), functions(max_degree=2))
def test_embed_is_multiplicative(f, g):
    assert embed(f * g) == embed(f) * embed(g)


@given(functions(max_degree=2))
def test_embed_commutes_with_d_and_star(f):
    assert d_commutes_with_embed(f) == 0
    assert star_commutes_with_embed(f) == 0


def test_shift_rule():
    f = 1 / ((RHO - Q_R**2) * RHO)
    for b in (-2, -1, 1, 2):
        assert shift_rule_residual(f, b) == 0


def test_pole_data():
    assert pole_data(1 / RHO**2) == [{"at": "0", "order": 2}]
    assert pole_data(1 / (RHO - Q_R**2)) == [{"at": "q^2", "order": 1}]
    assert pole_data(RHO**2 + 1) == []


def test_w_derivative():
    w = w_generators().w
    assert w_derivative(w) == 1
    assert w_derivative(w * w) == w * (1 + Q_R**2)
    with pytest.raises(PatchError):
        w_derivative(z_local())


def test_w_relations():
    report = verify_w_relations(3)
    assert all(row["status"] == "pass" for row in report)


def test_classical_image_of_z():
    assert classical_in_w(embed(z())) == {(0, 0): 1 / W}


def test_xi_is_singular_at_the_north_pole():
    result = xi_in_w()
    assert result["factor"] == "q"
    assert result["Xi"]["singular"]
    assert not result["dXi"]["singular"]


def test_verify_wpatch_rows():
    rows = verify_wpatch()
    assert all(row["status"] == "pass" for row in rows), [row for row in rows if row["status"] != "pass"]
