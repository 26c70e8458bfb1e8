import pytest
from hypothesis import given, strategies as st

from app.calculus import DiffOp, apply_diffop, del_op, dz, dzb, exterior_d
from app.errors import SingularDiagonal
from app.scalar import ONE, qint_bar, qpow, spow
from app.vfields import (
    GENERATORS,
    VectorOp,
    act,
    act_func,
    bcd_inverses,
    build_bcd,
    check_infinitesimal_covariance,
    check_pseudodiff_realizations,
    h,
    inverse_residuals,
    invert_filtered,
    multiply_words,
    normalize_vf,
    star_words,
    vf_act,
    vf_word_key,
    zm,
    zp,
)
from app.zalgebra import rho_power, z, zb
from tests.conftest import functions

RELATIONS = [
    {("H", "Zp"): 1, ("Zp", "H"): -qpow(4), ("Zp",): -(1 + qpow(2))},
    {("Zp", "Zm"): qpow(1), ("Zm", "Zp"): -qpow(-1), ("H",): -1},
    {("Zp", "z"): 1, ("z", "Zp"): -qpow(2), ("z", "z"): -spow(1)},
    {("Zp", "zb"): 1, ("zb", "Zp"): -qpow(-2), (): -spow(-3)},
    {("Zp", "dzb"): 1, ("dzb", "Zp"): -qpow(-2)},
    {("H", "dz"): 1, ("dz", "H"): -qpow(4), ("dz",): -(1 + qpow(2))},
    {("Zm", "dz"): 1, ("dz", "Zm"): -qpow(2)},
]


@pytest.mark.parametrize("relation", RELATIONS)
def test_smash_product_relations(relation):
    assert normalize_vf(relation) == 0
    assert normalize_vf(star_words(relation)) == 0


def test_pbw_reordering():
    assert zm() * zp() == zp() * zm() * qpow(2) - h() * qpow(1)
    assert normalize_vf({("Zm", "Zp"): ONE}, "rightmost") == zm() * zp()


def test_generator_actions():
    assert vf_act(zp(), zb()) == spow(-3)
    assert vf_act(zp(), z()) == z() * z() * spow(1)
    assert vf_act(h(), zb()) == zb() * (-qpow(-4) * (1 + qpow(2)))
    assert vf_act(zm(), z()) == -spow(1)
    assert vf_act(zm(), zb()) == zb() * zb() * (-spow(-3))
    assert vf_act(h(), z()) == z() * (1 + qpow(2))
    assert act_func("H", z()) == z() * (1 + qpow(2))
    assert vf_act(zp(), ONE) == 0


def test_zp_past_rho_powers():
    assert zp() * rho_power(1) == rho_power(1) * zp() + VectorOp.lift(z() * rho_power(1) * spow(1))
    for l in (1, 2):
        shifted = VectorOp.lift(z() * rho_power(-l) * (spow(-3) * qint_bar(l)))
        assert zp() * rho_power(-l) == rho_power(-l) * zp() - shifted


@given(functions(max_degree=2), st.sampled_from(GENERATORS))
def test_actions_commute_with_d(f, gen):
    assert act(gen, exterior_d(f)) == exterior_d(act_func(gen, f))


@pytest.mark.parametrize(
    "relation",
    [
        {("z", "zb"): 1, ("zb", "z"): -qpow(-2), (): 1 - qpow(-2)},
        {("z", "dz"): 1, ("dz", "z"): -qpow(-2)},
        {("dz", "dzb"): 1, ("dzb", "dz"): qpow(-2)},
    ],
)
def test_infinitesimal_covariance(relation):
    report = check_infinitesimal_covariance(relation)
    assert [row["generator"] for row in report] == list(GENERATORS)
    assert all(row["status"] == "pass" for row in report)


def test_star_words():
    assert star_words({("Zp", "z"): 2}) == {("zb", "Zm"): 2}
    assert star_words({("dz", "H"): ONE}) == {("H", "dzb"): ONE}


def test_bcd_on_zb():
    b_op, c_op, d_op = build_bcd()
    assert apply_diffop(b_op, zb()) == zb() * qpow(2)
    assert apply_diffop(c_op, zb()) == zb()
    b_inv, _, _ = bcd_inverses(2)
    assert b_inv.apply(zb()) == zb() * qpow(-2)


@given(functions(max_terms=2, max_degree=1).filter(lambda f: all(k.m == 0 for k in f.terms)))
def test_inverse_table_inverts(f):
    b_op, _, _ = build_bcd()
    b_inv, _, _ = bcd_inverses(3)
    assert apply_diffop(b_op, b_inv.apply(f)) == f


def test_inverse_table_bounds():
    b_inv, _, _ = bcd_inverses(1)
    with pytest.raises(ValueError):
        b_inv.apply(z() * z())


def test_singular_diagonal():
    with pytest.raises(SingularDiagonal):
        invert_filtered(DiffOp.lift(z()) * del_op(), 1)


def test_pseudodiff_realizations():
    report = check_pseudodiff_realizations(5)
    assert report
    assert all(row["status"] == "pass" for row in report)


def test_bcd_inverses_to_degree_eight():
    residuals = list(inverse_residuals(8))
    assert {identity for identity, _, _ in residuals} == {"B B^-1 = id", "C C^-1 = id", "D D^-1 = id"}
    assert all(residual == 0 for _, _, residual in residuals)


@pytest.mark.parametrize(
    "word",
    [
        ("Zm", "H", "Zp"),
        ("Zm", "z", "Zp", "zb"),
        ("H", "rhoi", "dz", "Zm", "zb"),
        ("Zp", "zb", "z", "rhoi", "Zm"),
        ("dzb", "Zm", "Zp", "z", "dz"),
    ],
)
def test_rewriting_strategies_agree(word):
    leftmost = normalize_vf({word: ONE})
    assert leftmost == normalize_vf({word: ONE}, "rightmost")
    assert leftmost == multiply_words({word: ONE})


def test_vf_word_key_rejects_unordered_words():
    assert vf_word_key(("z", "Zp", "H"))[1:] == (1, 1, 0)
    with pytest.raises(ValueError):
        vf_word_key(("Zm", "Zp"))
    with pytest.raises(ValueError):
        vf_word_key(("Zp", "z"))
