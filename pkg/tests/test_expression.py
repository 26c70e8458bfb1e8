import pytest
from hypothesis import given, strategies as st

from app.calculus import del_op
from app.errors import DivisionByZero, ParseError, PatchError, PodlesError
from app.expression import Atom, BinOp, Neg, Num, Pow, QInt, evaluate, kind, parse, render_value, to_json, to_source, uses_patch
from app.scalar import qint, qpow
from app.zalgebra import rho_power, z, zb

SAMPLES = [
    "z*zb - q^-2*zb*z",
    "-(z + 1)*rhoi^2",
    "qint(3)*dz*z",
    "del*z - 1",
    "(zb*z)^2/q",
    "2 - -z",
    "lambda*s^-3*Zp*H",
]


def test_parse_structure():
    assert parse("z*zb") == BinOp("*", Atom("z"), Atom("zb"))
    assert parse("rhoi^-2") == Pow(Atom("rhoi"), -2)
    assert parse("-qint(-1)") == Neg(QInt(-1))
    assert parse("1 + 2*3") == BinOp("+", Num(1), BinOp("*", Num(2), Num(3)))


def test_positions_are_ignored_in_equality():
    assert parse(" z") == parse("z")
    assert parse(" z").position == 1


@pytest.mark.parametrize(
    "text, position",
    [("z*)", 2), ("z $", 2), ("foo + z", 0), ("z^q", 2), ("(z", 2), ("qint(z)", 5)],
)
def test_parse_errors_carry_offset(text, position):
    with pytest.raises(ParseError) as excinfo:
        parse(text)
    assert excinfo.value.position == position
    assert excinfo.value.exit_code == 1


@given(st.sampled_from(SAMPLES))
def test_printer_round_trip(text):
    node = parse(text)
    assert parse(to_source(node)) == node


def test_rendered_values_reparse():
    value = evaluate("(z + zb)^2")
    assert evaluate(render_value(value)) == value


def test_evaluate_relation():
    assert evaluate("z*zb - q^-2*zb*z") == qpow(-2) - 1
    assert kind(evaluate("z*zb")) == "Func"


def test_rho_powers():
    assert evaluate("rhoi^2") == rho_power(-2)
    assert evaluate("rhoi^-1") == rho_power(1)


def test_scalars():
    assert evaluate("qint(3)") == qint(3)
    assert kind(evaluate("q^-1 + s^2")) == "Scalar"
    assert to_json(evaluate("q"))["value"] == "q"
    with pytest.raises(DivisionByZero):
        evaluate("0^-1")
    with pytest.raises(DivisionByZero):
        evaluate("z/(q - q)")


def test_scalar_first_arithmetic():
    assert evaluate("2 - z") == 2 - z()
    assert evaluate("q*zb") == zb() * qpow(1)
    assert evaluate("z/q") == z() * qpow(-1)


def test_kinds():
    assert kind(evaluate("dz*z")) == "Form"
    assert kind(evaluate("del*z")) == "DiffOp"
    assert kind(evaluate("Zp*z")) == "VectorOp"
    assert evaluate("del") == del_op()
    assert to_json(evaluate("dz"))["kind"] == "Form"


def test_undefined_operations():
    with pytest.raises(PodlesError):
        evaluate("z/zb")
    with pytest.raises(PodlesError):
        evaluate("z^-1")
    with pytest.raises(PodlesError):
        evaluate("dz*del")


def test_patch_atoms():
    with pytest.raises(ParseError):
        evaluate("w*z")
    assert evaluate("w*z", patch=True) == 1
    assert kind(evaluate("w", patch=True)) == "Local"
    assert evaluate("z^-1*z", patch=True) == 1
    with pytest.raises(PatchError):
        evaluate("del", patch=True)
    assert uses_patch(parse("1 + wb^2"))
    assert not uses_patch(parse("z*zb"))
