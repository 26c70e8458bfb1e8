import pytest
from hypothesis import given, strategies as st
from sympy import Rational

from app.errors import DivisionByZero, PoleAtLimit
from app.scalar import LAM, ONE, Q, S, arith, classical_limit, invert_s, qint, qint_bar, qpow, render, spow


def test_q_is_square_of_s():
    assert Q == S**2
    assert qpow(1) == spow(2)
    assert qpow(-3) * qpow(3) == ONE


def test_lambda():
    assert LAM == qpow(1) - qpow(-1)


def test_qint_small_values():
    assert qint(0) == 0
    assert qint(1) == 1
    assert qint(3) == 1 + qpow(2) + qpow(4)


@given(st.integers(1, 8))
def test_qint_closed_form(n):
    assert qint(n) * (qpow(2) - 1) == qpow(2 * n) - 1


@given(st.integers(1, 8))
def test_qint_negative(n):
    assert qint(-n) == -qpow(-2 * n) * qint(n)


@given(st.integers(1, 8))
def test_qint_bar_is_inverted_qint(n):
    assert qint_bar(n) == invert_s(qint(n))
    assert qint_bar(n) * qpow(2 * n - 2) == qint(n)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        arith(ONE, 0, "div")


def test_arith_ops():
    assert arith(Q, 2, "add") == Q + 2
    assert arith(Q, Q, "div") == 1


@given(st.integers(0, 10))
def test_classical_limit_of_qint(n):
    assert classical_limit(qint(n)) == n


def test_classical_limit_with_pole_order():
    assert classical_limit(LAM, 1) == 1
    assert classical_limit(LAM * LAM, 2) == 1
    assert classical_limit(LAM, 0) == 0
    assert classical_limit(Rational(1, 2)) == Rational(1, 2)


def test_classical_limit_pole():
    with pytest.raises(PoleAtLimit):
        classical_limit(ONE, 1)
    with pytest.raises(PoleAtLimit):
        classical_limit(ONE / LAM)


def test_render():
    assert render(qpow(2)) == "q^2"
    assert render(spow(1)) == "s"
    assert render(spow(-1)) == "1/s"
    assert render(LAM) == "(q^2 - 1)/q"
    assert render(Q + 1) == "q + 1"
    assert render(-Q) == "-q"
    assert render(ONE / qint(3)) == "1/(q^4 + q^2 + 1)"
    assert render(0) == "0"
