"""
Scalar Field - exact arithmetic in Q(s) with s = q^(1/2)

Every quantum coefficient lives here: q = s^2, lambda = q - 1/q and the
q-integers. Elements are sympy FracElements, always stored reduced.
"""

from __future__ import annotations
from functools import lru_cache
from typing import Union

from sympy import QQ, Rational
from sympy.polys.fields import FracElement, field

from app.errors import DivisionByZero, PoleAtLimit

K, S = field("s", QQ)
Scalar = FracElement
ScalarLike = Union[FracElement, int, Rational]

ZERO = K.zero
ONE = K.one
Q = S**2
LAM = Q - Q**-1

_X = K.ring.gens[0]


def to_scalar(value: ScalarLike) -> Scalar:
    if isinstance(value, FracElement) and value.field == K:
        return value
    return K(value)


def qpow(n: int) -> Scalar:
    """q^n (n may be negative)"""
    return Q**n


def spow(n: int) -> Scalar:
    """q^(n/2)"""
    return S**n


def arith(a: ScalarLike, b: ScalarLike, op: str) -> Scalar:
    a, b = to_scalar(a), to_scalar(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivisionByZero("division by the zero scalar")
        return a / b
    raise ValueError(f"unknown scalar operation '{op}'")


@lru_cache(maxsize=None)
def qint(n: int) -> Scalar:
    """[n]_q = (q^{2n} - 1)/(q^2 - 1), kept as the polynomial 1 + q^2 + ... + q^{2n-2}"""
    if n < 0:
        return -(Q ** (2 * n)) * qint(-n)
    return sum((Q ** (2 * j) for j in range(n)), ZERO)


@lru_cache(maxsize=None)
def qint_bar(n: int) -> Scalar:
    """[n]_{1/q}"""
    return invert_s(qint(n))


def _flip(poly) -> Scalar:
    return sum((K(coeff) * S ** (-monom[0]) for monom, coeff in poly.terms()), ZERO)


@lru_cache(maxsize=4096)
def invert_s(c: Scalar) -> Scalar:
    """Substitute s -> 1/s"""
    return _flip(c.numer) / _flip(c.denom)


def _order_at_one(poly):
    order = 0
    while sum(poly.coeffs()) == 0:
        poly = poly.exquo(_X - 1)
        order += 1
    return order, sum(poly.coeffs())


def classical_limit(c: ScalarLike, pole_order: int = 0) -> Rational:
    """
    lim_{s -> 1} c / (q^2 - 1)^pole_order, computed exactly.

    q^2 - 1 = (s - 1)(s + 1)(s^2 + 1) and the cofactor is 4 at s = 1, so
    only the multiplicity of (s - 1) in numerator and denominator matters.

    Raises:
        PoleAtLimit: if the quotient blows up at s = 1
    """
    c = to_scalar(c)
    if not c:
        return Rational(0)
    num_order, num_value = _order_at_one(c.numer)
    den_order, den_value = _order_at_one(c.denom)
    excess = num_order - den_order - pole_order
    if excess < 0:
        raise PoleAtLimit(f"{render(c)} has no finite limit at q = 1 after dividing by (q^2-1)^{pole_order}")
    if excess > 0:
        return Rational(0)
    return QQ.to_sympy(num_value / (den_value * QQ(4) ** pole_order))


def _render_poly(poly, in_q: bool) -> str:
    pieces = []
    for monom, coeff in sorted(poly.terms(), key=lambda t: -t[0][0]):
        k = monom[0]
        power = k // 2 if in_q else k
        atom = "q" if in_q else "s"
        value = QQ.to_sympy(coeff)
        if power == 0:
            body = str(abs(value))
        else:
            var = atom if power == 1 else f"{atom}^{power}"
            body = var if abs(value) == 1 else f"{abs(value)}*{var}"
        pieces.append(("-" if value < 0 else "+", body))
    if not pieces:
        return "0"
    sign, body = pieces[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def render(c: ScalarLike) -> str:
    """Reduced fraction in q when every exponent is even, otherwise in s"""
    c = to_scalar(c)
    exponents = [m[0] for m in c.numer.monoms()] + [m[0] for m in c.denom.monoms()]
    in_q = all(e % 2 == 0 for e in exponents)
    num = _render_poly(c.numer, in_q)
    if c.denom == 1:
        return num
    den = _render_poly(c.denom, in_q)
    if len(c.numer.terms()) > 1:
        num = f"({num})"
    if len(c.denom.terms()) > 1 or "*" in den:
        den = f"({den})"
    return f"{num}/{den}"
