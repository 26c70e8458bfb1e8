"""
Differential Calculus - forms, derivatives and the one-form Xi on the sphere

Forms are stored coefficient-left on the basis {1, dz, dzb, dz dzb}. A
function passes a one-form as dz g = tau(g) dz with tau(rhoi^m zb^a z^b) =
q^{2(b-a)}; two-forms use tau^2. Derivatives are sigma-derivations:
del g = (del|>g) + sigma(g) del with sigma = tau^-1, likewise for delb.
"""

from __future__ import annotations
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, NamedTuple, Tuple

from app.combination import Combination, power
from app.errors import VerificationFailure
from app.rewriting import RewriteSystem, Word, add_term, lincomb
from app.scalar import LAM, ONE, Scalar, ScalarLike, qint, qint_bar, qpow, render
from app.zalgebra import (
    SPHERE_RULES,
    UNIT,
    FuncElement,
    FuncMonomial,
    charge_scale,
    rho_power,
    rhoi,
    star_func,
    bar_swap,
    word_key,
    z,
    zb,
)

FORM_LETTERS = ("dz", "dzb")


class FormKey(NamedTuple):
    mono: FuncMonomial
    eps: int
    epsb: int

    @property
    def grade(self) -> int:
        return self.eps + self.epsb


def wedge_basis(w1: Tuple[int, int], w2: Tuple[int, int]):
    """Product of basis forms as (eps, epsb, coeff) or None"""
    e1, b1 = w1
    e2, b2 = w2
    if e1 + e2 > 1 or b1 + b2 > 1:
        return None
    if b1 and e2:
        return 1, 1, -qpow(2)
    return e1 + e2, b1 + b2, ONE


class FormElement(Combination):
    """Forms with function coefficients on the left"""

    unit_key = FormKey(UNIT, 0, 0)

    @classmethod
    def lift(cls, other):
        if isinstance(other, FuncElement):
            return cls._raw({FormKey(k, 0, 0): c for k, c in other.terms.items()})
        return super().lift(other)

    def _product(self, other: "FormElement") -> "FormElement":
        out: Dict[FormKey, Scalar] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                wedge = wedge_basis((k1.eps, k1.epsb), (k2.eps, k2.epsb))
                if wedge is None:
                    continue
                eps, epsb, sign = wedge
                g = FuncElement._raw({k2.mono: c2 * qpow(2 * k1.grade * k2.mono.charge)})
                for mono, c in (FuncElement._raw({k1.mono: c1}) * g).terms.items():
                    add_term(out, FormKey(mono, eps, epsb), c * sign)
        return FormElement._raw(out)

    def part(self, eps: int, epsb: int) -> FuncElement:
        """Function coefficient of one basis form"""
        return FuncElement._raw({k.mono: c for k, c in self.terms.items() if (k.eps, k.epsb) == (eps, epsb)})

    def grades(self) -> set:
        return {k.grade for k in self.terms}

    def factors(self, key: FormKey) -> List[str]:
        return (
            power("rhoi", key.mono.m)
            + power("zb", key.mono.a)
            + power("z", key.mono.b)
            + power("dz", key.eps)
            + power("dzb", key.epsb)
        )

    def to_json(self) -> dict:
        grades = self.grades()
        return {
            "grade": grades.pop() if len(grades) == 1 else None,
            "terms": [
                {"coeff": render(c), "m": k.mono.m, "a": k.mono.a, "b": k.mono.b, "eps": k.eps, "epsbar": k.epsb}
                for k, c in self.sorted_items()
            ],
        }


def form(f: FuncElement, eps: int = 0, epsb: int = 0) -> FormElement:
    return FormElement._raw({FormKey(k, eps, epsb): c for k, c in f.terms.items()})


def dz() -> FormElement:
    return FormElement({FormKey(UNIT, 1, 0): ONE})


def dzb() -> FormElement:
    return FormElement({FormKey(UNIT, 0, 1): ONE})


def tau(f: FuncElement, grade: int = 1) -> FuncElement:
    return charge_scale(f, grade)


def sigma(f: FuncElement) -> FuncElement:
    return charge_scale(f, -1)


# Reference rewrite system for forms

_FORM_PAIRS = dict(SPHERE_RULES.pair_rules)
for _d in FORM_LETTERS:
    _FORM_PAIRS[(_d, "z")] = lincomb((qpow(2), ("z", _d)))
    _FORM_PAIRS[(_d, "zb")] = lincomb((qpow(-2), ("zb", _d)))
    _FORM_PAIRS[(_d, "rhoi")] = lincomb((1, ("rhoi", _d)))
    _FORM_PAIRS[(_d, _d)] = {}
_FORM_PAIRS[("dzb", "dz")] = lincomb((-qpow(2), ("dz", "dzb")))

FORM_RULES = RewriteSystem(_FORM_PAIRS, SPHERE_RULES.word_rules)


def form_word_key(word: Word) -> FormKey:
    eps = int("dz" in word)
    epsb = int("dzb" in word)
    body = word[: len(word) - eps - epsb]
    if word[len(body) :] != ("dz",) * eps + ("dzb",) * epsb:
        raise ValueError(f"word {word} is not in normal form")
    return FormKey(word_key(body), eps, epsb)


def normalize_form(comb: Mapping[Word, ScalarLike], strategy: str = "leftmost") -> FormElement:
    reduced = FORM_RULES.normalize(comb, strategy)
    return FormElement({form_word_key(w): c for w, c in reduced.items()})


# Derivatives


class DiffKey(NamedTuple):
    mono: FuncMonomial
    c: int
    d: int


@lru_cache(maxsize=None)
def _derive_mono(mono: FuncMonomial, bar: bool) -> FuncElement:
    """del|>mono (bar=False) or delb|>mono, by peeling the leftmost letter"""
    m, a, b = mono
    if mono == UNIT:
        return FuncElement.zero()
    if m:
        rest = FuncMonomial(m - 1, a, b)
    elif a:
        rest = FuncMonomial(0, a - 1, b)
    else:
        rest = FuncMonomial(0, 0, b - 1)
    r = FuncElement._raw({rest: ONE})
    dr = _derive_mono(rest, bar)

    if not bar:
        if m:
            return rhoi() * dr - zb() * rho_power(-2) * r * qpow(4)
        if a:
            return zb() * dr * qpow(2)
        return r + z() * dr * qpow(-2)
    if m:
        return rhoi() * dr - z() * rho_power(-2) * r * qpow(-2)
    if a:
        return r + zb() * dr * qpow(2)
    return z() * dr * qpow(-2)


def derive(f: FuncElement, bar: bool = False) -> FuncElement:
    out: Dict[FuncMonomial, Scalar] = {}
    for mono, coeff in f.terms.items():
        for key, c in _derive_mono(mono, bar).terms.items():
            add_term(out, key, coeff * c)
    return FuncElement._raw(out)


@lru_cache(maxsize=None)
def _act_mono(mono: FuncMonomial, c: int, d: int) -> FuncElement:
    result = FuncElement._raw({mono: ONE})
    for _ in range(d):
        result = derive(result, bar=True)
    for _ in range(c):
        result = derive(result)
    return result


class DiffOp(Combination):
    """sum h * del^c * delb^d with h a canonical monomial"""

    unit_key = DiffKey(UNIT, 0, 0)

    @classmethod
    def lift(cls, other):
        if isinstance(other, FuncElement):
            return cls._raw({DiffKey(k, 0, 0): c for k, c in other.terms.items()})
        return super().lift(other)

    def _product(self, other: "DiffOp") -> "DiffOp":
        out = DiffOp.zero()
        for key, coeff in self.terms.items():
            y = other
            for _ in range(key.d):
                y = _left_delb(y)
            for _ in range(key.c):
                y = _left_del(y)
            out = out + _left_func(FuncElement._raw({key.mono: coeff}), y)
        return out

    def coefficient(self, c: int, d: int) -> FuncElement:
        return FuncElement._raw({k.mono: v for k, v in self.terms.items() if (k.c, k.d) == (c, d)})

    def order(self) -> int:
        return max((k.c + k.d for k in self.terms), default=0)

    def factors(self, key: DiffKey) -> List[str]:
        return (
            power("rhoi", key.mono.m)
            + power("zb", key.mono.a)
            + power("z", key.mono.b)
            + power("del", key.c)
            + power("delb", key.d)
        )

    def to_json(self) -> List[dict]:
        return [
            {"coeff": render(v), "m": k.mono.m, "a": k.mono.a, "b": k.mono.b, "del": k.c, "delb": k.d}
            for k, v in self.sorted_items()
        ]


def _place(f: FuncElement, c: int, d: int, scale: Scalar = ONE) -> Iterable[Tuple[DiffKey, Scalar]]:
    for mono, v in f.terms.items():
        yield DiffKey(mono, c, d), v * scale


def _left_func(g: FuncElement, y: DiffOp) -> DiffOp:
    pieces = []
    for key, v in y.terms.items():
        pieces.extend(_place(g * FuncElement._raw({key.mono: v}), key.c, key.d))
    return DiffOp.accumulate(pieces)


def _left_del(y: DiffOp) -> DiffOp:
    pieces = []
    for key, v in y.terms.items():
        h = FuncElement._raw({key.mono: v})
        pieces.extend(_place(derive(h), key.c, key.d))
        pieces.extend(_place(sigma(h), key.c + 1, key.d))
    return DiffOp.accumulate(pieces)


def _left_delb(y: DiffOp) -> DiffOp:
    # delb del^c = q^{2c} del^c delb
    pieces = []
    for key, v in y.terms.items():
        h = FuncElement._raw({key.mono: v})
        pieces.extend(_place(derive(h, bar=True), key.c, key.d))
        pieces.extend(_place(sigma(h), key.c, key.d + 1, qpow(2 * key.c)))
    return DiffOp.accumulate(pieces)


def del_op() -> DiffOp:
    return DiffOp({DiffKey(UNIT, 1, 0): ONE})


def delb_op() -> DiffOp:
    return DiffOp({DiffKey(UNIT, 0, 1): ONE})


def apply_diffop(op: DiffOp, f: FuncElement) -> FuncElement:
    """Action on functions: derivative generators moved right and killed on 1"""
    out: Dict[FuncMonomial, Scalar] = {}
    for key, v in op.terms.items():
        h = FuncElement._raw({key.mono: v})
        for mono, coeff in f.terms.items():
            acted = _act_mono(mono, key.c, key.d)
            if acted:
                for k2, c2 in (h * acted).terms.items():
                    add_term(out, k2, coeff * c2)
    return FuncElement._raw(out)


def diffop_bar_swap(op: DiffOp) -> DiffOp:
    """del <-> delb together with the function-algebra swap"""
    out = DiffOp.zero()
    for key, v in op.terms.items():
        h = bar_swap(FuncElement._raw({key.mono: v}))
        out = out + DiffOp.lift(h) * delb_op() ** key.c * del_op() ** key.d
    return out


# Exterior derivative and its split


def _d_parts(omega: FormElement, holo: bool, antiholo: bool) -> FormElement:
    out = FormElement.zero()
    for eps, epsb in ((0, 0), (1, 0), (0, 1)):
        f = omega.part(eps, epsb)
        if not f:
            continue
        if holo and not eps:
            g = tau(derive(f))
            out = out + (form(g, 1, 0) if not epsb else form(g, 1, 1))
        if antiholo and not epsb:
            g = tau(derive(f, bar=True))
            out = out + (form(g, 0, 1) if not eps else form(g, 1, 1) * (-qpow(2)))
    return out


def exterior_d(omega) -> FormElement:
    """d = dz del + dzb delb on coefficients, graded Leibniz, d(dz) = d(dzb) = 0"""
    return _d_parts(FormElement.lift(omega), True, True)


def delta(omega) -> FormElement:
    return _d_parts(FormElement.lift(omega), True, False)


def delta_bar(omega) -> FormElement:
    return _d_parts(FormElement.lift(omega), False, True)


def delta_split(omega) -> Tuple[FormElement, FormElement]:
    return delta(omega), delta_bar(omega)


# Involutions


def star_form(omega: FormElement) -> FormElement:
    """(f omega)* = omega* f* with dz* = dzb"""
    out = FormElement.zero()
    for eps, epsb in ((0, 0), (1, 0), (0, 1), (1, 1)):
        f = omega.part(eps, epsb)
        if f:
            out = out + form(tau(star_func(f), eps + epsb), epsb, eps)
    return out


def starred_generators(variant: str) -> Tuple[DiffOp, DiffOp]:
    if variant == "sphere":
        del_star = delb_op() * (-qpow(-2)) + DiffOp.lift(z() * rhoi()) * (1 + qpow(-2))
        delb_star = del_op() * (-qpow(2)) + DiffOp.lift(rhoi() * zb()) * (1 + qpow(2))
    elif variant == "plane":
        del_star = delb_op() * (-qpow(2))
        delb_star = del_op() * (-qpow(-2))
    else:
        raise ValueError(f"unknown star variant '{variant}'")
    return del_star, delb_star


def star_diffop(op: DiffOp, variant: str = "sphere") -> DiffOp:
    del_star, delb_star = starred_generators(variant)
    out = DiffOp.zero()
    for key, v in op.terms.items():
        term = DiffOp.lift(star_func(FuncElement._raw({key.mono: v})))
        term = del_star**key.c * term
        term = delb_star**key.d * term
        out = out + term
    return out


def star_calc(x, variant: str = "sphere"):
    if isinstance(x, DiffOp):
        return star_diffop(x, variant)
    if isinstance(x, FuncElement):
        return star_func(x)
    return star_form(FormElement.lift(x))


def second_symmetry(op: DiffOp) -> DiffOp:
    """Composite of the plane and the sphere involution: an algebra automorphism"""
    return star_diffop(star_diffop(op, "plane"), "sphere")


# Gauge-transformed derivatives


def gauge_closed_form(n: int) -> Tuple[DiffOp, DiffOp]:
    d_n = del_op() * qpow(4 * n) - DiffOp.lift(rhoi() * zb()) * (qpow(2) * qint(2 * n))
    db_n = delb_op() * qpow(-4 * n) - DiffOp.lift(z() * rhoi()) * (qpow(-2) * qint_bar(2 * n))
    return d_n, db_n


@lru_cache(maxsize=None)
def gauge_derivative(n: int) -> Tuple[DiffOp, DiffOp]:
    """
    del^(n) = q^{4n} rho^{2n} del rho^{-2n} and its barred partner.

    Raises:
        VerificationFailure: if the closed form disagrees with the conjugated operator
    """
    if n < 0:
        raise ValueError("gauge index must be nonnegative")
    d_n, db_n = gauge_closed_form(n)
    up, down = DiffOp.lift(rho_power(2 * n)), DiffOp.lift(rho_power(-2 * n))
    conjugated = (up * del_op() * down * qpow(4 * n), up * delb_op() * down * qpow(-4 * n))
    for name, closed, conj in (("del^(n)", d_n, conjugated[0]), ("delb^(n)", db_n, conjugated[1])):
        residual = closed - conj
        if residual:
            raise VerificationFailure(f"{name} at n={n}", residual.render())
    return d_n, db_n


# The one-form Xi


class XiForms(NamedTuple):
    xi: FormElement
    xi_star: FormElement
    Xi: FormElement
    dXi: FormElement
    Xi2: FormElement


def xi_closed_forms() -> Dict[str, FormElement]:
    area = dzb() * rho_power(-2) * dz()
    return {"dXi": area * (2 * qpow(1)), "Xi2": area * (qpow(1) * LAM)}


@lru_cache(maxsize=1)
def xi_forms() -> XiForms:
    """
    xi = q dz rhoi zb, Xi = xi - xi*, with dXi and Xi^2.

    Raises:
        VerificationFailure: if dXi or Xi^2 disagree with their closed forms
    """
    xi = dz() * (rhoi() * zb()) * qpow(1)
    xi_star = star_form(xi)
    big_xi = xi - xi_star
    d_xi = exterior_d(big_xi)
    xi_sq = big_xi * big_xi
    closed = xi_closed_forms()
    for name, value in (("dXi", d_xi), ("Xi2", xi_sq)):
        residual = value - closed[name]
        if residual:
            raise VerificationFailure(f"{name} closed form", residual.render())
    return XiForms(xi, xi_star, big_xi, d_xi, xi_sq)


def graded_commutator(x: FormElement, y: FormElement) -> FormElement:
    """x y - (-1)^{|x||y|} y x for homogeneous x, y"""
    gx, gy = max(x.grades(), default=0), max(y.grades(), default=0)
    sign = -1 if gx % 2 and gy % 2 else 1
    return x * y - y * x * sign
