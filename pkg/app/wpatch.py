"""
North-Pole Patch - the localization with w = z^-1, wb = zb^-1

zb is eliminated through zb = (rho - 1) z^-1, so every element is a sum of
f(rho) z^b dz^eps dzb^epsb with f rational in rho over Q(s) and b any
integer. z^b f(rho) = f(q^-2b rho) z^b; poles of f sit at rho = 0 and
rho = q^2j, a set the shift preserves.
"""

from __future__ import annotations
from functools import lru_cache
from typing import Any, Dict, List, NamedTuple, Tuple

import sympy
from sympy import QQ
from sympy.polys.fields import FracElement, field

from app.calculus import FormElement, dz as sphere_dz, dzb as sphere_dzb, exterior_d, wedge_basis, xi_forms
from app.checks import check_row, require
from app.combination import Combination, power
from app.errors import PatchError, PoleAtLimit
from app.rewriting import add_term
from app.scalar import K, Scalar, qint
from app.zalgebra import FuncElement, FuncMonomial, rhoi, star_func, z, zb

R, S_R, RHO = field("s,rho", QQ)
Q_R = S_R**2

W, WB = sympy.symbols("w wb")


def _lift_poly(poly):
    return R.ring({(e, 0): v for (e,), v in poly.items()})


@lru_cache(maxsize=4096)
def _from_scalar(c: Scalar) -> FracElement:
    return R(_lift_poly(c.numer)) / R(_lift_poly(c.denom))


def to_local(value: Any) -> FracElement:
    """Coerce ints, rationals and Q(s) scalars into Q(s, rho)"""
    if isinstance(value, FracElement):
        if value.field == R:
            return value
        if value.field == K:
            return _from_scalar(value)
        raise TypeError(f"cannot coerce an element of {value.field} into Q(s, rho)")
    return R(value)


_shift_cache: Dict[Tuple[FracElement, int], FracElement] = {}


def rho_shift(f: FracElement, k: int) -> FracElement:
    """f(q^k rho)"""
    if k == 0 or not f:
        return f
    cached = _shift_cache.get((f, k))
    if cached is not None:
        return cached
    num = {(a + 2 * k * r, r): v for (a, r), v in f.numer.items()}
    den = {(a + 2 * k * r, r): v for (a, r), v in f.denom.items()}
    low = min(a for a, _ in list(num) + list(den))
    num_p = R.ring({(a - low, r): v for (a, r), v in num.items()})
    den_p = R.ring({(a - low, r): v for (a, r), v in den.items()})
    result = R(num_p) / R(den_p)
    _shift_cache[(f, k)] = result
    return result


def render_local(f: FracElement) -> str:
    q = sympy.Symbol("q", positive=True)
    s, rho = R.symbols
    expr = f.as_expr().subs(s, sympy.sqrt(q))
    return sympy.sstr(sympy.factor(expr)).replace("**", "^")


class LocalKey(NamedTuple):
    b: int
    eps: int
    epsb: int

    @property
    def grade(self) -> int:
        return self.eps + self.epsb


class LocalElement(Combination):
    """sum f(rho) z^b dz^eps dzb^epsb with f in Q(s, rho)"""

    unit_key = LocalKey(0, 0, 0)

    def __init__(self, terms=None):
        clean: Dict[LocalKey, FracElement] = {}
        for key, coeff in (terms or {}).items():
            coeff = to_local(coeff)
            if coeff:
                clean[key] = coeff
        self.terms = clean

    @classmethod
    def lift(cls, other):
        if isinstance(other, (FuncElement, FormElement)):
            return embed(other)
        return super().lift(other)

    def scale(self, c):
        c = to_local(c)
        if not c:
            return type(self).zero()
        return type(self)._raw({k: v * c for k, v in self.terms.items()})

    def coeff(self, key: LocalKey) -> FracElement:
        return self.terms.get(key, R.zero)

    def _product(self, other: "LocalElement") -> "LocalElement":
        out: Dict[LocalKey, FracElement] = {}
        for k1, f in self.terms.items():
            for k2, g in other.terms.items():
                wedge = wedge_basis((k1.eps, k1.epsb), (k2.eps, k2.epsb))
                if wedge is None:
                    continue
                eps, epsb, sign = wedge
                c = f * rho_shift(g, -2 * k1.b) * Q_R ** (2 * k2.b * k1.grade) * to_local(sign)
                add_term(out, LocalKey(k1.b + k2.b, eps, epsb), c)
        return LocalElement._raw(out)

    def grades(self) -> set:
        return {k.grade for k in self.terms}

    def part(self, eps: int, epsb: int) -> "LocalElement":
        return LocalElement._raw({k: c for k, c in self.terms.items() if (k.eps, k.epsb) == (eps, epsb)})

    def factors(self, key: LocalKey) -> List[str]:
        return power("z", key.b) + power("dz", key.eps) + power("dzb", key.epsb)

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for key, f in self.sorted_items():
            body = " * ".join(self.factors(key))
            text = render_local(f)
            pieces.append(f"({text}) * {body}" if body else f"({text})")
        return " + ".join(pieces)

    def to_json(self) -> dict:
        return {
            "terms": [
                {"polepart": {"expr": render_local(f), "poles": pole_data(f)}, "b": k.b, "eps": k.eps, "epsbar": k.epsb}
                for k, f in self.sorted_items()
            ]
        }


def local(f: Any = 1, b: int = 0, eps: int = 0, epsb: int = 0) -> LocalElement:
    return LocalElement({LocalKey(b, eps, epsb): f})


def pole_data(f: FracElement) -> List[dict]:
    """Poles of f in rho as {at, order}; factors free of rho are ignored"""
    rho = R.ring.gens[1]
    poles = []
    _, factors = f.denom.factor_list()
    for factor, order in factors:
        degree = factor.degree(rho)
        if degree == 0:
            continue
        if degree > 1:
            raise PatchError(f"denominator factor {factor.as_expr()} is not linear in rho")
        expr = sympy.solve(factor.as_expr(), R.symbols[1])[0]
        poles.append({"at": _render_root(expr), "order": order})
    return sorted(poles, key=lambda p: p["at"])


def _render_root(expr) -> str:
    q = sympy.Symbol("q", positive=True)
    return sympy.sstr(sympy.simplify(expr.subs(R.symbols[0], sympy.sqrt(q)))).replace("**", "^")


# Generators and the embedding of the z-patch


def z_local() -> LocalElement:
    return local(1, 1)


def zinv_local() -> LocalElement:
    return local(1, -1)


def zb_local() -> LocalElement:
    """zb = (rho - 1) z^-1"""
    return local(RHO - 1, -1)


def dz_local() -> LocalElement:
    return local(1, 0, 1, 0)


def dzb_local() -> LocalElement:
    return local(1, 0, 0, 1)


@lru_cache(maxsize=None)
def _embed_mono(mono: FuncMonomial) -> LocalElement:
    m, a, b = mono
    return local(RHO ** (-m)) * zb_local() ** a * z_local() ** b


def embed(x) -> LocalElement:
    """Algebra map from the z-patch (functions or forms) into the localization"""
    if isinstance(x, LocalElement):
        return x
    if isinstance(x, FuncElement):
        x = FormElement.lift(x)
    if not isinstance(x, FormElement):
        return LocalElement.lift(x)
    out = LocalElement.zero()
    for key, c in x.terms.items():
        basis = local(1, 0, key.eps, key.epsb)
        out = out + _embed_mono(key.mono) * basis * c
    return out


class WGenerators(NamedTuple):
    w: LocalElement
    wb: LocalElement
    dw: LocalElement
    dwb: LocalElement


@lru_cache(maxsize=1)
def w_generators() -> WGenerators:
    w = zinv_local()
    wb = local(1 / (RHO / Q_R**2 - 1), 1)
    dw = local(-(Q_R**-2), -2, 1, 0)
    return WGenerators(w, wb, dw, local_d(wb))


def local_inverse(x: LocalElement) -> LocalElement:
    """
    Inverse of a single function term f(rho) z^b.

    Raises:
        PatchError: for sums, forms or zero
    """
    if len(x.terms) != 1:
        raise PatchError("only single terms f(rho) z^b are invertible in the patch")
    (key, f), = x.terms.items()
    if key.grade:
        raise PatchError("forms are not invertible")
    # (f z^b)^-1 = z^-b f^-1 = f^-1(q^2b rho) z^-b
    return LocalElement._raw({LocalKey(-key.b, 0, 0): rho_shift(1 / f, 2 * key.b)})


# Exterior derivative on the localization


def _d_plus(f: FracElement) -> FracElement:
    return (rho_shift(f, 2) - f) / ((Q_R**2 - 1) * RHO)


def _d_minus(f: FracElement) -> FracElement:
    return (rho_shift(f, -2) - f) / ((Q_R**-2 - 1) * RHO)


def d_rho(f: FracElement) -> LocalElement:
    """d f(rho) = (rho - 1) D+f z^-1 dz + q^2 D-f z dzb"""
    return LocalElement._raw(
        {
            k: v
            for k, v in (
                (LocalKey(-1, 1, 0), (RHO - 1) * _d_plus(f)),
                (LocalKey(1, 0, 1), Q_R**2 * _d_minus(f)),
            )
            if v
        }
    )


def local_d(x: LocalElement) -> LocalElement:
    """d with d(z^b) = [b]_q z^(b-1) dz, graded Leibniz and d(dz) = d(dzb) = 0"""
    out = LocalElement.zero()
    for key, f in x.terms.items():
        tail = local(1, 0, key.eps, key.epsb)
        out = out + d_rho(f) * local(1, key.b) * tail
        if key.b:
            out = out + local(f * to_local(qint(key.b)), key.b - 1, 1, 0) * tail
    return out


def w_derivative(x: LocalElement) -> LocalElement:
    """
    del_w with d = dw del_w on the w-subalgebra (constant coefficients, b <= 0).

    Raises:
        PatchError: if x is not a polynomial in w
    """
    for key, f in x.terms.items():
        if key.grade or key.b > 0 or f.numer.degree(R.ring.gens[1]) > 0 or f.denom.degree(R.ring.gens[1]) > 0:
            raise PatchError("del_w is defined on polynomials in w only")
    out: Dict[LocalKey, FracElement] = {}
    for key, a in local_d(x).terms.items():
        if key.epsb:
            raise PatchError("d of a polynomial in w has a dzb part")
        # dw g_k z^k = -q^(2k-2) g_k z^(k-2) dz
        k = key.b + 2
        add_term(out, LocalKey(k, 0, 0), a / (-(Q_R ** (2 * k - 2))))
    return LocalElement._raw(out)


# Involution


def star_local(x: LocalElement) -> LocalElement:
    """Sphere star transported: z* = zb, dz* = dzb, f(rho)* = f(rho) on real coefficients"""
    gens = w_generators()
    out = LocalElement.zero()
    for key, f in x.terms.items():
        z_part = zb_local() ** key.b if key.b >= 0 else gens.wb ** (-key.b)
        forms = dz_local() ** key.epsb * dzb_local() ** key.eps
        out = out + forms * z_part * local(f)
    return out


# Checks


def w_relation_residuals(n_max: int = 4) -> List[Tuple[str, LocalElement]]:
    w, wb, dw, dwb = w_generators()
    q2 = Q_R**2
    rows = [
        ("w wb = q^-2 wb w + (q^-2 - 1) w wb^2 w", w * wb - wb * w * q2**-1 - w * wb * wb * w * (q2**-1 - 1)),
        ("w dw = q^2 dw w", w * dw - dw * w * q2),
        ("dz w = q^-2 w dz", dz_local() * w - w * dz_local() * q2**-1),
        ("w * z = 1", w * z_local() - 1),
        ("wb * zb = 1", wb * zb_local() - 1),
        ("w* = wb", star_local(w) - wb),
        ("d(wb zb) = 0", local_d(wb * zb_local())),
    ]
    for n in range(n_max + 1):
        wn = w**n
        residual = w_derivative(w * wn) - wn - w * w_derivative(wn) * q2
        rows.append((f"del_w w^{n + 1} = w^{n} + q^2 w del_w w^{n}", residual))
    return rows


def verify_w_relations(n_max: int = 4) -> List[dict]:
    """
    Raises:
        VerificationFailure: naming the first relation that fails
    """
    report = []
    for identity, residual in w_relation_residuals(n_max):
        require(identity, residual)
        report.append(check_row(identity, "w-patch", residual))
    return report


def xi_w_residuals() -> List[Tuple[str, LocalElement]]:
    w, wb, dw, dwb = w_generators()
    forms = xi_forms()
    q = Q_R
    w_inv = local_inverse(w)
    wb_inv = local_inverse(wb)
    damp = local_inverse(1 + wb * w)
    return [
        ("xi = -q w^-1 dw (1 + wb w)^-1", embed(forms.xi) + w_inv * dw * damp * q),
        ("xi* = -q (1 + wb w)^-1 dwb wb^-1", embed(forms.xi_star) + damp * dwb * wb_inv * q),
    ]


def classical_coefficient(f: FracElement, pole_order: int = 0) -> sympy.Expr:
    """
    Limit at q = 1 of f / (q^2 - 1)^pole_order, as an expression in rho.

    Raises:
        PoleAtLimit: if the limit does not exist
    """
    if pole_order:
        f = f / (S_R**4 - 1) ** pole_order
    s = R.ring.gens[0]
    den = f.denom.evaluate(s, 1)
    if not den:
        raise PoleAtLimit(f"coefficient {f.as_expr()} has no finite classical limit")
    num = f.numer.evaluate(s, 1)
    return sympy.cancel(num.as_expr() / den.as_expr())


def classical_in_w(x: LocalElement, pole_order: int = 0) -> Dict[Tuple[int, int], sympy.Expr]:
    """Commutative image in w, wb: coefficients of dw^eps dwb^epsb"""
    rho = R.symbols[1]
    out: Dict[Tuple[int, int], sympy.Expr] = {}
    for key, f in x.terms.items():
        coeff = classical_coefficient(f, pole_order).subs(rho, 1 + 1 / (WB * W))
        # z = 1/w, dz = -dw/w^2, dzb = -dwb/wb^2
        coeff = coeff * W ** (-key.b) * (-1 / W**2) ** key.eps * (-1 / WB**2) ** key.epsb
        out[(key.eps, key.epsb)] = out.get((key.eps, key.epsb), 0) + coeff
    return {k: v for k, v in ((k, sympy.cancel(v)) for k, v in out.items()) if v != 0}


def north_pole_behaviour(coefficients: Dict[Tuple[int, int], sympy.Expr]) -> Dict[str, Any]:
    """Whether any coefficient is singular at w = wb = 0, and the finite values otherwise"""
    singular = False
    values = {}
    for key, expr in coefficients.items():
        num, den = sympy.fraction(sympy.cancel(expr))
        at_zero = den.subs({W: 0, WB: 0})
        if at_zero == 0:
            singular = True
        else:
            values[f"dw^{key[0]} dwb^{key[1]}"] = str(num.subs({W: 0, WB: 0}) / at_zero)
    return {"singular": singular, "values": values}


def xi_in_w() -> Dict[str, Any]:
    """
    Raises:
        VerificationFailure: if xi or xi* disagree with their w-forms
    """
    rows = []
    for identity, residual in xi_w_residuals():
        require(identity, residual)
        rows.append(check_row(identity, "xi near the north pole", residual))
    forms = xi_forms()
    d_xi = classical_in_w(embed(forms.dXi))
    # dw dwb = -dwb dw classically
    area_at_pole = -d_xi.get((1, 1), sympy.Integer(0)).subs({W: 0, WB: 0})
    return {
        "rows": rows,
        "factor": "q",
        "Xi": north_pole_behaviour(classical_in_w(embed(forms.Xi))),
        "dXi": {**north_pole_behaviour(d_xi), "dwb_dw_at_pole": str(area_at_pole)},
    }


def d_commutes_with_embed(x) -> LocalElement:
    return embed(exterior_d(x)) - local_d(embed(x))


def star_commutes_with_embed(x: FuncElement) -> LocalElement:
    return embed(star_func(x)) - star_local(embed(x))


def shift_rule_residual(f: FracElement, b: int) -> LocalElement:
    """z^b f(rho) - f(q^-2b rho) z^b"""
    return local(1, b) * local(f) - local(rho_shift(f, -2 * b), b)


def verify_wpatch() -> List[dict]:
    """Report rows for the w-patch suite; failures are reported, not raised"""
    rows = [check_row(identity, "w-patch", residual) for identity, residual in w_relation_residuals()]
    rows.extend(check_row(identity, "xi near the north pole", r) for identity, r in xi_w_residuals())
    for name, x in (("z", z()), ("zb", zb()), ("rhoi", rhoi()), ("zb z", zb() * z())):
        rows.append(check_row(f"embed(d {name}) = d embed({name})", "w-patch", d_commutes_with_embed(x)))
        rows.append(check_row(f"embed({name}*) = embed({name})*", "w-patch", star_commutes_with_embed(x)))
    rows.append(check_row("embed(dz) embed(dzb) = embed(dz dzb)", "w-patch", embed(sphere_dz()) * embed(sphere_dzb()) - embed(sphere_dz() * sphere_dzb())))
    for b in (-2, -1, 1, 2):
        f = 1 / ((RHO - Q_R**2) * RHO)
        rows.append(check_row(f"z^{b} f(rho) = f(q^{-2 * b} rho) z^{b}", "shift rule", shift_rule_residual(f, b)))
    return rows
