"""
Classical Limit - Poisson brackets as commutator limits and the north-pole numerics

At q = 1 functions commute and dz, dzb anticommute; the bracket of two
quantum elements is lim (x y -+ y x)/h with q^2 = e^h. Classical elements
are lifted back to the quantum algebra monomial by monomial, which is
enough because the bracket does not see O(h) corrections.
"""

from __future__ import annotations
import random
from functools import lru_cache
from typing import Any, Callable, Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
import sympy
from scipy import integrate

from app.calculus import FormElement, FormKey, exterior_d, graded_commutator, xi_forms
from app.checks import check_row
from app.combination import Combination, power
from app.errors import QuadratureNotConverged, VerificationFailure
from app.rewriting import add_term
from app.scalar import ONE, Scalar, classical_limit, to_scalar
from app.wpatch import W, WB, LocalElement, classical_in_w, embed, w_generators
from app.zalgebra import FuncElement, FuncMonomial, monomial, rhoi, z, zb

NUMERIC_RADII = (0.5, 0.1, 0.01)
NUMERIC_TOLERANCE = 1e-8
AREA_TOLERANCE = 1e-6


class PKey(NamedTuple):
    m: int
    a: int
    b: int
    eps: int
    epsb: int

    @property
    def grade(self) -> int:
        return self.eps + self.epsb

    @property
    def mono(self) -> FuncMonomial:
        return FuncMonomial(self.m, self.a, self.b)


@lru_cache(maxsize=None)
def _canon(m: int, a: int, b: int) -> Dict[FuncMonomial, Scalar]:
    """rhoi^m zb^a z^b with zb z = rho - 1 whenever m >= 1"""
    if m == 0 or a == 0 or b == 0:
        return {FuncMonomial(m, a, b): ONE}
    out: Dict[FuncMonomial, Scalar] = {}
    for key, c in _canon(m - 1, a - 1, b - 1).items():
        add_term(out, key, c)
    for key, c in _canon(m, a - 1, b - 1).items():
        add_term(out, key, -c)
    return out


class PoissonElement(Combination):
    """Commutative graded element with rational coefficients"""

    unit_key = PKey(0, 0, 0, 0, 0)

    def _product(self, other: "PoissonElement") -> "PoissonElement":
        out: Dict[PKey, Scalar] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                if k1.eps + k2.eps > 1 or k1.epsb + k2.epsb > 1:
                    continue
                sign = -1 if k1.epsb and k2.eps else 1
                for mono, c in _canon(k1.m + k2.m, k1.a + k2.a, k1.b + k2.b).items():
                    add_term(out, PKey(*mono, k1.eps + k2.eps, k1.epsb + k2.epsb), c1 * c2 * c * sign)
        return PoissonElement._raw(out)

    def grades(self) -> set:
        return {k.grade for k in self.terms}

    def parity(self) -> int:
        return max(self.grades(), default=0) % 2

    def factors(self, key: PKey) -> List[str]:
        return (
            power("rhoi", key.m) + power("zb", key.a) + power("z", key.b)
            + power("dz", key.eps) + power("dzb", key.epsb)
        )

    def to_json(self) -> List[dict]:
        return [
            {"coeff": str(classical_limit(c)), "m": k.m, "a": k.a, "b": k.b, "eps": k.eps, "epsbar": k.epsb}
            for k, c in self.sorted_items()
        ]


def p_z() -> PoissonElement:
    return PoissonElement({PKey(0, 0, 1, 0, 0): 1})


def p_zb() -> PoissonElement:
    return PoissonElement({PKey(0, 1, 0, 0, 0): 1})


def p_rho() -> PoissonElement:
    """rho = 1 + zb z"""
    return PoissonElement({PKey(0, 0, 0, 0, 0): 1, PKey(0, 1, 1, 0, 0): 1})


def p_rhoi() -> PoissonElement:
    return PoissonElement({PKey(1, 0, 0, 0, 0): 1})


def p_dz() -> PoissonElement:
    return PoissonElement({PKey(0, 0, 0, 1, 0): 1})


def p_dzb() -> PoissonElement:
    return PoissonElement({PKey(0, 0, 0, 0, 1): 1})


# Limits and brackets


def classical_limit_elem(x, pole_order: int = 0) -> PoissonElement:
    """
    Coefficient-wise limit at q = 1.

    Raises:
        PoleAtLimit: if a coefficient has no finite limit
    """
    x = FormElement.lift(x) if not isinstance(x, FormElement) else x
    out: Dict[PKey, Scalar] = {}
    for key, c in x.terms.items():
        value = classical_limit(c, pole_order)
        if value:
            add_term(out, PKey(*key.mono, key.eps, key.epsb), to_scalar(value))
    return PoissonElement._raw(out)


def lift_classical(x: PoissonElement) -> FormElement:
    """A quantum element with the same monomials; its O(h) ambiguity drops out of brackets"""
    return FormElement._raw({FormKey(k.mono, k.eps, k.epsb): c for k, c in x.terms.items()})


def _quantum(x) -> FormElement:
    if isinstance(x, PoissonElement):
        return lift_classical(x)
    if isinstance(x, FormElement):
        return x
    return FormElement.lift(x)


def poisson_bracket(x, y) -> PoissonElement:
    """
    (x, y) = lim (x y -+ y x)/h, the sign by parity.

    Raises:
        PoleAtLimit: if the graded commutator does not vanish at q = 1
    """
    return classical_limit_elem(graded_commutator(_quantum(x), _quantum(y)), pole_order=1)


def poisson_bracket_w(x: LocalElement, y: LocalElement) -> Dict[Tuple[int, int], sympy.Expr]:
    """
    Bracket computed in the localization and written in w, wb; keys are (eps, epsb) of dw, dwb.

    Raises:
        PoleAtLimit: if the graded commutator does not vanish at q = 1
    """
    gx, gy = max(x.grades(), default=0), max(y.grades(), default=0)
    sign = -1 if gx % 2 and gy % 2 else 1
    return classical_in_w(x * y - y * x * sign, pole_order=1)


def classical_product_w(x: Dict[Tuple[int, int], sympy.Expr], y: Dict[Tuple[int, int], sympy.Expr]) -> Dict[Tuple[int, int], sympy.Expr]:
    """Commutative product of w-expressions; dw and dwb anticommute"""
    out: Dict[Tuple[int, int], sympy.Expr] = {}
    for (e1, b1), u in x.items():
        for (e2, b2), v in y.items():
            if e1 + e2 > 1 or b1 + b2 > 1:
                continue
            sign = -1 if b1 and e2 else 1
            key = (e1 + e2, b1 + b2)
            out[key] = out.get(key, 0) + sign * u * v
    return {k: e for k, e in ((k, sympy.cancel(e)) for k, e in out.items()) if e != 0}


def _w_difference(x: Dict, y: Dict) -> Dict:
    keys = set(x) | set(y)
    diff = {k: sympy.cancel(x.get(k, 0) - y.get(k, 0)) for k in keys}
    return {k: e for k, e in diff.items() if e != 0}


# Classical exterior derivative


def _partials(mono: FuncMonomial) -> Tuple[PoissonElement, PoissonElement]:
    """(d/dz, d/dzb) of rhoi^m zb^a z^b with rho = 1 + zb z"""
    m, a, b = mono

    def term(mm: int, aa: int, bb: int, c: int) -> Dict[PKey, Scalar]:
        if c == 0:
            return {}
        return {PKey(*k, 0, 0): v * c for k, v in _canon(mm, aa, bb).items()}

    dz_part: Dict[PKey, Scalar] = {}
    dzb_part: Dict[PKey, Scalar] = {}
    for key, v in term(m + 1, a + 1, b, -m).items():
        add_term(dz_part, key, v)
    if b:
        for key, v in term(m, a, b - 1, b).items():
            add_term(dz_part, key, v)
    for key, v in term(m + 1, a, b + 1, -m).items():
        add_term(dzb_part, key, v)
    if a:
        for key, v in term(m, a - 1, b, a).items():
            add_term(dzb_part, key, v)
    return PoissonElement._raw(dz_part), PoissonElement._raw(dzb_part)


def classical_d(x: PoissonElement) -> PoissonElement:
    """d f = dz df/dz + dzb df/dzb, d(dz) = d(dzb) = 0"""
    out = PoissonElement.zero()
    for key, c in x.terms.items():
        by_z, by_zb = _partials(key.mono)
        basis = PoissonElement._raw({PKey(0, 0, 0, key.eps, key.epsb): ONE})
        out = out + (p_dz() * by_z + p_dzb() * by_zb) * basis * c
    return out


# Identity rows


def bracket_rows() -> List[Tuple[str, Any]]:
    forms = xi_forms()
    xi_big = forms.Xi
    rows = [
        ("(zb, z) = rho", poisson_bracket(zb(), z()) - p_rho()),
        ("(dz, z) = z dz", poisson_bracket(exterior_d(z()), z()) - p_z() * p_dz()),
        ("(dzb, zb) = -zb dzb", poisson_bracket(exterior_d(zb()), zb()) + p_zb() * p_dzb()),
        ("(dzb, dz) = dzb dz", poisson_bracket(exterior_d(zb()), exterior_d(z())) - p_dzb() * p_dz()),
        ("Xi^2 = 0 at q = 1", classical_limit_elem(forms.Xi2)),
        ("dXi = 2 dzb rhoi^2 dz at q = 1", classical_limit_elem(forms.dXi) - p_dzb() * p_rhoi() * p_rhoi() * p_dz() * 2),
    ]
    for name, f in (("z", z()), ("zb", zb()), ("rhoi", rhoi()), ("zb z^2", zb() * z() * z())):
        rows.append((f"(Xi, {name}) = d{name}", poisson_bracket(xi_big, f) - classical_limit_elem(exterior_d(f))))
    rows.append(
        (
            "Xi at q = 1 = dz rhoi zb - dzb rhoi z",
            classical_limit_elem(xi_big) - (p_dz() * p_rhoi() * p_zb() - p_dzb() * p_rhoi() * p_z()),
        )
    )
    return rows


def w_bracket_rows() -> List[Tuple[str, bool]]:
    w, wb, _, _ = w_generators()
    wbw = {(0, 0): WB * W}
    expected = {(0, 0): sympy.expand(WB * W * (1 + WB * W))}
    direct = poisson_bracket_w(wb * w, w)
    leibniz = classical_product_w({(0, 0): W}, poisson_bracket_w(wb, w))
    return [
        ("(wb, w) = wb w (1 + wb w)", not _w_difference(poisson_bracket_w(wb, w), expected)),
        ("(w, w) = 0", not poisson_bracket_w(w, w)),
        ("(wb w, w) = w (wb, w)", not _w_difference(direct, leibniz)),
        ("(w, wb w) = -(wb w, w)", not _w_difference(poisson_bracket_w(w, wb * w), {k: -v for k, v in direct.items()})),
        ("wb w is the classical product", not _w_difference(classical_in_w(wb * w), wbw)),
    ]


def random_functions(count: int, seed: int, max_degree: int = 2) -> List[FuncElement]:
    rng = random.Random(seed)
    monos = [
        (m, a, b)
        for m in range(max_degree + 1)
        for a in range(max_degree + 1)
        for b in range(max_degree + 1)
        if m + a + b <= max_degree and (m == 0 or min(a, b) == 0)
    ]
    out = []
    for _ in range(count):
        f = FuncElement.zero()
        for mono in rng.sample(monos, k=min(2, len(monos))):
            f = f + monomial(*mono, coeff=rng.randint(-3, 3) or 1)
        out.append(f)
    return out


def property_rows(count: int, seed: int) -> List[Tuple[str, Any]]:
    """Antisymmetry, Leibniz, Jacobi and compatibility with d on seeded random functions"""
    fs = random_functions(3 * count, seed)
    rows = []
    for n in range(count):
        f, g, h = fs[3 * n: 3 * n + 3]
        fg, gh = poisson_bracket(f, g), poisson_bracket(g, h)
        rows.append((f"antisymmetry #{n}", fg + poisson_bracket(g, f)))
        rows.append(
            (
                f"Leibniz #{n}",
                poisson_bracket(f, g * h) - fg * classical_limit_elem(h) - classical_limit_elem(g) * poisson_bracket(f, h),
            )
        )
        jacobi = (
            poisson_bracket(f, gh)
            + poisson_bracket(g, poisson_bracket(h, f))
            + poisson_bracket(h, fg)
        )
        rows.append((f"Jacobi #{n}", jacobi))
        rows.append(
            (
                f"d(f, g) = (df, g) + (f, dg) #{n}",
                classical_d(fg) - poisson_bracket(exterior_d(f), g) - poisson_bracket(f, exterior_d(g)),
            )
        )
        rows.append((f"(df, dg) = (dg, df) #{n}", poisson_bracket(exterior_d(f), exterior_d(g)) - poisson_bracket(exterior_d(g), exterior_d(f))))
        rows.append((f"limit commutes with d #{n}", classical_limit_elem(exterior_d(f)) - classical_d(classical_limit_elem(f))))
    return rows


# North-pole numerics


class NumericRow(NamedTuple):
    check: str
    value: complex
    expected: complex
    abs_err: float

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "value": [self.value.real, self.value.imag],
            "expected": [self.expected.real, self.expected.imag],
            "abs_err": self.abs_err,
        }


def _complex_quad(fn: Callable[[float], complex], a: float, b: float, tolerance: float) -> complex:
    re, re_err = integrate.quad(lambda t: fn(t).real, a, b, epsabs=tolerance * 1e-3, epsrel=tolerance * 1e-3, limit=200)
    im, im_err = integrate.quad(lambda t: fn(t).imag, a, b, epsabs=tolerance * 1e-3, epsrel=tolerance * 1e-3, limit=200)
    if max(re_err, im_err) > tolerance:
        raise QuadratureNotConverged(f"quadrature error estimate {max(re_err, im_err):.2e} exceeds {tolerance:.1e}")
    return complex(re, im)


@lru_cache(maxsize=1)
def _xi_in_w_callables() -> Tuple[Callable, Callable]:
    """Classical Xi = A dw + B dwb as numeric functions of (w, wb)"""
    coefficients = classical_in_w(embed(xi_forms().Xi))
    a = sympy.lambdify((W, WB), coefficients.get((1, 0), 0), "numpy")
    b = sympy.lambdify((W, WB), coefficients.get((0, 1), 0), "numpy")
    return a, b


def circle_integral_xi(r: float, tolerance: float = NUMERIC_TOLERANCE) -> complex:
    """Contour integral of the classical Xi over |w| = r, counterclockwise"""
    a, b = _xi_in_w_callables()

    def integrand(theta: float) -> complex:
        w = r * np.exp(1j * theta)
        wb = np.conj(w)
        return complex(a(w, wb) * 1j * w + b(w, wb) * (-1j) * wb)

    return _complex_quad(integrand, 0.0, 2 * np.pi, tolerance)


def circle_split_term(r: float, tolerance: float = NUMERIC_TOLERANCE) -> complex:
    """Contour integral of (wb dw - w dwb)/(1 + wb w), the part of Xi that vanishes with r"""

    def integrand(theta: float) -> complex:
        w = r * np.exp(1j * theta)
        wb = np.conj(w)
        return complex((wb * 1j * w - w * (-1j) * wb) / (1 + wb * w))

    return _complex_quad(integrand, 0.0, 2 * np.pi, tolerance)


@lru_cache(maxsize=1)
def _area_density() -> Callable[[float], float]:
    """Omega = c(rho) dz dzb = -2i c dx dy; returns -2 c as a function of |z|^2"""
    coeff = classical_limit_elem(xi_forms().dXi)
    terms = [(k.m, k.a, k.b, c) for k, c in coeff.terms.items() if (k.eps, k.epsb) == (1, 1)]
    if any(a or b for _, a, b, _ in terms):
        raise VerificationFailure("dXi at q = 1 is rotation invariant", "coefficient depends on z or zb")
    values = [(m, float(classical_limit(c))) for m, _, _, c in terms]
    return lambda r2: -2 * sum(v * (1 + r2) ** (-m) for m, v in values)


def plane_area_integral(radius: float = np.inf, tolerance: float = AREA_TOLERANCE) -> complex:
    """integral of Omega over |z| <= radius; Omega = i * density dx dy"""
    density = _area_density()
    if np.isinf(radius):
        value, err = integrate.dblquad(lambda y, x: density(x * x + y * y), -np.inf, np.inf, -np.inf, np.inf, epsabs=1e-10, epsrel=1e-10)
    else:
        value, err = integrate.dblquad(lambda r, t: density(r * r) * r, 0.0, 2 * np.pi, 0.0, radius, epsabs=1e-12, epsrel=1e-12)
    if err > tolerance * max(abs(value), 1.0):
        raise QuadratureNotConverged(f"area quadrature error estimate {err:.2e} exceeds tolerance")
    return 1j * value


def _row(check: str, value: complex, expected: complex) -> NumericRow:
    return NumericRow(check, complex(value), complex(expected), float(abs(value - expected)))


def numeric_north_pole_checks(
    r_values: Sequence[float] = NUMERIC_RADII, tolerance: float = NUMERIC_TOLERANCE
) -> List[NumericRow]:
    """
    Contour integrals of Xi around the north pole, the total area and Stokes on the punctured sphere.

    Raises:
        ValueError: for radii outside (0, 1)
        QuadratureNotConverged: if scipy cannot reach the requested accuracy
        VerificationFailure: if a value misses its expected value
    """
    if not r_values or any(not 0 < r < 1 for r in r_values):
        raise ValueError("circle radii must lie in (0, 1)")
    rows: List[NumericRow] = []
    circle_values = []
    for r in r_values:
        value = circle_integral_xi(r, tolerance)
        expected = -4j * np.pi / (1 + r * r)
        rows.append(_row(f"contour Xi, r = {r}", value, expected))
        circle_values.append(value)
        split = circle_split_term(r, tolerance)
        rows.append(_row(f"split term, r = {r}", split, 4j * np.pi * r * r / (1 + r * r)))

    x = np.array([r * r for r in r_values])
    degree = min(len(r_values) - 1, 2)
    intercept = complex(
        np.polyval(np.polyfit(x, np.array([v.real for v in circle_values]), degree), 0.0),
        np.polyval(np.polyfit(x, np.array([v.imag for v in circle_values]), degree), 0.0),
    )
    extrapolated = _row("contour Xi, r -> 0", intercept, -4j * np.pi)

    area = plane_area_integral()
    rows.append(_row("area form over the sphere", area, 4j * np.pi))
    for r in r_values:
        punctured = plane_area_integral(1.0 / r)
        rows.append(_row(f"Stokes |w| >= {r}: area = -contour", punctured, -circle_integral_xi(r, tolerance)))

    for row in rows:
        scale = max(abs(row.expected), 1.0)
        limit = AREA_TOLERANCE if row.check.startswith(("area", "Stokes")) else tolerance
        if row.abs_err > limit * scale:
            raise VerificationFailure(row.check, f"value {row.value} expected {row.expected}")
    if extrapolated.abs_err > 1e-4 * abs(extrapolated.expected):
        raise VerificationFailure(extrapolated.check, f"value {extrapolated.value}")
    rows.append(extrapolated)
    return rows


def verify_poisson(seed: int = 0, count: int = 5) -> List[dict]:
    """Report rows for the Poisson suite; failures are reported, not raised"""
    rows = [check_row(identity, "classical limit", residual) for identity, residual in bracket_rows()]
    rows.extend(check_row(identity, "w-patch brackets", ok) for identity, ok in w_bracket_rows())
    rows.extend(check_row(identity, "random brackets", residual) for identity, residual in property_rows(count, seed))
    return rows
