"""
Invariant Integration - the functional <.> on the sphere and the plane integral
"""

from __future__ import annotations
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from app.calculus import apply_diffop, del_op, delb_op
from app.checks import require
from app.errors import NotIntegrable, VerificationFailure
from app.scalar import ONE, Scalar, qint, qpow, to_scalar
from app.vfields import GENERATORS, act_func, build_bcd, rho2_del_side, rho2_delb_side
from app.zalgebra import FuncElement, FuncMonomial, monomial, rho_power, z, zb


class IntegralValue(NamedTuple):
    value: Scalar
    status: str  # "finite" or "zero-by-invariance"


def is_integrable(mono: FuncMonomial) -> bool:
    """Bounded (pure rho powers) or decaying fast enough at the north pole"""
    m, a, b = mono
    return (a == 0 and b == 0) or 2 * m - a - b >= 3


def _check_domain(f: FuncElement) -> None:
    for mono in f.terms:
        if not is_integrable(mono):
            raise NotIntegrable(tuple(mono))


def sphere_moment(m: int) -> Scalar:
    """<rho^-m> with <1> = 1"""
    return ONE / qint(m + 1)


def integrate_sphere(f: FuncElement) -> Scalar:
    """
    Raises:
        NotIntegrable: naming the first monomial outside the domain
    """
    _check_domain(f)
    total = to_scalar(0)
    for mono, c in f.terms.items():
        if mono.charge == 0:
            total += c * sphere_moment(mono.m)
    return total


def integral_value(f: FuncElement) -> IntegralValue:
    value = integrate_sphere(f)
    charged_only = bool(f.terms) and all(mono.charge for mono in f.terms)
    return IntegralValue(value, "zero-by-invariance" if charged_only else "finite")


def integrate_plane(f: FuncElement) -> Scalar:
    """int f = <rho^2 f>"""
    return integrate_sphere(rho_power(2) * f)


def plane_integral_value(f: FuncElement) -> IntegralValue:
    return integral_value(rho_power(2) * f)


# Moments from invariance alone


def _zp_equation(l: int) -> Dict[int, Scalar]:
    """<Zp|>(zb rho^-l)> = 0 written as {m: coefficient of <rho^-m>}"""
    image = act_func("Zp", monomial(l, 1, 0))
    _check_domain(image)
    return {mono.m: c for mono, c in image.terms.items() if mono.charge == 0}


@lru_cache(maxsize=None)
def solve_moments(l_max: int) -> Tuple[Scalar, ...]:
    """
    <rho^-l> for l = 0..l_max from <1> = 1 and <Zp|>(zb rho^-l)> = 0.

    Raises:
        VerificationFailure: if an equation does not determine the next moment
    """
    moments = [ONE]
    for l in range(1, l_max + 1):
        equation = _zp_equation(l)
        top = max(equation, default=0)
        if top != l:
            raise VerificationFailure(f"invariance equation at l={l}", f"highest moment is rho^-{top}")
        known = sum((c * moments[m] for m, c in equation.items() if m != l), to_scalar(0))
        moments.append(-known / equation[l])
    return tuple(moments)


def moment_table(l_max: int) -> Dict[Tuple[int, int], Scalar]:
    """<(zb z)^k rho^-l> for 0 <= k <= l <= l_max, using only the solved moments"""
    moments = solve_moments(l_max)
    zbz = zb() * z()
    table = {}
    for l in range(l_max + 1):
        f = rho_power(-l)
        for k in range(l + 1):
            _check_domain(f)
            table[(k, l)] = sum((c * moments[mono.m] for mono, c in f.terms.items() if mono.charge == 0), to_scalar(0))
            f = zbz * f
    return table


def recursion_residuals(l_max: int) -> Iterator[Tuple[int, Scalar, Scalar]]:
    """(l, <Zp|>(zb rho^-l)> by the closed form, solved minus closed-form moment)"""
    moments = solve_moments(l_max)
    for l in range(1, l_max + 1):
        image = act_func("Zp", monomial(l, 1, 0))
        yield l, integrate_sphere(image), moments[l] - sphere_moment(l)


def verify_invariance_recursion(l_max: int) -> List[dict]:
    """
    Raises:
        VerificationFailure: at the first failing l
    """
    if l_max < 1:
        raise ValueError("l_max must be at least 1")
    report = []
    for l, invariance, moment_gap in recursion_residuals(l_max):
        require(f"<Zp|>(zb rho^-{l})> = 0", invariance)
        require(f"<rho^-{l}> = 1/[{l + 1}]_q", moment_gap)
        report.append({"l": l, "status": "pass"})
    return report


def integrable_monomials(m_max: int) -> Iterator[FuncMonomial]:
    for m in range(m_max + 1):
        yield FuncMonomial(m, 0, 0)
        for n in range(1, 2 * m - 2):
            yield FuncMonomial(m, n, 0)
            yield FuncMonomial(m, 0, n)


def invariance_residuals(m_max: int) -> Iterator[Tuple[str, FuncMonomial, Optional[Scalar]]]:
    """<O|>f> for integrable basis monomials; None where O|>f leaves the domain"""
    for mono in integrable_monomials(m_max):
        for gen in GENERATORS:
            image = act_func(gen, FuncElement._raw({mono: ONE}))
            if all(is_integrable(key) for key in image.terms):
                yield gen, mono, integrate_sphere(image)
            else:
                yield gen, mono, None


# Translation invariance of the plane integral


def plane_family(l_min: int = 3, l_max: int = 8) -> Iterator[Tuple[str, FuncElement]]:
    for l in range(l_min, l_max + 1):
        yield f"rhoi^{l}", rho_power(-l)
        yield f"rhoi^{l + 1} * zb", monomial(l + 1, 1, 0)
        yield f"rhoi^{l + 1} * z", monomial(l + 1, 0, 1)


def translation_residuals(f: FuncElement) -> Dict[str, Scalar]:
    """
    int del f, int delb f, and both against q <(vector-field combination) B f>

    Raises:
        NotIntegrable: if f or one of the vector-field images leaves the domain
    """
    b_op, _, _ = build_bcd()
    bf = apply_diffop(b_op, f)
    int_del = integrate_plane(apply_diffop(del_op(), f))
    int_delb = integrate_plane(apply_diffop(delb_op(), f))
    q = qpow(1)
    return {
        "int del f": int_del,
        "int delb f": int_delb,
        "int del f - q <(q^4 Zp zb Zm - Zm zb Zp - q^{1/2}(1+q^2) Zm) B f>": int_del - q * integrate_sphere(rho2_del_side(bf)),
        "int delb f - q <(Zm z Zp - q^4 Zp z Zm + q^{1/2}(1+q^2) Zp) B f>": int_delb - q * integrate_sphere(rho2_delb_side(bf)),
    }


def verify_plane_translation_invariance(family=None) -> List[dict]:
    """
    Raises:
        VerificationFailure: naming the member and the failing integral
    """
    report = []
    for name, f in family if family is not None else plane_family():
        for identity, residual in translation_residuals(f).items():
            require(f"{identity} = 0", residual, f"f = {name}")
        report.append({"f": name, "status": "pass"})
    return report
