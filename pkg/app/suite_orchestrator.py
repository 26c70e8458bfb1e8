"""
Suite Orchestrator - dispatches CLI/API commands and runs the verification suites
Executes the command and RETURNS THE ENVELOPE
"""

from __future__ import annotations
import json
import sys
import time
from typing import Any, Callable, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import sympy
from sympy.polys.fields import FracElement

from app import expression
from app.calculus import (
    DiffOp,
    FormElement,
    apply_diffop,
    del_op,
    delb_op,
    delta,
    delta_bar,
    dz,
    dzb,
    exterior_d,
    gauge_derivative,
    graded_commutator,
    normalize_form,
    star_calc,
    star_diffop,
    star_form,
    xi_closed_forms,
    xi_forms,
)
from app.checks import check_row
from app.errors import PodlesError, UnknownSuite, VerificationFailure
from app.integration import (
    integral_value,
    integrate_sphere,
    invariance_residuals,
    plane_family,
    plane_integral_value,
    recursion_residuals,
    translation_residuals,
)
from app.metrics_logger import MetricsLogger
from app.poisson import NUMERIC_RADII, classical_limit_elem, numeric_north_pole_checks, poisson_bracket, poisson_bracket_w, verify_poisson
from app.rewriting import Word
from app.scalar import LAM, ONE, classical_limit, qint, qint_bar, qpow, render, spow
from app.settings import Settings, get_settings
from app.suq2 import random_words, verify_suq2
from app.vfields import (
    GENERATORS,
    VectorOp,
    act,
    check_infinitesimal_covariance,
    h,
    inverse_residuals,
    multiply_words,
    normalize_vf,
    realization_residuals,
    star_words,
    vf_act,
    zm,
    zp,
)
from app.wpatch import LocalElement, classical_in_w, star_local, verify_wpatch
from app.zalgebra import (
    LETTERS,
    FuncElement,
    FuncMonomial,
    bar_swap,
    from_charge,
    normalize,
    podles_generators,
    podles_relations,
    rho_power,
    rhoi,
    star_func,
    to_charge,
    z,
    zb,
)

VERSION = "1.0"
COMMANDS = {
    "normalize": 1,
    "mul": 2,
    "comm": 2,
    "star": 1,
    "d": 1,
    "act": 2,
    "integrate": 1,
    "pb": 2,
    "patch": 1,
    "limit-classical": 1,
    "verify": 0,
}

Rows = List[Dict[str, Any]]


class SampleSizes(NamedTuple):
    """Seeded random words per algebra and Poisson triples per run"""

    words: int = 500
    triples: int = 50


INVERSE_DEGREE = 8
INVARIANCE_M_MAX = 8


def log(message: str) -> None:
    # stdout carries the command output
    print(message, file=sys.stderr)


def basis_monomials(max_degree: int) -> List[FuncMonomial]:
    """Canonical rhoi^m zb^a z^b with m + a + b <= max_degree"""
    return [
        FuncMonomial(m, a, b)
        for m in range(max_degree + 1)
        for a in range(max_degree + 1 - m)
        for b in range(max_degree + 1 - m - a)
        if m == 0 or min(a, b) == 0
    ]


def _mono_text(mono: FuncMonomial) -> str:
    return FuncElement._raw({mono: ONE}).render()


def _guarded(rows: Rows, anchor: str, run: Callable[[], Sequence[Tuple[str, Any]]]) -> None:
    """Run a raising check; a failure becomes one report row"""
    try:
        for identity, residual in run():
            rows.append(check_row(identity, anchor, residual))
    except VerificationFailure as e:
        rows.append({"identity": e.identity, "anchor": anchor, "status": "fail", "counterexample": e.counterexample})
    except PodlesError as e:
        rows.append({"identity": type(e).__name__, "anchor": anchor, "status": "fail", "counterexample": str(e)})


# ---------------- SUITES ---------------- #


def zalgebra_suite(seed: int, max_degree: int, sizes: SampleSizes = SampleSizes()) -> Rows:
    rows: Rows = []
    rows.append(check_row("z zb = q^-2 zb z + q^-2 - 1", "Eq (zz)", z() * zb() - zb() * z() * qpow(-2) - (qpow(-2) - 1)))
    rows.append(check_row("rho rhoi = 1", "rho = 1 + zb z", rho_power(1) * rhoi() - 1))
    rows.append(check_row("z rhoi rho = z", "derived z rhoi rule", z() * rhoi() * rho_power(1) - z()))
    rows.append(check_row("zb rhoi rho = zb", "derived zb rhoi rule", zb() * rhoi() * rho_power(1) - zb()))
    bm, bp, b3 = podles_generators()
    rows.extend(check_row(identity, "Podles relations", r) for identity, r in podles_relations(bm, bp, b3, star_func))

    for word in random_words(LETTERS, sizes.words, 8, seed):
        comb = {word: ONE}
        rows.append(check_row(f"confluence: {' '.join(word)}", "normal ordering", normalize(comb) - normalize(comb, "rightmost")))

    sample = [FuncElement._raw({mono: ONE}) + zb() * qpow(1) for mono in basis_monomials(min(max_degree, 3))]
    for i, x in enumerate(sample[:8]):
        y, w = sample[(i + 3) % len(sample)], sample[(i + 5) % len(sample)]
        label = f"x = {x.render()}, y = {y.render()}"
        rows.append(check_row(f"associativity: {label}", "normal ordering", x * (y * w) - (x * y) * w))
        rows.append(check_row(f"star antimultiplicative: {label}", "star structure", star_func(x * y) - star_func(y) * star_func(x)))
        rows.append(check_row(f"star involutive: {x.render()}", "star structure", star_func(star_func(x)) - x))
        rows.append(check_row(f"bar swap multiplicative: {label}", "bar swap", bar_swap(x * y) - bar_swap(x) * bar_swap(y)))
        rows.append(check_row(f"charge decomposition: {x.render()}", "charge basis", from_charge(to_charge(x)) - x))
    return rows


def calculus_suite(seed: int, max_degree: int, sizes: SampleSizes = SampleSizes()) -> Rows:
    rows: Rows = []
    q2, qm2 = qpow(2), qpow(-2)
    form_relations = [
        ("z dz = q^-2 dz z", z() * dz() - dz() * z() * qm2),
        ("zb dz = q^2 dz zb", zb() * dz() - dz() * zb() * q2),
        ("z dzb = q^-2 dzb z", z() * dzb() - dzb() * z() * qm2),
        ("zb dzb = q^2 dzb zb", zb() * dzb() - dzb() * zb() * q2),
        ("dz dzb = -q^-2 dzb dz", dz() * dzb() + dzb() * dz() * qm2),
        ("dz^2 = 0", dz() * dz()),
        ("dzb^2 = 0", dzb() * dzb()),
        ("dz rhoi = rhoi dz", dz() * rhoi() - rhoi() * dz()),
    ]
    rows.extend(check_row(identity, "form relations", r) for identity, r in form_relations)

    letters = LETTERS + ("dz", "dzb")
    images = {"rhoi": rhoi(), "zb": zb(), "z": z(), "dz": dz(), "dzb": dzb()}
    for word in random_words(letters, sizes.words, 5, seed):
        product = FormElement.one()
        for letter in word:
            product = product * images[letter]
        rows.append(check_row(f"rewrite = product: {' '.join(word)}", "form relations", normalize_form({word: ONE}) - product))

    d, db = del_op(), delb_op()
    derivative_relations = [
        ("del z = 1 + q^-2 z del", d * z() - 1 - DiffOp.lift(z()) * d * qm2),
        ("del zb = q^2 zb del", d * zb() - DiffOp.lift(zb()) * d * q2),
        ("delb z = q^-2 z delb", db * z() - DiffOp.lift(z()) * db * qm2),
        ("delb zb = 1 + q^2 zb delb", db * zb() - 1 - DiffOp.lift(zb()) * db * q2),
        ("del delb = q^-2 delb del", d * db - db * d * qm2),
    ]
    rows.extend(check_row(identity, "derivative relations", r) for identity, r in derivative_relations)

    for mono in basis_monomials(max_degree):
        f = FuncElement._raw({mono: ONE})
        rows.append(check_row(f"d^2 = 0 on {_mono_text(mono)}", "d^2 = 0", exterior_d(exterior_d(f))))
    for mono in basis_monomials(min(max_degree, 3)):
        f = FuncElement._raw({mono: ONE})
        text = _mono_text(mono)
        rows.append(check_row(f"delta^2 = 0 on {text}", "holomorphic split", delta(delta(f))))
        rows.append(check_row(f"deltab^2 = 0 on {text}", "holomorphic split", delta_bar(delta_bar(f))))
        rows.append(check_row(f"delta + deltab = d on {text}", "holomorphic split", delta(f) + delta_bar(f) - exterior_d(f)))
    rows.append(check_row("[delta, z] = dz", "holomorphic split", delta(z()) - dz()))
    rows.append(check_row("[delta, zb] = 0", "holomorphic split", delta(zb())))

    del_star = delb_op() * (-qm2) + DiffOp.lift(z() * rhoi()) * (1 + qm2)
    rows.append(check_row("del* = -q^-2 delb + (1 + q^-2) z rhoi", "sphere star", star_calc(d) - del_star))
    rows.append(check_row("del* = -q^2 delb (plane)", "plane star", star_calc(d, "plane") + db * q2))
    for variant in ("sphere", "plane"):
        for name, op in (("del", d), ("delb", db), ("z del", DiffOp.lift(z()) * d)):
            rows.append(check_row(f"{name}** = {name} ({variant})", f"{variant} star", star_calc(star_calc(op, variant), variant) - op))
        for name, x, y in (("del z", d, z()), ("delb zb", db, zb()), ("del delb", d, db)):
            lhs = star_diffop(x * y, variant)
            rhs = star_diffop(DiffOp.lift(y), variant) * star_diffop(x, variant)
            rows.append(check_row(f"({name})* = antimultiplicative ({variant})", f"{variant} star", lhs - rhs))
    omega = dz() * z() + dzb() * rhoi()
    rows.append(check_row("star^2 = id on forms", "sphere star", star_form(star_form(omega)) - omega))
    rows.append(check_row("dz* = dzb", "sphere star", star_form(dz()) - dzb()))

    def gauge_rows():
        for n in range(4):
            d_n, _ = gauge_derivative(n)
            yield f"del^({n}) = q^{4 * n} rho^{2 * n} del rho^-{2 * n}", 0
            yield f"del^({n}) z = 1 + q^-2 z del^({n})", d_n * z() - 1 - DiffOp.lift(z()) * d_n * qm2

    _guarded(rows, "gauge transformation", gauge_rows)
    return rows


def xi_suite(seed: int, max_degree: int, sizes: SampleSizes = SampleSizes()) -> Rows:
    rows: Rows = []

    def closed_rows():
        forms = xi_forms()
        closed = xi_closed_forms()
        return [
            ("dXi = 2q dzb rho^-2 dz", forms.dXi - closed["dXi"]),
            ("Xi^2 = q lambda dzb rho^-2 dz", forms.Xi2 - closed["Xi2"]),
            ("Xi* = -Xi", star_form(forms.Xi) + forms.Xi),
        ]

    _guarded(rows, "There exists a one-form", closed_rows)
    if any(row["status"] == "fail" for row in rows):
        return rows

    forms = xi_forms()
    big_xi = forms.Xi
    for mono in basis_monomials(max_degree):
        f = FuncElement._raw({mono: ONE})
        residual = graded_commutator(big_xi, FormElement.lift(f)) - exterior_d(f) * LAM
        rows.append(check_row(f"Xi f - f Xi = lambda df, f = {_mono_text(mono)}", "Xi f -+ f Xi = lambda df", residual))
    for name, omega in (("dz", dz()), ("dzb", dzb()), ("z dz", z() * dz())):
        residual = graded_commutator(big_xi, omega) - exterior_d(omega) * LAM
        rows.append(check_row(f"Xi w + w Xi = lambda dw, w = {name}", "Xi f -+ f Xi = lambda df", residual))
    for name, x in (("z", z()), ("zb", zb()), ("rhoi", rhoi()), ("dz", dz()), ("dzb", dzb())):
        x = FormElement.lift(x)
        rows.append(check_row(f"Xi^2 {name} = {name} Xi^2", "Xi^2 is central", forms.Xi2 * x - x * forms.Xi2))
    return rows


def vfields_suite(seed: int, max_degree: int, sizes: SampleSizes = SampleSizes()) -> Rows:
    rows: Rows = []
    q = qpow(1)
    relations: List[Tuple[str, Dict[Word, Any]]] = [
        ("H Zp - q^4 Zp H = (1 + q^2) Zp", {("H", "Zp"): 1, ("Zp", "H"): -qpow(4), ("Zp",): -(1 + qpow(2))}),
        ("q Zp Zm - q^-1 Zm Zp = H", {("Zp", "Zm"): q, ("Zm", "Zp"): -qpow(-1), ("H",): -1}),
        ("Zp z = q^2 z Zp + q^1/2 z^2", {("Zp", "z"): 1, ("z", "Zp"): -qpow(2), ("z", "z"): -spow(1)}),
        ("Zp zb = q^-2 zb Zp + q^-3/2", {("Zp", "zb"): 1, ("zb", "Zp"): -qpow(-2), (): -spow(-3)}),
        ("Zp dzb = q^-2 dzb Zp", {("Zp", "dzb"): 1, ("dzb", "Zp"): -qpow(-2)}),
        ("H dz = q^4 dz H + (1 + q^2) dz", {("H", "dz"): 1, ("dz", "H"): -qpow(4), ("dz",): -(1 + qpow(2))}),
        ("Zm dz = q^2 dz Zm", {("Zm", "dz"): 1, ("dz", "Zm"): -qpow(2)}),
    ]
    for identity, comb in relations:
        rows.append(check_row(identity, "vector field relations", normalize_vf(comb)))
        rows.append(check_row(f"star of ({identity})", "star-consistency", normalize_vf(star_words(comb))))

    letters = ("z", "zb", "rhoi", "dz", "dzb", "Zp", "H", "Zm")
    for word in random_words(letters, sizes.words, 6, seed):
        comb = {word: ONE}
        text = " ".join(word)
        leftmost = normalize_vf(comb)
        rows.append(check_row(f"PBW confluence: {text}", "smash product", leftmost - normalize_vf(comb, "rightmost")))
        rows.append(check_row(f"rewrite = product: {text}", "smash product", leftmost - multiply_words(comb)))

    forms = xi_forms()
    actions = [
        ("Zp|>zb = q^-3/2", vf_act(zp(), zb()) - spow(-3)),
        ("Zp|>z = q^1/2 z^2", vf_act(zp(), z()) - z() * z() * spow(1)),
        ("H|>z = (1 + q^2) z", vf_act(h(), z()) - z() * (1 + qpow(2))),
        ("H|>zb = -q^-4 (1 + q^2) zb", vf_act(h(), zb()) + zb() * (qpow(-4) * (1 + qpow(2)))),
        ("Zm|>z = -q^1/2", vf_act(zm(), z()) + spow(1)),
        ("Zm|>zb = -q^-3/2 zb^2", vf_act(zm(), zb()) + zb() * zb() * spow(-3)),
        ("Zp|>Xi = q^-1/2 dz", vf_act(zp(), forms.Xi) - dz() * spow(-1)),
        ("Zp Xi = Xi Zp + q^-1/2 dz", zp() * forms.Xi - forms.Xi * zp() - VectorOp.lift(dz() * spow(-1))),
        ("Zp rho = rho Zp + q^1/2 z rho", zp() * rho_power(1) - rho_power(1) * zp() - VectorOp.lift(z() * rho_power(1) * spow(1))),
    ]
    for l in range(1, 4):
        residual = zp() * rho_power(-l) - rho_power(-l) * zp() + VectorOp.lift(z() * rho_power(-l) * (spow(-3) * qint_bar(l)))
        actions.append((f"Zp rho^-{l} = rho^-{l} Zp - q^-3/2 [{l}]_(1/q) z rho^-{l}", residual))
    for gen in GENERATORS:
        actions.append((f"{gen}|>dXi = 0", act(gen, forms.dXi)))
    rows.extend(check_row(identity, "action of the vector fields", r) for identity, r in actions)

    for mono in basis_monomials(min(max_degree, 4)):
        f = FuncElement._raw({mono: ONE})
        for gen in GENERATORS:
            residual = act(gen, exterior_d(f)) - exterior_d(act(gen, f))
            rows.append(check_row(f"{gen} d = d {gen} on {_mono_text(mono)}", "commutes with d", residual))

    covariance = [
        ("Eq (zz)", {("z", "zb"): 1, ("zb", "z"): -qpow(-2), (): 1 - qpow(-2)}),
        ("z dz = q^-2 dz z", {("z", "dz"): 1, ("dz", "z"): -qpow(-2)}),
        ("dz dzb = -q^-2 dzb dz", {("dz", "dzb"): 1, ("dzb", "dz"): qpow(-2)}),
    ]
    for name, relation in covariance:
        _guarded(
            rows,
            "infinitesimal covariance",
            lambda relation=relation, name=name: [
                (f"{row['generator']} preserves {name}", 0) for row in check_infinitesimal_covariance(relation)
            ],
        )
    return rows


def pseudodiff_suite(seed: int, max_degree: int, sizes: SampleSizes = SampleSizes()) -> Rows:
    rows = [
        check_row(f"{identity} on zb^{mono.a} z^{mono.b}", "B, C, D inverses", residual)
        for identity, mono, residual in inverse_residuals(INVERSE_DEGREE)
    ]
    rows.extend(
        check_row(f"{identity} on zb^{mono.a} z^{mono.b}", "pseudo-differential realizations", residual)
        for identity, mono, residual in realization_residuals(min(max_degree, 5))
    )
    return rows


def integration_suite(seed: int, max_degree: int, sizes: SampleSizes = SampleSizes()) -> Rows:
    rows: Rows = []
    for l, invariance, gap in recursion_residuals(12):
        rows.append(check_row(f"<Zp|>(zb rho^-{l})> = 0", "the recursion formula", invariance))
        rows.append(check_row(f"<rho^-{l}> = 1/[{l + 1}]_q", "the recursion formula", gap))
    for l in range(2, 13):
        value = integrate_sphere(zb() * z() * rho_power(-l))
        rows.append(check_row(f"<zb z rho^-{l}> = 1/[{l}]_q - 1/[{l + 1}]_q", "left to the reader", value - (ONE / qint(l) - ONE / qint(l + 1))))
    for gen, mono, residual in invariance_residuals(INVARIANCE_M_MAX):
        identity = f"<{gen}|>({_mono_text(mono)})> = 0"
        if residual is None:
            rows.append({"identity": identity, "anchor": "image leaves the integrable domain", "status": "skipped", "counterexample": None})
        else:
            rows.append(check_row(identity, "invariant integral", residual))
    for name, f in plane_family():
        _guarded(
            rows,
            "translation invariance",
            lambda f=f, name=name: [(f"{identity} = 0, f = {name}", r) for identity, r in translation_residuals(f).items()],
        )
    return rows


def suq2_suite(seed: int, max_degree: int, sizes: SampleSizes = SampleSizes(), preset: str = "standard") -> Rows:
    return verify_suq2(preset, seed, word_count=sizes.words)


def wpatch_suite(seed: int, max_degree: int, sizes: SampleSizes = SampleSizes()) -> Rows:
    return verify_wpatch()


def poisson_suite(seed: int, max_degree: int, sizes: SampleSizes = SampleSizes()) -> Rows:
    rows = verify_poisson(seed, count=sizes.triples)
    try:
        numeric = numeric_north_pole_checks(NUMERIC_RADII)
    except PodlesError as e:
        rows.append({"identity": "north-pole numerics", "anchor": "Stokes theorem", "status": "fail", "counterexample": str(e)})
        return rows
    for row in numeric:
        rows.append({"identity": row.check, "anchor": "Stokes theorem", "status": "pass", "counterexample": None, **row.to_dict()})
    return rows


SUITES: Dict[str, Callable[..., Rows]] = {
    "zalgebra": zalgebra_suite,
    "calculus": calculus_suite,
    "xi": xi_suite,
    "vfields": vfields_suite,
    "pseudodiff": pseudodiff_suite,
    "integration": integration_suite,
    "suq2": suq2_suite,
    "wpatch": wpatch_suite,
    "poisson": poisson_suite,
}


def select_suites(selector: str) -> List[str]:
    """
    'all', one suite name or a comma-separated list

    Raises:
        UnknownSuite: for names outside SUITES
    """
    if selector == "all":
        return list(SUITES)
    names = [name.strip() for name in selector.split(",") if name.strip()]
    unknown = [name for name in names if name not in SUITES]
    if unknown or not names:
        raise UnknownSuite(f"unknown suite '{', '.join(unknown) or selector}'; choose from all, {', '.join(SUITES)}")
    return names


def verify_suites(
    selector: str = "all",
    seed: int = 0,
    max_degree: int = 6,
    preset: str = "standard",
    sizes: SampleSizes = SampleSizes(),
) -> dict:
    """
    Run the selected suites; identity failures are rows, never exceptions.

    Raises:
        UnknownSuite: for an unknown selector
    """
    report = {"seed": seed, "max_degree": max_degree, "words": sizes.words, "triples": sizes.triples, "suites": []}
    for name in select_suites(selector):
        log(f"🧪 Running suite '{name}'")
        try:
            kwargs = {"preset": preset} if name == "suq2" else {}
            rows = SUITES[name](seed, max_degree, sizes, **kwargs)
        except PodlesError as e:
            rows = [{"identity": name, "anchor": "suite", "status": "fail", "counterexample": str(e)}]
        passed = sum(1 for row in rows if row["status"] == "pass")
        failed = sum(1 for row in rows if row["status"] == "fail")
        skipped = len(rows) - passed - failed
        log(f"{'✅' if not failed else '❌'} Suite '{name}': {passed} passed, {failed} failed, {skipped} skipped")
        report["suites"].append({"suite": name, "passed": passed, "failed": failed, "skipped": skipped, "rows": rows})
    for key in ("passed", "failed", "skipped"):
        report[key] = sum(s[key] for s in report["suites"])
    return report


# ---------------- COMMANDS ---------------- #


def _grade(x: Any) -> int:
    if isinstance(x, (FormElement, LocalElement)):
        return max(x.grades(), default=0)
    return 0


def _commutator(a: Any, b: Any) -> Any:
    sign = -1 if _grade(a) % 2 and _grade(b) % 2 else 1
    return expression.combine("-", expression.combine("*", a, b), expression.combine("*", b, a) * sign)


def _value(text: str, patch: bool = False) -> Any:
    return expression.evaluate(text, patch=patch)


def _uses_patch(*texts: str) -> bool:
    return any(expression.uses_patch(expression.parse(text)) for text in texts)


def _render_w(coefficients: Mapping[Tuple[int, int], sympy.Expr]) -> str:
    if not coefficients:
        return "0"
    parts = []
    for (eps, epsb), expr in sorted(coefficients.items()):
        basis = " * ".join(name for name, on in (("dw", eps), ("dwb", epsb)) if on)
        parts.append(f"({expr})" + (f" * {basis}" if basis else ""))
    return " + ".join(parts)


def _w_json(coefficients: Mapping[Tuple[int, int], sympy.Expr]) -> dict:
    return {
        "kind": "ClassicalW",
        "value": [{"eps": eps, "epsbar": epsb, "coeff": str(expr)} for (eps, epsb), expr in sorted(coefficients.items())],
        "text": _render_w(coefficients),
    }


def _as_value(value: Any) -> Tuple[Any, str]:
    return expression.to_json(value), expression.render_value(value)


def _star(value: Any, variant: str) -> Any:
    if isinstance(value, FracElement):
        return value
    if isinstance(value, LocalElement):
        return star_local(value)
    if isinstance(value, (FuncElement, FormElement, DiffOp)):
        return star_calc(value, variant)
    raise PodlesError(f"star is not defined on {expression.kind(value)} elements")


def _act(op: Any, target: Any) -> Any:
    if isinstance(op, VectorOp):
        return vf_act(op, target)
    if isinstance(op, DiffOp):
        if isinstance(target, FracElement):
            target = FuncElement.from_scalar(target)
        if not isinstance(target, FuncElement):
            raise PodlesError("derivative operators act on functions only")
        return apply_diffop(op, target)
    raise PodlesError(f"{expression.kind(op)} elements do not act; use a DiffOp or a VectorOp")


def _integrate(value: Any, domain: str) -> Tuple[Any, str]:
    if isinstance(value, FracElement):
        value = FuncElement.from_scalar(value)
    if not isinstance(value, FuncElement):
        raise PodlesError("only functions can be integrated")
    if domain == "sphere":
        result = integral_value(value)
    elif domain == "plane":
        result = plane_integral_value(value)
    else:
        raise PodlesError(f"unknown integration domain '{domain}'")
    return {"value": render(result.value), "status": result.status}, render(result.value)


def _limit(value: Any, pole_order: int) -> Tuple[Any, str]:
    if isinstance(value, FracElement):
        result = classical_limit(value, pole_order)
        return {"kind": "Rational", "value": str(result)}, str(result)
    if isinstance(value, LocalElement):
        coefficients = classical_in_w(value, pole_order)
        return _w_json(coefficients), _render_w(coefficients)
    return _as_value(classical_limit_elem(value, pole_order))


def dispatch(cmd: str, args: Sequence[str], flags: Mapping[str, Any]) -> Tuple[Any, str, int]:
    """
    Route one command to its module; returns (json result, text, exit code).

    Raises:
        PodlesError: parse and domain errors, mapped to exit codes by the caller
    """
    if cmd not in COMMANDS:
        raise PodlesError(f"unknown command '{cmd}'; choose from {', '.join(COMMANDS)}")
    if len(args) != COMMANDS[cmd]:
        raise PodlesError(f"'{cmd}' expects {COMMANDS[cmd]} argument(s), got {len(args)}")

    if cmd == "verify":
        report = verify_suites(
            flags.get("suite") or "all",
            int(flags.get("seed", 0)),
            int(flags.get("max_degree", 6)),
            flags.get("preset") or "standard",
            SampleSizes(int(flags.get("words", 500)), int(flags.get("triples", 50))),
        )
        return report, format_report(report), 3 if report["failed"] else 0
    if cmd == "normalize":
        return (*_as_value(_value(args[0])), 0)
    if cmd == "mul":
        return (*_as_value(expression.combine("*", _value(args[0]), _value(args[1]))), 0)
    if cmd == "comm":
        patch = _uses_patch(*args)
        return (*_as_value(_commutator(_value(args[0], patch), _value(args[1], patch))), 0)
    if cmd == "star":
        patch = _uses_patch(args[0])
        return (*_as_value(_star(_value(args[0], patch), flags.get("variant") or "sphere")), 0)
    if cmd == "d":
        value = _value(args[0])
        if isinstance(value, FracElement):
            return (*_as_value(FormElement.zero()), 0)
        if not isinstance(value, (FuncElement, FormElement)):
            raise PodlesError(f"d is not defined on {expression.kind(value)} elements")
        return (*_as_value(exterior_d(value)), 0)
    if cmd == "act":
        return (*_as_value(_act(_value(args[0]), _value(args[1]))), 0)
    if cmd == "integrate":
        return (*_integrate(_value(args[0]), flags.get("domain") or "sphere"), 0)
    if cmd == "pb":
        if _uses_patch(*args):
            coefficients = poisson_bracket_w(_value(args[0], True), _value(args[1], True))
            return _w_json(coefficients), _render_w(coefficients), 0
        return (*_as_value(poisson_bracket(_value(args[0]), _value(args[1]))), 0)
    if cmd == "patch":
        target = flags.get("to") or "w"
        value = _value(args[0], patch=True)
        if target == "w":
            return (*_as_value(value), 0)
        if target == "classical":
            coefficients = classical_in_w(value)
            return _w_json(coefficients), _render_w(coefficients), 0
        raise PodlesError(f"unknown patch target '{target}'")
    return (*_limit(_value(args[0]), int(flags.get("pole_order", 0))), 0)


def format_report(report: dict) -> str:
    lines = []
    for suite in report["suites"]:
        lines.append(f"== {suite['suite']}: {suite['passed']} passed, {suite['failed']} failed, {suite.get('skipped', 0)} skipped")
        for row in suite["rows"]:
            line = f"  [{row['status'].upper()}] {row['identity']}  ({row['anchor']})"
            if row.get("counterexample"):
                line += f"\n      counterexample: {row['counterexample']}"
            lines.append(line)
    lines.append(f"total: {report['passed']} passed, {report['failed']} failed, {report.get('skipped', 0)} skipped")
    return "\n".join(lines)


def envelope(cmd: str, result: Any = None, error: Optional[dict] = None) -> dict:
    payload = {"version": VERSION, "command": cmd}
    if error is not None:
        payload["error"] = error
    else:
        payload["result"] = result
    return payload


def run_command(cmd: str, args: Sequence[str] = (), flags: Optional[Mapping[str, Any]] = None) -> Tuple[int, str]:
    """
    Execute a command and render it; never raises for engine errors.

    Returns:
        (exit code, output text): 0 ok, 1 ParseError, 2 domain error, 3 VerificationFailure
    """
    flags = dict(flags or {})
    as_json = flags.get("format", "text") == "json"
    try:
        result, text, code = dispatch(cmd, list(args), flags)
    except PodlesError as e:
        if as_json:
            return e.exit_code, json.dumps(envelope(cmd, error=e.to_dict()), indent=2)
        return e.exit_code, f"error: {e.code}: {e}"
    except (ValueError, TypeError, ZeroDivisionError) as e:
        error = {"code": "DomainError", "message": str(e)}
        if as_json:
            return 2, json.dumps(envelope(cmd, error=error), indent=2)
        return 2, f"error: DomainError: {e}"
    if as_json:
        return code, json.dumps(envelope(cmd, result=result), indent=2)
    return code, text


class SuiteOrchestrator:
    """
    Command execution with metrics

    Modes:
    - text : human readable output
    - json : versioned envelope {version, command, result|error}
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.max_degree = self.settings.max_degree
        self.metrics = MetricsLogger()

    def default_flags(self) -> dict:
        return {
            "format": "text",
            "seed": self.settings.seed,
            "max_degree": self.max_degree,
            "preset": self.settings.suq2_convention,
            "words": self.settings.word_count,
            "triples": self.settings.jacobi_triples,
        }

    def process_command(self, cmd: str, args: Sequence[str] = (), flags: Optional[Mapping[str, Any]] = None) -> dict:
        """Run one command and return the parsed JSON envelope plus the exit code"""
        start_time = time.time()
        merged = {**self.default_flags(), **{k: v for k, v in (flags or {}).items() if v is not None}, "format": "json"}
        exit_code, output = run_command(cmd, args, merged)
        latency = time.time() - start_time
        payload = json.loads(output)

        result = payload.get("result") if isinstance(payload.get("result"), dict) else {}
        self.metrics.log_run(
            command=cmd,
            latency=latency,
            exit_code=exit_code,
            passed=result.get("passed", 0) if cmd == "verify" else 0,
            failed=result.get("failed", 0) if cmd == "verify" else 0,
            suites=[s["suite"] for s in result.get("suites", [])] if cmd == "verify" else [],
        )
        return {**payload, "exit_code": exit_code, "latency_ms": round(latency * 1000, 2)}

    def verify(self, suite: str = "all", seed: Optional[int] = None) -> dict:
        flags = {"suite": suite}
        if seed is not None:
            flags["seed"] = seed
        return self.process_command("verify", (), flags)

    def get_orchestrator_stats(self) -> dict:
        return {
            "summary": self.metrics.get_summary(),
            "suite_comparison": self.metrics.get_suite_comparison(),
            "recent_runs": self.metrics.get_recent_metrics(limit=5),
        }
