"""
Vector Fields - the right-invariant fields Zp, Zm, H and their smash product

Each generator O is a twisted derivation: O f = (O|>f) + theta_O(f) O, where
theta multiplies anything of charge c (z, dz: +1, zb, dzb: -1) by q^{2tc},
t = 1 for Zp, Zm and t = 2 for H. Operator words are kept in PBW order
Zp^i H^j Zm^k with coefficient forms on the left.
"""

from __future__ import annotations
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, List, Mapping, NamedTuple, Sequence, Tuple

from app.calculus import (
    FORM_RULES,
    DiffOp,
    FormElement,
    FormKey,
    apply_diffop,
    del_op,
    delb_op,
    dz,
    dzb,
    exterior_d,
    form,
    form_word_key,
)
from app.checks import require
from app.combination import Combination, power
from app.errors import SingularDiagonal
from app.rewriting import LinComb, RewriteSystem, Word, add_term, lincomb
from app.scalar import LAM, ONE, Scalar, ScalarLike, qpow, render, spow, to_scalar
from app.zalgebra import UNIT, FuncElement, FuncMonomial, evaluate_comb, monomial, rho_power, rhoi, z, zb

GENERATORS = ("Zp", "H", "Zm")
TWIST = {"Zp": 1, "Zm": 1, "H": 2}

Pbw = Tuple[int, int, int]


def form_charge(key: FormKey) -> int:
    return key.mono.charge + key.eps - key.epsb


def theta(gen: str, omega: FormElement) -> FormElement:
    t = TWIST[gen]
    return FormElement._raw({k: c * qpow(2 * t * form_charge(k)) for k, c in omega.terms.items()})


# Actions on functions and forms


@lru_cache(maxsize=None)
def _letter_action(gen: str) -> Dict[str, FuncElement]:
    one_plus = 1 + qpow(2)
    if gen == "Zp":
        images = {"z": z() * z() * spow(1), "zb": FuncElement.from_scalar(spow(-3))}
    elif gen == "H":
        images = {"z": z() * one_plus, "zb": zb() * (-qpow(-4) * one_plus)}
    elif gen == "Zm":
        images = {"z": FuncElement.from_scalar(-spow(1)), "zb": zb() * zb() * (-spow(-3))}
    else:
        raise ValueError(f"unknown vector field '{gen}'")
    t = TWIST[gen]
    # O|>rho = (O|>zb) z + theta(zb) (O|>z); O|>rhoi = -rhoi (O|>rho) rhoi
    act_rho = images["zb"] * z() + zb() * images["z"] * qpow(-2 * t)
    images["rhoi"] = -(rhoi() * act_rho * rhoi())
    return images


@lru_cache(maxsize=None)
def _act_mono(gen: str, mono: FuncMonomial) -> FuncElement:
    m, a, b = mono
    if mono == UNIT:
        return FuncElement.zero()
    if m:
        letter, rest, charge = "rhoi", FuncMonomial(m - 1, a, b), 0
    elif a:
        letter, rest, charge = "zb", FuncMonomial(0, a - 1, b), -1
    else:
        letter, rest, charge = "z", FuncMonomial(0, 0, b - 1), 1
    r = FuncElement._raw({rest: ONE})
    x = monomial(*{"rhoi": (1, 0, 0), "zb": (0, 1, 0), "z": (0, 0, 1)}[letter])
    acted = _letter_action(gen)[letter] * r
    return acted + x * _act_mono(gen, rest) * qpow(2 * TWIST[gen] * charge)


def act_func(gen: str, f: FuncElement) -> FuncElement:
    out: Dict[FuncMonomial, Scalar] = {}
    for mono, coeff in f.terms.items():
        for key, c in _act_mono(gen, mono).terms.items():
            add_term(out, key, coeff * c)
    return FuncElement._raw(out)


@lru_cache(maxsize=None)
def _basis_form_action(gen: str, eps: int, epsb: int) -> FormElement:
    """O|>dz = d(O|>z), O|>(dz dzb) = (O|>dz) dzb + theta(dz)(O|>dzb)"""
    images = _letter_action(gen)
    on_dz = exterior_d(images["z"])
    on_dzb = exterior_d(images["zb"])
    if (eps, epsb) == (1, 0):
        return on_dz
    if (eps, epsb) == (0, 1):
        return on_dzb
    if (eps, epsb) == (1, 1):
        return on_dz * dzb() + dz() * on_dzb * qpow(2 * TWIST[gen])
    return FormElement.zero()


def act(gen: str, omega) -> FormElement:
    """O|>omega for a single generator"""
    omega = FormElement.lift(omega)
    out = FormElement.zero()
    for eps, epsb in ((0, 0), (1, 0), (0, 1), (1, 1)):
        f = omega.part(eps, epsb)
        if not f:
            continue
        out = out + form(act_func(gen, f), eps, epsb)
        if eps or epsb:
            twisted = FuncElement._raw({k: c * qpow(2 * TWIST[gen] * k.charge) for k, c in f.terms.items()})
            out = out + FormElement.lift(twisted) * _basis_form_action(gen, eps, epsb)
    return out


# PBW part


@lru_cache(maxsize=None)
def _h_shift(i: int) -> Scalar:
    """constant c_i in H Zp^i = Zp^i (q^{4i} H + c_i)"""
    return (1 + qpow(2)) * sum((qpow(4 * r) for r in range(i)), to_scalar(0))


@lru_cache(maxsize=None)
def pbw_left(gen: str, i: int, j: int, k: int) -> Dict[Pbw, Scalar]:
    """gen * Zp^i H^j Zm^k in PBW order"""
    if gen == "Zp":
        return {(i + 1, j, k): ONE}
    if gen == "H":
        out = {(i, j + 1, k): qpow(4 * i)}
        if _h_shift(i):
            out[(i, j, k)] = _h_shift(i)
        return out
    if gen != "Zm":
        raise ValueError(f"unknown vector field '{gen}'")
    out: Dict[Pbw, Scalar] = {}
    if i == 0:
        # Zm H^j = (q^4 H + 1 + q^2)^j Zm
        for r in range(j + 1):
            add_term(out, (0, r, k + 1), comb(j, r) * qpow(4 * r) * (1 + qpow(2)) ** (j - r))
        return out
    # Zm Zp = q^2 Zp Zm - q H
    for (i2, j2, k2), v in pbw_left("Zm", i - 1, j, k).items():
        for key, w in pbw_left("Zp", i2, j2, k2).items():
            add_term(out, key, qpow(2) * v * w)
    for key, w in pbw_left("H", i - 1, j, k).items():
        add_term(out, key, -qpow(1) * w)
    return out


class VKey(NamedTuple):
    form: FormKey
    i: int
    j: int
    k: int


class VectorOp(Combination):
    """sum omega * Zp^i H^j Zm^k"""

    unit_key = VKey(FormKey(UNIT, 0, 0), 0, 0, 0)

    @classmethod
    def lift(cls, other):
        if isinstance(other, FuncElement):
            other = FormElement.lift(other)
        if isinstance(other, FormElement):
            return cls._raw({VKey(k, 0, 0, 0): c for k, c in other.terms.items()})
        return super().lift(other)

    def _product(self, other: "VectorOp") -> "VectorOp":
        out = VectorOp.zero()
        for key, coeff in self.terms.items():
            y = other
            for gen, count in (("Zm", key.k), ("H", key.j), ("Zp", key.i)):
                for _ in range(count):
                    y = left_generator(gen, y)
            out = out + _left_form(FormElement._raw({key.form: coeff}), y)
        return out

    def function_part(self) -> FormElement:
        """Terms free of vector-field generators (counit projection)"""
        return FormElement._raw({k.form: c for k, c in self.terms.items() if (k.i, k.j, k.k) == (0, 0, 0)})

    def factors(self, key: VKey) -> List[str]:
        f = key.form
        return (
            power("rhoi", f.mono.m)
            + power("zb", f.mono.a)
            + power("z", f.mono.b)
            + power("dz", f.eps)
            + power("dzb", f.epsb)
            + power("Zp", key.i)
            + power("H", key.j)
            + power("Zm", key.k)
        )

    def to_json(self) -> List[dict]:
        return [
            {
                "coeff": render(c),
                "m": k.form.mono.m,
                "a": k.form.mono.a,
                "b": k.form.mono.b,
                "eps": k.form.eps,
                "epsbar": k.form.epsb,
                "Zp": k.i,
                "H": k.j,
                "Zm": k.k,
            }
            for k, c in self.sorted_items()
        ]


def _place(omega: FormElement, pbw: Pbw, scale: Scalar = ONE) -> Iterator[Tuple[VKey, Scalar]]:
    for key, c in omega.terms.items():
        yield VKey(key, *pbw), c * scale


def _left_form(omega: FormElement, y: VectorOp) -> VectorOp:
    pieces = []
    for key, v in y.terms.items():
        prod = omega * FormElement._raw({key.form: v})
        pieces.extend(_place(prod, (key.i, key.j, key.k)))
    return VectorOp.accumulate(pieces)


def left_generator(gen: str, y: VectorOp) -> VectorOp:
    """O (omega X) = (O|>omega) X + theta_O(omega) (O X)"""
    pieces = []
    for key, v in y.terms.items():
        omega = FormElement._raw({key.form: v})
        pbw = (key.i, key.j, key.k)
        pieces.extend(_place(act(gen, omega), pbw))
        twisted = theta(gen, omega)
        for new_pbw, w in pbw_left(gen, *pbw).items():
            pieces.extend(_place(twisted, new_pbw, w))
    return VectorOp.accumulate(pieces)


def vector_field(gen: str) -> VectorOp:
    pbw = {"Zp": (1, 0, 0), "H": (0, 1, 0), "Zm": (0, 0, 1)}[gen]
    return VectorOp({VKey(FormKey(UNIT, 0, 0), *pbw): ONE})


def zp() -> VectorOp:
    return vector_field("Zp")


def zm() -> VectorOp:
    return vector_field("Zm")


def h() -> VectorOp:
    return vector_field("H")


@lru_cache(maxsize=1)
def letter_images() -> Dict[str, Combination]:
    return {
        "z": VectorOp.lift(z()),
        "zb": VectorOp.lift(zb()),
        "rhoi": VectorOp.lift(rhoi()),
        "dz": VectorOp.lift(dz()),
        "dzb": VectorOp.lift(dzb()),
        "Zp": zp(),
        "Zm": zm(),
        "H": h(),
    }


def normalize_vf(comb_: Mapping[Word, ScalarLike], strategy: str = "leftmost") -> VectorOp:
    """Normal form of smash-product words by rewriting the leftmost or rightmost redex"""
    reduced = smash_rules().normalize(comb_, strategy)
    return VectorOp({vf_word_key(w): c for w, c in reduced.items()})


def multiply_words(comb_: Mapping[Word, ScalarLike]) -> VectorOp:
    """Same element as normalize_vf, as a product of letter images"""
    return evaluate_comb(comb_, letter_images(), VectorOp.one())


def vf_act(op, omega) -> FormElement:
    """Normal-order op * omega and drop every term still carrying a generator"""
    return (VectorOp.lift(op) * VectorOp.lift(omega)).function_part()


def apply_pbw(op: VectorOp, omega) -> FormElement:
    """Same value as vf_act, by composing single-generator actions"""
    omega = FormElement.lift(omega)
    out = FormElement.zero()
    for key, c in op.terms.items():
        value = omega
        for gen, count in (("Zm", key.k), ("H", key.j), ("Zp", key.i)):
            for _ in range(count):
                value = act(gen, value)
        out = out + FormElement._raw({key.form: c}) * value
    return out


# Covariance of relations


_LETTER_CHARGE = {"z": 1, "zb": -1, "rhoi": 0, "dz": 1, "dzb": -1}


def _letter_element(letter: str) -> FormElement:
    return FormElement.lift({"z": z, "zb": zb, "rhoi": rhoi, "dz": dz, "dzb": dzb}[letter]())


def leibniz_action(gen: str, word: Sequence[str]) -> FormElement:
    """O|>(x1...xn) expanded letter by letter, never normalizing the word first"""
    t = TWIST[gen]
    letters = [_letter_element(x) for x in word]
    out = FormElement.zero()
    for i, letter in enumerate(word):
        shift = sum(_LETTER_CHARGE[x] for x in word[:i])
        term = FormElement.one() * qpow(2 * t * shift)
        for x in letters[:i]:
            term = term * x
        term = term * act(gen, letters[i])
        for x in letters[i + 1 :]:
            term = term * x
        out = out + term
    return out


def check_infinitesimal_covariance(relation: Mapping[Word, ScalarLike]) -> List[dict]:
    """
    Apply each generator to a relation (that vanishes in the algebra) and
    confirm both the action part and the twisted remainder vanish.

    Raises:
        VerificationFailure: naming the generator that breaks the relation
    """
    images = {x: _letter_element(x) for x in _LETTER_CHARGE}
    base = evaluate_comb(relation, images, FormElement.one())
    require("relation vanishes before acting", base)
    report = []
    for gen in GENERATORS:
        acted = FormElement.zero()
        remainder = FormElement.zero()
        for word, coeff in relation.items():
            coeff = to_scalar(coeff)
            acted = acted + leibniz_action(gen, word) * coeff
            shift = sum(_LETTER_CHARGE[x] for x in word)
            remainder = remainder + evaluate_comb({word: coeff}, images, FormElement.one()) * qpow(2 * TWIST[gen] * shift)
        require(f"{gen} preserves the relation", acted)
        require(f"theta_{gen} preserves the relation", remainder)
        report.append({"generator": gen, "status": "pass"})
    return report


_STAR_LETTER = {"z": "zb", "zb": "z", "rhoi": "rhoi", "dz": "dzb", "dzb": "dz", "Zp": "Zm", "Zm": "Zp", "H": "H"}


def star_words(comb_: Mapping[Word, ScalarLike]) -> Dict[Word, Scalar]:
    """Formal star on words: reverse, conjugate letters, q* = q"""
    out: Dict[Word, Scalar] = {}
    for word, coeff in comb_.items():
        add_term(out, tuple(_STAR_LETTER[x] for x in reversed(word)), to_scalar(coeff))
    return out


# Smash-product rewriting


def _form_word(key: FormKey) -> Word:
    m, a, b = key.mono
    return ("rhoi",) * m + ("zb",) * a + ("z",) * b + ("dz",) * key.eps + ("dzb",) * key.epsb


def form_words(omega: FormElement) -> LinComb:
    out: LinComb = {}
    for key, c in omega.terms.items():
        add_term(out, _form_word(key), c)
    return out


def vf_word_key(word: Word) -> VKey:
    """Canonical key of an irreducible smash word: form letters, then Zp^i H^j Zm^k"""
    split = next((n for n, x in enumerate(word) if x in TWIST), len(word))
    tail = word[split:]
    i, j, k = tail.count("Zp"), tail.count("H"), tail.count("Zm")
    if tail != ("Zp",) * i + ("H",) * j + ("Zm",) * k:
        raise ValueError(f"word {word} is not in normal form")
    return VKey(form_word_key(word[:split]), i, j, k)


def _function_spans(word: Word):
    # rho contraction only on spans free of vector fields
    for rule in FORM_RULES.word_rules:
        for start, end, replacement in rule(word):
            if not any(x in TWIST for x in word[start:end]):
                yield start, end, replacement


@lru_cache(maxsize=1)
def smash_rules() -> RewriteSystem:
    """O x -> (O|>x) + theta_O(x) x O, plus the PBW reordering of Zp, H, Zm"""
    one_plus = 1 + qpow(2)
    pairs = dict(FORM_RULES.pair_rules)
    pairs[("H", "Zp")] = lincomb((qpow(4), ("Zp", "H")), (one_plus, ("Zp",)))
    pairs[("Zm", "Zp")] = lincomb((qpow(2), ("Zp", "Zm")), (-qpow(1), ("H",)))
    pairs[("Zm", "H")] = lincomb((qpow(4), ("H", "Zm")), (one_plus, ("Zm",)))
    for gen in GENERATORS:
        for letter, charge in _LETTER_CHARGE.items():
            rule = form_words(act(gen, _letter_element(letter)))
            add_term(rule, (letter, gen), qpow(2 * TWIST[gen] * charge))
            pairs[(gen, letter)] = rule
    return RewriteSystem(pairs, [_function_spans])


# Pseudo-differential realizations


def build_bcd() -> Tuple[DiffOp, DiffOp, DiffOp]:
    zdel = DiffOp.lift(z()) * del_op()
    zbdelb = DiffOp.lift(zb()) * delb_op()
    c_op = 1 - zdel * (LAM * qpow(-1))
    d_op = 1 + zbdelb * (LAM * qpow(1))
    b_op = c_op + zbdelb * (LAM * qpow(1)) - DiffOp.lift(rho_power(1)) * delb_op() * del_op() * (LAM**2 * qpow(-2))
    return b_op, c_op, d_op


class InverseTable:
    """D^-1 on polynomials in zb, z up to a total degree"""

    def __init__(self, table: Dict[FuncMonomial, FuncElement], max_total_degree: int):
        self.table = table
        self.max_total_degree = max_total_degree

    def apply(self, f: FuncElement) -> FuncElement:
        out = FuncElement.zero()
        for mono, c in f.terms.items():
            if mono.m or mono.a + mono.b > self.max_total_degree:
                raise ValueError(f"{mono} lies outside the inverse table")
            out = out + self.table[mono] * c
        return out


def polynomial_monomials(max_total_degree: int) -> Iterator[FuncMonomial]:
    for n in range(max_total_degree + 1):
        for a in range(n + 1):
            yield FuncMonomial(0, a, n - a)


def invert_filtered(op: DiffOp, max_total_degree: int) -> InverseTable:
    """
    Invert an operator that preserves total degree and charge on polynomials
    by back-substitution, lowest degree first.

    Raises:
        SingularDiagonal: if some monomial is sent to zero at leading order
    """
    table: Dict[FuncMonomial, FuncElement] = {}
    for mono in polynomial_monomials(max_total_degree):
        image = apply_diffop(op, FuncElement._raw({mono: ONE}))
        diag = image.coeff(mono)
        if not diag:
            raise SingularDiagonal(f"diagonal entry vanishes at zb^{mono.a} z^{mono.b}")
        rest = image - FuncElement._raw({mono: diag})
        for key in rest.terms:
            if key.m or key.a + key.b >= mono.a + mono.b:
                raise SingularDiagonal(f"operator does not lower the filtration at zb^{mono.a} z^{mono.b}")
        table[mono] = (FuncElement._raw({mono: ONE}) - InverseTable(table, max_total_degree).apply(rest)) * (ONE / diag)
    return InverseTable(table, max_total_degree)


@lru_cache(maxsize=8)
def bcd_inverses(max_total_degree: int) -> Tuple[InverseTable, InverseTable, InverseTable]:
    b_op, c_op, d_op = build_bcd()
    return tuple(invert_filtered(op, max_total_degree) for op in (b_op, c_op, d_op))


def rho2_delb_side(bf: FuncElement) -> FuncElement:
    """(Zm z Zp - q^4 Zp z Zm + q^{1/2}(1+q^2) Zp) acting on bf = B|>f"""
    return (
        act_func("Zm", z() * act_func("Zp", bf))
        - act_func("Zp", z() * act_func("Zm", bf)) * qpow(4)
        + act_func("Zp", bf) * (spow(1) * (1 + qpow(2)))
    )


def rho2_del_side(bf: FuncElement) -> FuncElement:
    """(q^4 Zp zb Zm - Zm zb Zp - q^{1/2}(1+q^2) Zm) acting on bf = B|>f"""
    return (
        act_func("Zp", zb() * act_func("Zm", bf)) * qpow(4)
        - act_func("Zm", zb() * act_func("Zp", bf))
        - act_func("Zm", bf) * (spow(1) * (1 + qpow(2)))
    )


def inverse_residuals(max_total_degree: int) -> Iterator[Tuple[str, FuncMonomial, FuncElement]]:
    """X (X^-1 f) - f for X = B, C, D on every polynomial monomial up to the degree"""
    for name, op, inverse in zip("BCD", build_bcd(), bcd_inverses(max_total_degree)):
        for mono in polynomial_monomials(max_total_degree):
            f = FuncElement._raw({mono: ONE})
            yield f"{name} {name}^-1 = id", mono, apply_diffop(op, inverse.apply(f)) - f


def realization_residuals(max_degree: int) -> Iterator[Tuple[str, FuncMonomial, FuncElement]]:
    """(identity, monomial, residual) for every realization identity on zb^a z^b"""
    b_op, _, _ = build_bcd()
    b_inv, c_inv, d_inv = bcd_inverses(max_degree)
    s32 = spow(3)
    z2 = z() * z()
    zb2 = zb() * zb()

    for mono in polynomial_monomials(max_degree):
        f = FuncElement._raw({mono: ONE})

        g = c_inv.apply(f)
        rhs = z2 * apply_diffop(del_op(), g) + apply_diffop(delb_op(), b_inv.apply(g)) * qpow(2)
        yield "q^{3/2} Zp = (z^2 del + q^2 delb B^-1) C^-1", mono, act_func("Zp", f) * s32 - rhs

        g = d_inv.apply(f)
        rhs = zb2 * apply_diffop(delb_op(), g) * qpow(2) + apply_diffop(del_op(), b_inv.apply(g))
        yield "-q^{3/2} Zm = (q^2 zb^2 delb + del B^-1) D^-1", mono, act_func("Zm", f) * (-s32) - rhs

        rhs = (f - b_inv.apply(b_inv.apply(f))) * (ONE / (1 - qpow(2)))
        yield "H = (1 - B^-2)/(1 - q^2)", mono, act_func("H", f) - rhs

        bf = apply_diffop(b_op, f)
        lhs = rho_power(2) * apply_diffop(delb_op(), f) * qpow(-1)
        yield "q^-1 rho^2 delb = (Zm z Zp - q^4 Zp z Zm + q^{1/2}(1+q^2) Zp) B", mono, lhs - rho2_delb_side(bf)

        lhs = rho_power(2) * apply_diffop(del_op(), f) * qpow(-1)
        yield "q^-1 rho^2 del = (q^4 Zp zb Zm - Zm zb Zp - q^{1/2}(1+q^2) Zm) B", mono, lhs - rho2_del_side(bf)


def check_pseudodiff_realizations(max_degree: int) -> List[dict]:
    """
    Raises:
        VerificationFailure: with the identity and the monomial it fails on
    """
    report = []
    for identity, mono, residual in realization_residuals(max_degree):
        require(identity, residual, f"on zb^{mono.a} z^{mono.b}")
        report.append({"identity": identity, "a": mono.a, "b": mono.b, "status": "pass"})
    return report
