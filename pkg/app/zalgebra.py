"""
Sphere Algebra - functions on the quantum sphere in the z-patch

Canonical basis: rhoi^m * zb^a * z^b with m >= 1 => min(a, b) = 0, where
rho = 1 + zb*z and z*zb = q^-2 zb*z + q^-2 - 1.

Products are computed through the charge form rho^k * u_c (u_c = z^c for
c >= 0, zb^-c for c < 0), where rho q-commutes with everything:
u_c rho^k = q^{-2ck} rho^k u_c. The word rewrite system below is the
reference normalizer the fast product is tested against.
"""

from __future__ import annotations
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, NamedTuple, Sequence, Tuple

from app.combination import Combination, power
from app.errors import VerificationFailure
from app.rewriting import LinComb, RewriteSystem, Word, add_term, lincomb
from app.scalar import ONE, Scalar, ScalarLike, invert_s, qpow, render, to_scalar

LETTERS = ("rhoi", "zb", "z")

ChargeKey = Tuple[int, int]
Laurent = Dict[int, Scalar]


class FuncMonomial(NamedTuple):
    m: int
    a: int
    b: int

    @property
    def charge(self) -> int:
        return self.b - self.a

    @property
    def degree(self) -> int:
        return self.m + self.a + self.b


UNIT = FuncMonomial(0, 0, 0)


class FuncElement(Combination):
    """Finite linear combination of canonical monomials"""

    unit_key = UNIT

    def _product(self, other: "FuncElement") -> "FuncElement":
        out: Dict[FuncMonomial, Scalar] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                for key, c in _mono_product(k1, k2).items():
                    add_term(out, key, c1 * c2 * c)
        return FuncElement._raw(out)

    def factors(self, key: FuncMonomial) -> List[str]:
        return power("rhoi", key.m) + power("zb", key.a) + power("z", key.b)

    def to_json(self) -> List[dict]:
        return [{"coeff": render(c), "m": k.m, "a": k.a, "b": k.b} for k, c in self.sorted_items()]


def monomial(m: int, a: int, b: int, coeff: ScalarLike = 1) -> FuncElement:
    if m >= 1 and min(a, b) > 0:
        raise ValueError(f"(m={m}, a={a}, b={b}) is not a canonical monomial")
    return FuncElement({FuncMonomial(m, a, b): coeff})


def z() -> FuncElement:
    return monomial(0, 0, 1)


def zb() -> FuncElement:
    return monomial(0, 1, 0)


def rhoi() -> FuncElement:
    return monomial(1, 0, 0)


def rho_power(n: int) -> FuncElement:
    """rho^n for any integer n; positive powers are expanded"""
    return from_charge({(n, 0): ONE})


GENERATORS: Dict[str, Callable[[], FuncElement]] = {"z": z, "zb": zb, "rhoi": rhoi}


# Charge form


@lru_cache(maxsize=None)
def _factor_poly(exponents: Tuple[int, ...]) -> Laurent:
    """prod_e (q^{2e} rho - 1) as {power: coeff}"""
    poly: Laurent = {0: ONE}
    for e in exponents:
        nxt: Laurent = {}
        for k, c in poly.items():
            add_term(nxt, k + 1, c * qpow(2 * e))
            add_term(nxt, k, -c)
        poly = nxt
    return poly


def p_poly(n: int, shift: int = 0) -> Laurent:
    """P_n(q^{2 shift} rho) = prod_{j<n} (q^{2j+2shift} rho - 1); P_n(rho) = zb^n z^n"""
    return _factor_poly(tuple(j + shift for j in range(n)))


def q_poly(n: int, shift: int = 0) -> Laurent:
    """Q_n(q^{2 shift} rho) = prod_{j=1..n} (q^{-2j+2shift} rho - 1); Q_n(rho) = z^n zb^n"""
    return _factor_poly(tuple(shift - j for j in range(1, n + 1)))


@lru_cache(maxsize=None)
def _unit_product(c1: int, c2: int) -> Laurent:
    """u_c1 u_c2 = poly(rho) u_{c1+c2}"""
    if c1 >= 0 and c2 >= 0 or c1 <= 0 and c2 <= 0:
        return {0: ONE}
    if c1 > 0:
        b, a = c1, -c2
        return q_poly(a, -(b - a)) if b >= a else q_poly(b)
    a, b = -c1, c2
    return p_poly(a) if b >= a else p_poly(b, a - b)


def charge_mul(x: Mapping[ChargeKey, Scalar], y: Mapping[ChargeKey, Scalar]) -> Dict[ChargeKey, Scalar]:
    out: Dict[ChargeKey, Scalar] = {}
    for (k1, c1), v1 in x.items():
        for (k2, c2), v2 in y.items():
            twist = v1 * v2 * qpow(-2 * c1 * k2)
            for j, w in _unit_product(c1, c2).items():
                add_term(out, (k1 + k2 + j, c1 + c2), twist * w)
    return out


@lru_cache(maxsize=None)
def _mono_charge(mono: FuncMonomial) -> Dict[ChargeKey, Scalar]:
    m, a, b = mono
    if m >= 1:
        return {(-m, b - a): ONE}
    poly = p_poly(a) if a <= b else p_poly(b, a - b)
    return {(k, b - a): v for k, v in poly.items()}


def to_charge(x: FuncElement) -> Dict[ChargeKey, Scalar]:
    out: Dict[ChargeKey, Scalar] = {}
    for mono, coeff in x.terms.items():
        for key, v in _mono_charge(mono).items():
            add_term(out, key, coeff * v)
    return out


def _basis(n: int, c: int) -> Tuple[Laurent, FuncMonomial]:
    if c >= 0:
        return p_poly(n), FuncMonomial(0, n, n + c)
    return p_poly(n, -c), FuncMonomial(0, n - c, n)


def from_charge(x: Mapping[ChargeKey, Scalar]) -> FuncElement:
    """Triangular change of basis from rho^k u_c back to canonical monomials"""
    out: Dict[FuncMonomial, Scalar] = {}
    by_charge: Dict[int, Laurent] = {}
    for (k, c), v in x.items():
        if not v:
            continue
        if k < 0:
            key = FuncMonomial(-k, 0, c) if c >= 0 else FuncMonomial(-k, -c, 0)
            add_term(out, key, v)
        else:
            add_term(by_charge.setdefault(c, {}), k, v)

    for c, poly in by_charge.items():
        poly = dict(poly)
        while poly:
            n = max(poly)
            basis, key = _basis(n, c)
            factor = poly[n] / basis[n]
            add_term(out, key, factor)
            for j, w in basis.items():
                add_term(poly, j, -factor * w)
    return FuncElement._raw(out)


def charge_decomposition(x: FuncElement) -> Dict[int, Dict[int, Scalar]]:
    """{charge c: {k: coeff of rho^k u_c}}"""
    out: Dict[int, Dict[int, Scalar]] = {}
    for (k, c), v in to_charge(x).items():
        out.setdefault(c, {})[k] = v
    return out


@lru_cache(maxsize=None)
def _mono_product(m1: FuncMonomial, m2: FuncMonomial) -> Dict[FuncMonomial, Scalar]:
    return from_charge(charge_mul(_mono_charge(m1), _mono_charge(m2))).terms


def mul(x: FuncElement, y: FuncElement) -> FuncElement:
    return x * y


def charge_scale(x: FuncElement, t: int) -> FuncElement:
    """Automorphism multiplying each monomial by q^{2 t (b - a)}"""
    if t == 0:
        return x
    return FuncElement._raw({k: c * qpow(2 * t * k.charge) for k, c in x.terms.items()})


# Involutions


def star_func(x: FuncElement) -> FuncElement:
    """z* = zb, (rhoi)* = rhoi, q* = q, antimultiplicative"""
    starred = {(k, -c): v * qpow(2 * c * k) for (k, c), v in to_charge(x).items()}
    return from_charge(starred)


def bar_swap(x: FuncElement) -> FuncElement:
    """Homomorphism z <-> zb with s -> 1/s; sends rhoi to q^2 rhoi"""
    swapped = {(k, -c): invert_s(v) * qpow(-2 * k) for (k, c), v in to_charge(x).items()}
    return from_charge(swapped)


# Reference rewrite system


def _contract_rho(word: Word) -> Iterable[Tuple[int, int, LinComb]]:
    """rhoi u zb z -> q^{2(#zb(u) - #z(u))} u - rhoi u, u free of rhoi"""
    last_rhoi = None
    for i, letter in enumerate(word[:-1]):
        if letter == "rhoi":
            last_rhoi = i
        elif letter == "zb" and word[i + 1] == "z" and last_rhoi is not None:
            middle = word[last_rhoi + 1 : i]
            shift = middle.count("zb") - middle.count("z")
            yield last_rhoi, i + 2, {middle: qpow(2 * shift), ("rhoi",) + middle: -ONE}


SPHERE_RULES = RewriteSystem(
    {
        ("z", "zb"): lincomb((qpow(-2), ("zb", "z")), (qpow(-2) - 1, ())),
        ("z", "rhoi"): lincomb((qpow(2), ("rhoi", "z"))),
        ("zb", "rhoi"): lincomb((qpow(-2), ("rhoi", "zb"))),
    },
    [_contract_rho],
)


def word_key(word: Word) -> FuncMonomial:
    """Canonical monomial of an irreducible word"""
    m, a, b = word.count("rhoi"), word.count("zb"), word.count("z")
    expected = ("rhoi",) * m + ("zb",) * a + ("z",) * b
    if word != expected or (m and min(a, b)):
        raise ValueError(f"word {word} is not in normal form")
    return FuncMonomial(m, a, b)


def normalize(comb: Mapping[Word, ScalarLike], strategy: str = "leftmost") -> FuncElement:
    """Normal form of a combination of words in z, zb, rhoi via the rewrite rules"""
    reduced = SPHERE_RULES.normalize(comb, strategy)
    return FuncElement({word_key(w): c for w, c in reduced.items()})


def normalize_word(word: Sequence[str], coeff: ScalarLike = 1, strategy: str = "leftmost") -> FuncElement:
    return normalize({tuple(word): coeff}, strategy)


def evaluate_word(word: Sequence[str], images: Mapping[str, Combination], unit: Combination) -> Combination:
    """Product of letter images, left to right"""
    result = unit
    for letter in word:
        result = result * images[letter]
    return result


def evaluate_comb(comb: Mapping[Word, ScalarLike], images: Mapping[str, Combination], unit: Combination) -> Combination:
    total = unit * 0
    for word, coeff in comb.items():
        total = total + evaluate_word(word, images, unit) * to_scalar(coeff)
    return total


# Podles generators


PODLES_LETTERS = ("b3", "bm", "bp")
_QI = qpow(-1) - qpow(1)

PODLES_RULES = RewriteSystem(
    {
        ("bm", "b3"): lincomb((qpow(2), ("b3", "bm")), (1 - qpow(2), ("bm",))),
        ("bp", "b3"): lincomb((qpow(-2), ("b3", "bp")), (1 - qpow(-2), ("bp",))),
        ("bm", "bp"): lincomb((qpow(1), ("b3", "b3")), (-qpow(1), ("b3",))),
        ("bp", "bm"): lincomb(
            (qpow(-4), ("bm", "bp")),
            (-qpow(-2) * _QI, ("b3",)),
            (qpow(-2) * _QI, ()),
        ),
    }
)


def podles_relations(bm, bp, b3, star: Callable) -> List[Tuple[str, object]]:
    """Residuals of the defining relations and star structure; all must vanish"""
    q, qi = qpow(1), qpow(-1)
    return [
        ("b3 b- = (1-q^-2) b- + q^-2 b- b3", b3 * bm - bm * (1 - qpow(-2)) - bm * b3 * qpow(-2)),
        ("b3 b+ = b+ (1-q^2) + q^2 b+ b3", b3 * bp - bp * (1 - qpow(2)) - bp * b3 * qpow(2)),
        ("q^-2 b- b+ = q^2 b+ b- + (q^-1-q)(b3-1)", bm * bp * qpow(-2) - bp * bm * qpow(2) - (b3 - 1) * (qi - q)),
        ("b3^2 = b3 + q^-1 b- b+", b3 * b3 - b3 - bm * bp * qi),
        ("b+* = -q^-1 b-", star(bp) + bm * qi),
        ("b-* = -q b+", star(bm) + bp * q),
        ("b3* = b3", star(b3) - b3),
    ]


def podles_candidates() -> Tuple[FuncElement, FuncElement, FuncElement]:
    b3 = 1 - rhoi() * qpow(2)
    bm = z() * rhoi() * (-qpow(1))
    bp = zb() * rhoi() * qpow(2)
    return bm, bp, b3


def podles_generators() -> Tuple[FuncElement, FuncElement, FuncElement]:
    """
    b-, b+, b3 as functions of z, zb, rhoi.

    Raises:
        VerificationFailure: if the stored expressions break a defining relation
    """
    bm, bp, b3 = podles_candidates()
    for name, residual in podles_relations(bm, bp, b3, star_func):
        if residual:
            raise VerificationFailure(name, residual.render())
    return bm, bp, b3
