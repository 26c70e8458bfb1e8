"""
SU_q(2) Origin - the localized quantum group behind the stereographic coordinates

PBW monomials are stored as (i, j, k) meaning alpha^i beta^j gamma^k for
i >= 0 and delta^-i beta^j gamma^k for i < 0; j and k may be negative since
beta and gamma are inverted. The q-convention is a preset: "standard"
(alpha beta = q beta alpha, alpha delta = 1 + q beta gamma) or "inverted"
(q -> 1/q). Only the standard one reproduces the sphere relations.
"""

from __future__ import annotations
import random
from functools import lru_cache
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from app.checks import check_row, is_zero, require
from app.combination import Combination, power
from app.rewriting import LinComb, RewriteSystem, Word, add_term, lincomb
from app.scalar import ONE, Scalar, qpow
from app.zalgebra import (
    PODLES_LETTERS,
    PODLES_RULES,
    evaluate_comb,
    evaluate_word,
    podles_relations,
)

PRESETS = ("standard", "inverted")
LETTERS = ("a", "d", "b", "bi", "c", "ci")

MOBIUS_TOLERANCE = 1e-12


class SKey(NamedTuple):
    i: int
    j: int
    k: int


UNIT = SKey(0, 0, 0)


class SUq2Element(Combination):
    """Element of the localized SU_q(2); concrete classes are bound to one preset"""

    unit_key = UNIT
    algebra: "SUq2Algebra"

    def _product(self, other: "SUq2Element") -> "SUq2Element":
        out: Dict[SKey, Scalar] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                for key, c in self.algebra.mul_mono(k1, k2).items():
                    add_term(out, key, c1 * c2 * c)
        return type(self)._raw(out)

    def factors(self, key: SKey) -> List[str]:
        head = power("alpha", key.i) if key.i >= 0 else power("delta", -key.i)
        return head + power("beta", key.j) + power("gamma", key.k)


class TensorElement(Combination):
    """Two mutually commuting copies: primed entries (a, b, c, d) times the plain ones"""

    unit_key = (UNIT, UNIT)
    algebra: "SUq2Algebra"

    def _product(self, other: "TensorElement") -> "TensorElement":
        out: Dict[Tuple[SKey, SKey], Scalar] = {}
        mul = self.algebra.mul_mono
        for (p1, u1), c1 in self.terms.items():
            for (p2, u2), c2 in other.terms.items():
                for kp, vp in mul(p1, p2).items():
                    for ku, vu in mul(u1, u2).items():
                        add_term(out, (kp, ku), c1 * c2 * vp * vu)
        return type(self)._raw(out)

    def factors(self, key: Tuple[SKey, SKey]) -> List[str]:
        primed, plain = key
        head = power("a", primed.i) if primed.i >= 0 else power("d", -primed.i)
        tail = power("alpha", plain.i) if plain.i >= 0 else power("delta", -plain.i)
        return (
            head + power("b", primed.j) + power("c", primed.k)
            + tail + power("beta", plain.j) + power("gamma", plain.k)
        )


class SUq2Algebra:
    """
    One q-convention of the localized SU_q(2).

    Args:
        preset: "standard" or "inverted"

    Raises:
        ValueError: for an unknown preset
    """

    def __init__(self, preset: str = "standard"):
        if preset not in PRESETS:
            raise ValueError(f"unknown SU_q(2) preset '{preset}'")
        self.preset = preset
        self.p = qpow(1) if preset == "standard" else qpow(-1)
        self.element_type = type("SUq2Element", (SUq2Element,), {"algebra": self, "__slots__": ()})
        self.tensor_type = type("TensorElement", (TensorElement,), {"algebra": self, "__slots__": ()})
        self._mono_cache: Dict[Tuple[SKey, SKey], Dict[SKey, Scalar]] = {}
        self._head_cache: Dict[Tuple[str, int, int], Dict[SKey, Scalar]] = {}
        self.rules = RewriteSystem(self._pair_rules())

    def __repr__(self) -> str:
        return f"SUq2Algebra('{self.preset}')"

    # Elements

    def element(self, key: SKey, coeff=1) -> SUq2Element:
        return self.element_type({key: coeff})

    def generators(self) -> Dict[str, SUq2Element]:
        return {
            "a": self.element(SKey(1, 0, 0)),
            "d": self.element(SKey(-1, 0, 0)),
            "b": self.element(SKey(0, 1, 0)),
            "bi": self.element(SKey(0, -1, 0)),
            "c": self.element(SKey(0, 0, 1)),
            "ci": self.element(SKey(0, 0, -1)),
        }

    # PBW product

    def _alpha_delta(self, i: int, n: int) -> Dict[SKey, Scalar]:
        """alpha^i delta^n in PBW form"""
        key = ("ad", i, n)
        cached = self._head_cache.get(key)
        if cached is not None:
            return cached
        if i == 0 or n == 0:
            result = {SKey(i - n, 0, 0): ONE}
        else:
            # alpha delta = 1 + p beta gamma, then beta gamma moves past delta^(n-1)
            factor = self.p ** (2 * n - 1)
            result = {}
            for k, v in self._alpha_delta(i - 1, n - 1).items():
                add_term(result, k, v)
                add_term(result, SKey(k.i, k.j + 1, k.k + 1), v * factor)
        self._head_cache[key] = result
        return result

    def _delta_alpha(self, n: int, i: int) -> Dict[SKey, Scalar]:
        """delta^n alpha^i in PBW form"""
        key = ("da", n, i)
        cached = self._head_cache.get(key)
        if cached is not None:
            return cached
        if i == 0 or n == 0:
            result = {SKey(i - n, 0, 0): ONE}
        else:
            factor = self.p ** (1 - 2 * i)
            result = {}
            for k, v in self._delta_alpha(n - 1, i - 1).items():
                add_term(result, k, v)
                add_term(result, SKey(k.i, k.j + 1, k.k + 1), v * factor)
        self._head_cache[key] = result
        return result

    def mul_mono(self, x: SKey, y: SKey) -> Dict[SKey, Scalar]:
        cache_key = (x, y)
        cached = self._mono_cache.get(cache_key)
        if cached is not None:
            return cached
        # beta^j gamma^k of x moves right past the alpha or delta head of y
        twist = self.p ** (-y.i * (x.j + x.k))
        if x.i >= 0 and y.i >= 0 or x.i <= 0 and y.i <= 0:
            head = {SKey(x.i + y.i, 0, 0): ONE}
        elif x.i > 0:
            head = self._alpha_delta(x.i, -y.i)
        else:
            head = self._delta_alpha(-x.i, y.i)
        result: Dict[SKey, Scalar] = {}
        for k, v in head.items():
            add_term(result, SKey(k.i, k.j + x.j + y.j, k.k + x.k + y.k), v * twist)
        self._mono_cache[cache_key] = result
        return result

    # Word normalization

    def _pair_rules(self) -> Dict[Tuple[str, str], LinComb]:
        p, pi = self.p, self.p ** -1
        rules = {
            ("a", "d"): lincomb((1, ()), (p, ("b", "c"))),
            ("d", "a"): lincomb((1, ()), (pi, ("b", "c"))),
            ("b", "bi"): lincomb((1, ())),
            ("bi", "b"): lincomb((1, ())),
            ("c", "ci"): lincomb((1, ())),
            ("ci", "c"): lincomb((1, ())),
        }
        for x in ("b", "c"):
            rules[(x, "a")] = lincomb((pi, ("a", x)))
            rules[(x + "i", "a")] = lincomb((p, ("a", x + "i")))
            rules[(x, "d")] = lincomb((p, ("d", x)))
            rules[(x + "i", "d")] = lincomb((pi, ("d", x + "i")))
        for x in ("c", "ci"):
            for y in ("b", "bi"):
                rules[(x, y)] = lincomb((1, (y, x)))
        return rules

    @staticmethod
    def word_key(word: Word) -> SKey:
        count = {letter: word.count(letter) for letter in LETTERS}
        return SKey(count["a"] - count["d"], count["b"] - count["bi"], count["c"] - count["ci"])

    def normalize(self, comb: Dict[Word, Scalar], strategy: str = "leftmost") -> SUq2Element:
        out: Dict[SKey, Scalar] = {}
        for word, c in self.rules.normalize(comb, strategy).items():
            add_term(out, self.word_key(word), c)
        return self.element_type._raw(out)

    # Involution

    def star(self, x: SUq2Element) -> SUq2Element:
        """Antilinear antimultiplicative; alpha* = delta, beta* = -p gamma, gamma* = -p^-1 beta"""
        total = self.element_type.zero()
        for key, c in x.items():
            gamma_star = self.element(SKey(0, key.k, 0), (-self.p ** -1) ** key.k)
            beta_star = self.element(SKey(0, 0, key.j), (-self.p) ** key.j)
            head_star = self.element(SKey(-key.i, 0, 0))
            total = total + gamma_star * beta_star * head_star * c
        return total

    def relations(self, a, b, c, d, unit=None) -> List[Tuple[str, object]]:
        """Residuals of the defining SU_q(2) relations for any four elements"""
        p, pi = self.p, self.p ** -1
        one = unit if unit is not None else a.one()
        return [
            ("alpha beta = p beta alpha", a * b - b * a * p),
            ("alpha gamma = p gamma alpha", a * c - c * a * p),
            ("beta delta = p delta beta", b * d - d * b * p),
            ("gamma delta = p delta gamma", c * d - d * c * p),
            ("beta gamma = gamma beta", b * c - c * b),
            ("alpha delta = 1 + p beta gamma", a * d - one - b * c * p),
            ("delta alpha = 1 + p^-1 beta gamma", d * a - one - b * c * pi),
        ]


@lru_cache(maxsize=None)
def get_algebra(preset: str = "standard") -> SUq2Algebra:
    return SUq2Algebra(preset)


def normalize_suq2(comb: Dict[Word, Scalar], preset: str = "standard", strategy: str = "leftmost") -> SUq2Element:
    return get_algebra(preset).normalize(comb, strategy)


def star_suq2(x: SUq2Element) -> SUq2Element:
    return x.algebra.star(x)


# Stereographic images


class StereographicImages(NamedTuple):
    z: SUq2Element
    zb: SUq2Element
    bm: SUq2Element
    bp: SUq2Element
    b3: SUq2Element


def stereographic_candidates(preset: str = "standard") -> StereographicImages:
    g = get_algebra(preset).generators()
    return StereographicImages(
        z=g["a"] * g["ci"],
        zb=-(g["d"] * g["bi"]),
        bm=g["a"] * g["b"],
        bp=g["c"] * g["d"],
        b3=g["a"] * g["d"],
    )


def stereographic_residuals(preset: str = "standard") -> List[Tuple[str, object]]:
    algebra = get_algebra(preset)
    img = stereographic_candidates(preset)
    one = algebra.element_type.one()
    rows = [
        ("z zb = q^-2 zb z + q^-2 - 1", img.z * img.zb - img.zb * img.z * qpow(-2) - (qpow(-2) - 1)),
        ("zb = z*", algebra.star(img.z) - img.zb),
        ("z (1 - b3) = -q b-", img.z * (one - img.b3) + img.bm * qpow(1)),
        ("zb (1 - b3) = b+", img.zb * (one - img.b3) - img.bp),
    ]
    rows.extend(podles_relations(img.bm, img.bp, img.b3, algebra.star))
    return rows


def stereographic_elements(preset: str = "standard") -> StereographicImages:
    """
    z = alpha gamma^-1, zb = -delta beta^-1 and the Podles generators inside SU_q(2).

    Raises:
        VerificationFailure: at the first relation the preset breaks
    """
    for identity, residual in stereographic_residuals(preset):
        require(identity, residual, f"preset {preset}")
    return stereographic_candidates(preset)


# Podles algebra -> SU_q(2)


def podles_images(preset: str = "standard") -> Dict[str, SUq2Element]:
    img = stereographic_candidates(preset)
    return {"bm": img.bm, "bp": img.bp, "b3": img.b3}


def random_words(letters: Sequence[str], count: int, max_length: int, seed: int) -> List[Word]:
    rng = random.Random(seed)
    return [
        tuple(rng.choice(letters) for _ in range(rng.randint(1, max_length)))
        for _ in range(count)
    ]


def homomorphism_residual(word: Word, preset: str = "standard") -> SUq2Element:
    """image(normal form of word) - image(word) under b-, b+, b3 -> alpha beta, gamma delta, alpha delta"""
    images = podles_images(preset)
    unit = get_algebra(preset).element_type.one()
    normal = evaluate_comb(PODLES_RULES.normal_form(word), images, unit)
    return normal - evaluate_word(word, images, unit)


def pbw_residual(word: Word, preset: str = "standard", strategy: str = "leftmost") -> SUq2Element:
    """Rewriting normal form against the closed-form PBW product"""
    algebra = get_algebra(preset)
    direct = evaluate_word(word, algebra.generators(), algebra.element_type.one())
    return algebra.normalize({word: ONE}, strategy) - direct


# Coaction


def coaction_images(preset: str = "standard") -> Dict[str, TensorElement]:
    """alpha'' = a alpha + b gamma and so on, from T'' = T' T"""
    algebra = get_algebra(preset)
    T = algebra.tensor_type

    def primed(key: SKey) -> TensorElement:
        return T({(key, UNIT): 1})

    def plain(key: SKey) -> TensorElement:
        return T({(UNIT, key): 1})

    a, d = primed(SKey(1, 0, 0)), primed(SKey(-1, 0, 0))
    b, c = primed(SKey(0, 1, 0)), primed(SKey(0, 0, 1))
    alpha, delta = plain(SKey(1, 0, 0)), plain(SKey(-1, 0, 0))
    beta, gamma = plain(SKey(0, 1, 0)), plain(SKey(0, 0, 1))
    return {
        "alpha": a * alpha + b * gamma,
        "beta": a * beta + b * delta,
        "gamma": c * alpha + d * gamma,
        "delta": c * beta + d * delta,
    }


def counit_specialize(x: TensorElement) -> SUq2Element:
    """a = d = 1, b = c = 0 on the primed copy"""
    algebra = x.algebra
    out: Dict[SKey, Scalar] = {}
    for (primed, plain), c in x.items():
        if primed.j or primed.k:
            continue
        add_term(out, plain, c)
    return algebra.element_type._raw(out)


def coaction_homomorphism_check(preset: str = "standard") -> List[dict]:
    """
    The coaction respects the SU_q(2) relations and restricts to the identity at a = d = 1.

    Raises:
        VerificationFailure: naming the broken relation
    """
    algebra = get_algebra(preset)
    imgs = coaction_images(preset)
    report = []
    for identity, residual in algebra.relations(imgs["alpha"], imgs["beta"], imgs["gamma"], imgs["delta"]):
        require(f"coaction: {identity}", residual, f"preset {preset}")
        report.append(check_row(f"coaction: {identity}", "coaction", residual))
    g = algebra.generators()
    for name, letter in (("alpha", "a"), ("beta", "b"), ("gamma", "c"), ("delta", "d")):
        residual = counit_specialize(imgs[name]) - g[letter]
        require(f"{name}'' at identity = {name}", residual)
        report.append(check_row(f"{name}'' at identity = {name}", "coaction", residual))
    return report


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """[[x, -conj(y)], [y, conj(x)]] with |x|^2 + |y|^2 = 1"""
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    x, y = complex(v[0], v[1]), complex(v[2], v[3])
    return np.array([[x, -np.conj(y)], [y, np.conj(x)]])


def mobius_check(seed: int, samples: int = 16, tolerance: float = MOBIUS_TOLERANCE) -> Dict[str, object]:
    """
    At q = 1, z'' = alpha''/gamma'' equals (a z + b)/(c z + d) and zb = conj(z).

    Raises:
        VerificationFailure: with the sample index and the observed error
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(samples):
        g, t = random_su2(rng), random_su2(rng)
        if min(abs(t[1, 0]), abs(t[0, 1])) < 1e-6:
            continue
        z = t[0, 0] / t[1, 0]
        zb = -t[1, 1] / t[0, 1]
        moved = g @ t
        z_moved = moved[0, 0] / moved[1, 0]
        mobius = (g[0, 0] * z + g[0, 1]) / (g[1, 0] * z + g[1, 1])
        error = max(abs(z_moved - mobius), abs(zb - np.conj(z)))
        worst = max(worst, float(error))
        if error > tolerance:
            require("z'' = (a z + b)(c z + d)^-1", False, f"sample {n}: error {error:.3e}")
    return {"samples": samples, "max_error": worst, "tolerance": tolerance}


def verify_suq2(preset: str = "standard", seed: int = 0, word_count: int = 12) -> List[dict]:
    """Report rows for the SU_q(2) suite; failures are reported, not raised"""
    rows = [
        check_row(identity, f"stereographic ({preset})", residual)
        for identity, residual in stereographic_residuals(preset)
    ]
    for word in random_words(PODLES_LETTERS, word_count, 5, seed):
        rows.append(check_row(f"hom: {' '.join(word)}", "Podles -> SU_q(2)", homomorphism_residual(word, preset)))
    for word in random_words(LETTERS, word_count, 6, seed + 1):
        rows.append(check_row(f"pbw: {' '.join(word)}", "localized PBW", pbw_residual(word, preset)))
    algebra = get_algebra(preset)
    imgs = coaction_images(preset)
    for identity, residual in algebra.relations(imgs["alpha"], imgs["beta"], imgs["gamma"], imgs["delta"]):
        rows.append(check_row(f"coaction: {identity}", "coaction", residual))
    return rows


def is_sphere_compatible(preset: str) -> bool:
    return all(is_zero(residual) for _, residual in stereographic_residuals(preset))


