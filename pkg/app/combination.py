"""
Combination - finitely supported linear combinations with Scalar coefficients

Base class of FuncElement, FormElement, DiffOp, VectorOp and LocalElement.
Subclasses supply the unit key, the product and (optionally) how to lift
elements of a smaller algebra into their own.
"""

from __future__ import annotations
from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Tuple

from sympy import Rational
from sympy.polys.fields import FracElement

from app.rewriting import add_term
from app.scalar import ONE, Scalar, ScalarLike, render, to_scalar


def is_scalar(value: Any) -> bool:
    return isinstance(value, (int, Rational, FracElement))


class Combination:
    unit_key: Hashable = None

    __slots__ = ("terms",)
    __hash__ = None

    def __init__(self, terms: Mapping[Hashable, ScalarLike] | None = None):
        clean: Dict[Hashable, Scalar] = {}
        for key, coeff in (terms or {}).items():
            coeff = to_scalar(coeff)
            if coeff:
                clean[key] = coeff
        self.terms = clean

    @classmethod
    def _raw(cls, terms: Dict[Hashable, Scalar]):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def from_scalar(cls, c: ScalarLike):
        return cls({cls.unit_key: c})

    @classmethod
    def one(cls):
        return cls.from_scalar(ONE)

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def lift(cls, other: Any):
        """Bring `other` into this algebra, or NotImplemented"""
        if isinstance(other, cls):
            return other
        if is_scalar(other):
            return cls.from_scalar(other)
        return NotImplemented

    @classmethod
    def accumulate(cls, pieces: Iterable[Tuple[Hashable, Scalar]]):
        out: Dict[Hashable, Scalar] = {}
        for key, coeff in pieces:
            add_term(out, key, coeff)
        return cls._raw(out)

    def _product(self, other):
        raise NotImplementedError

    # Linear structure

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return self.terms.items()

    def coeff(self, key: Hashable) -> Scalar:
        return self.terms.get(key, to_scalar(0))

    def scale(self, c: ScalarLike):
        c = to_scalar(c)
        if not c:
            return type(self).zero()
        return type(self)._raw({k: v * c for k, v in self.terms.items()})

    def map_coeffs(self, fn: Callable[[Scalar], Scalar]):
        return type(self)({k: fn(v) for k, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        other = type(self).lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            add_term(out, key, coeff)
        return type(self)._raw(out)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = type(self).lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = type(self).lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        lifted = type(self).lift(other)
        if lifted is NotImplemented:
            return NotImplemented
        return self._product(lifted)

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        lifted = type(self).lift(other)
        if lifted is NotImplemented:
            return NotImplemented
        return lifted._product(self)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined for this element")
        result = type(self).one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        lifted = type(self).lift(other)
        if lifted is NotImplemented:
            return NotImplemented
        return self.terms == lifted.terms

    # Rendering

    def sorted_items(self) -> List[Tuple[Hashable, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def factors(self, key: Hashable) -> List[str]:
        raise NotImplementedError

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(format_term(coeff, self.factors(key)) for key, coeff in self.sorted_items())

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.render()})"


def format_term(coeff: Scalar, factors: List[str]) -> str:
    text = render(coeff)
    if not factors:
        return f"({text})" if " " in text else text
    body = " * ".join(factors)
    if coeff == 1:
        return body
    if coeff == -1:
        return f"-{body}"
    return f"({text}) * {body}"


def power(atom: str, n: int) -> List[str]:
    if n == 0:
        return []
    return [atom if n == 1 else f"{atom}^{n}"]
