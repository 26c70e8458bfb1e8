"""
Expression Language - ASCII surface syntax for every algebra in the engine

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | primary ['^' ['-'] int]
    primary:= number | name | 'qint' '(' ['-'] int ')' | '(' expr ')'

Atoms are z, zb, rhoi, dz, dzb, del, delb, Zp, Zm, H on the sphere, and
w, wb, dw, dwb in the north-pole patch; q, s, lambda are scalars.
"""

from __future__ import annotations
import operator
import re
from dataclasses import dataclass, field
from typing import Any, List, Union

from sympy.polys.fields import FracElement

from app.calculus import DiffOp, FormElement, del_op, delb_op, dz, dzb
from app.combination import Combination
from app.errors import DivisionByZero, ParseError, PatchError, PodlesError
from app.poisson import PoissonElement
from app.wpatch import LocalElement
from app.scalar import LAM, Q, S, arith, qint, render, to_scalar
from app.vfields import VectorOp, h, zm, zp
from app.zalgebra import FuncElement, rho_power, rhoi, z, zb

SPHERE_ATOMS = ("z", "zb", "rhoi", "dz", "dzb", "del", "delb", "Zp", "Zm", "H")
PATCH_ATOMS = ("w", "wb", "dw", "dwb")
SCALAR_ATOMS = ("q", "s", "lambda")
ATOMS = SPHERE_ATOMS + PATCH_ATOMS + SCALAR_ATOMS

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))")


# AST


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Atom:
    name: str
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class QInt:
    n: int


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Atom, QInt, Neg, BinOp, Pow]


# Parser


@dataclass
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character '{text[offset]}'", offset)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    """Recursive descent over the token list"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        if self.current.text != text:
            raise ParseError(f"expected '{text}'", self.current.position)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != "end":
            raise ParseError(f"unexpected '{self.current.text}'", self.current.position)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.current.text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.current.text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.current.text == "-":
            self.advance()
            return Neg(self.factor())
        node = self.primary()
        if self.current.text == "^":
            self.advance()
            node = Pow(node, self.signed_int())
        return node

    def signed_int(self) -> int:
        sign = 1
        if self.current.text in ("-", "+"):
            sign = -1 if self.advance().text == "-" else 1
        if self.current.kind != "num":
            raise ParseError("expected an integer", self.current.position)
        return sign * int(self.advance().text)

    def primary(self) -> Node:
        token = self.current
        if token.kind == "num":
            self.advance()
            return Num(int(token.text))
        if token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if token.kind == "name":
            self.advance()
            if token.text == "qint":
                self.expect("(")
                n = self.signed_int()
                self.expect(")")
                return QInt(n)
            if token.text not in ATOMS:
                raise ParseError(f"unknown atom '{token.text}'", token.position)
            return Atom(token.text, token.position)
        raise ParseError(f"unexpected '{token.text or 'end of input'}'", token.position)


def parse(text: str) -> Node:
    """
    Raises:
        ParseError: with the offset of the offending token
    """
    return Parser(text).parse()


# Printer


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_source(node: Node, parent: int = 0) -> str:
    """Inverse of parse up to whitespace and redundant parentheses"""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Atom):
        return node.name
    if isinstance(node, QInt):
        return f"qint({node.n})"
    if isinstance(node, Neg):
        text = f"-{to_source(node.operand, 3)}"
        return f"({text})" if parent >= 2 else text
    if isinstance(node, Pow):
        return f"{to_source(node.base, 4)}^{node.exponent}"
    level = _PRECEDENCE[node.op]
    left = to_source(node.left, level)
    right = to_source(node.right, level + 1)
    text = f"{left} {node.op} {right}"
    return f"({text})" if parent > level else text


# Evaluation

Value = Union[FracElement, Combination]


def kind(value: Any) -> str:
    if isinstance(value, FracElement):
        return "Scalar"
    if isinstance(value, FuncElement):
        return "Func"
    if isinstance(value, FormElement):
        return "Form"
    if isinstance(value, DiffOp):
        return "DiffOp"
    if isinstance(value, VectorOp):
        return "VectorOp"
    if isinstance(value, LocalElement):
        return "Local"
    if isinstance(value, PoissonElement):
        # classical limits keep the sphere kinds
        return "Form" if value.grades() - {0} else "Func"
    raise PodlesError(f"no kind for {type(value).__name__}")


class Evaluator:
    """
    Evaluates an AST on the sphere, or in the north-pole patch when patch=True.

    Raises:
        ParseError: for patch atoms outside the patch context
        PatchError: for sphere operators inside the patch
        PodlesError: for products that no algebra defines
    """

    def __init__(self, patch: bool = False):
        self.patch = patch

    def atom(self, node: Atom) -> Value:
        name = node.name
        if name == "q":
            return Q
        if name == "s":
            return S
        if name == "lambda":
            return LAM
        if self.patch:
            return self._patch_atom(node)
        if name in PATCH_ATOMS:
            raise ParseError(f"'{name}' is only available in the north-pole patch", node.position)
        return {
            "z": z,
            "zb": zb,
            "rhoi": rhoi,
            "dz": dz,
            "dzb": dzb,
            "del": del_op,
            "delb": delb_op,
            "Zp": zp,
            "Zm": zm,
            "H": h,
        }[name]()

    def _patch_atom(self, node: Atom) -> Value:
        from app import wpatch

        gens = wpatch.w_generators()
        table = {
            "w": gens.w,
            "wb": gens.wb,
            "dw": gens.dw,
            "dwb": gens.dwb,
            "z": wpatch.z_local(),
            "zb": wpatch.zb_local(),
            "rhoi": wpatch.local(1 / wpatch.RHO),
            "dz": wpatch.dz_local(),
            "dzb": wpatch.dzb_local(),
        }
        if node.name not in table:
            raise PatchError(f"'{node.name}' is not defined in the north-pole patch")
        return table[node.name]

    def evaluate(self, node: Node) -> Value:
        if isinstance(node, Num):
            return to_scalar(node.value)
        if isinstance(node, QInt):
            return qint(node.n)
        if isinstance(node, Atom):
            return self.atom(node)
        if isinstance(node, Neg):
            return -self.evaluate(node.operand)
        if isinstance(node, Pow):
            return self.power(node)
        return combine(node.op, self.evaluate(node.left), self.evaluate(node.right))

    def power(self, node: Pow) -> Value:
        n = node.exponent
        if isinstance(node.base, Atom) and node.base.name == "rhoi" and not self.patch:
            return rho_power(-n)
        base = self.evaluate(node.base)
        if isinstance(base, FracElement):
            if not base and n < 0:
                raise DivisionByZero("negative power of zero")
            return base**n
        if n >= 0:
            return base**n
        if self.patch:
            from app.wpatch import local_inverse

            return local_inverse(base) ** (-n)
        raise PodlesError(f"negative powers of {kind(base)} elements are only defined in the patch")


_OPS = {"+": operator.add, "-": operator.sub, "*": operator.mul}


def combine(op: str, left: Value, right: Value) -> Value:
    """Arithmetic across the algebra tower; scalars act centrally"""
    if isinstance(left, FracElement) and isinstance(right, FracElement):
        return arith(left, right, {"+": "add", "-": "sub", "*": "mul", "/": "div"}[op])
    if op == "/":
        if not isinstance(right, FracElement):
            raise PodlesError("division is only defined by scalars")
        return left.scale(arith(1, right, "div"))
    if isinstance(left, FracElement):
        if op == "+":
            return right + left
        if op == "-":
            return (-right) + left
        return right.scale(left)
    try:
        return _OPS[op](left, right)
    except TypeError:
        raise PodlesError(f"cannot combine {kind(left)} and {kind(right)} with '{op}'") from None


def evaluate(text: str, patch: bool = False) -> Value:
    return Evaluator(patch).evaluate(parse(text))


def render_value(value: Value) -> str:
    if isinstance(value, FracElement):
        return render(value)
    return value.render()


def to_json(value: Value) -> Any:
    if isinstance(value, FracElement):
        return {"kind": "Scalar", "value": render_value(value)}
    payload = value.to_json() if hasattr(value, "to_json") else value.render()
    return {"kind": kind(value), "value": payload, "text": value.render()}


def uses_patch(node: Node) -> bool:
    """Whether an expression mentions w, wb, dw or dwb"""
    if isinstance(node, Atom):
        return node.name in PATCH_ATOMS
    if isinstance(node, Neg):
        return uses_patch(node.operand)
    if isinstance(node, Pow):
        return uses_patch(node.base)
    if isinstance(node, BinOp):
        return uses_patch(node.left) or uses_patch(node.right)
    return False
