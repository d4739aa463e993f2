# crweier/expr.py
"""
Tiny expression language for chart data.

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" unary)?
    atom   := number | "u1" | "u2" | "u3" | "i" | "pi"
            | func "(" expr ")" | "(" expr ")"
    func   := "exp" | "sin" | "cos" | "sqrt" | "log" | "re" | "im" | "conj"

The exponent of ``^`` must fold to an integer constant.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from crweier import jets
from crweier.errors import ExprSyntaxError, UnknownIdentifier
from crweier.jets import Jet


# ── AST ──────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Literal:
    value: complex


@dataclass(frozen=True)
class Coord:
    index: int


@dataclass(frozen=True)
class ImagUnit:
    pass


@dataclass(frozen=True)
class Const:
    name: str = "pi"


@dataclass(frozen=True)
class Unary:
    op: str  # neg | re | im | conj
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Literal, Coord, ImagUnit, Const, Unary, Binary, Power, Call]

FUNCTIONS = jets.ELEMENTARY
UNARY_FUNCTIONS = ("re", "im", "conj")
COORDS = {"u1": 0, "u2": 1, "u3": 2}


# ── tokenizer ────────────────────────────────────────────────────────

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num | ident | op | end
    text: str
    offset: int  # UTF-8 byte offset into the source


def _tokenize(src: str) -> List[_Token]:
    out: List[_Token] = []
    pos = 0

    def byte_offset(char_index: int) -> int:
        return len(src[:char_index].encode("utf-8"))

    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            out.append(_Token("end", "", byte_offset(pos)))
            return out
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(byte_offset(pos), {"number", "identifier", "operator", "("}, src[pos])
        kind = m.lastgroup
        out.append(_Token(kind, m.group(kind), byte_offset(m.start(kind))))
        pos = m.end()


# ── Pratt parser ─────────────────────────────────────────────────────

_INFIX_BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_PREFIX_BP = 25
_POWER_RBP = 29
_OPERAND = frozenset({"number", "identifier", "(", "-", "+"})


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.advance()
        if tok.kind != "op" or tok.text != text:
            raise ExprSyntaxError(tok.offset, {text}, tok.text or "end of input")
        return tok

    def expression(self, rbp: int = 0) -> Expr:
        left = self.prefix(self.advance())
        while True:
            tok = self.peek()
            lbp = _INFIX_BP.get(tok.text, 0) if tok.kind == "op" else 0
            if lbp <= rbp:
                return left
            self.advance()
            left = self.infix(tok, left)

    def prefix(self, tok: _Token) -> Expr:
        if tok.kind == "num":
            return Literal(complex(float(tok.text)))
        if tok.kind == "ident":
            return self.identifier(tok)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if tok.kind == "op" and tok.text == "-":
            return Unary("neg", self.expression(_PREFIX_BP))
        if tok.kind == "op" and tok.text == "+":
            return self.expression(_PREFIX_BP)
        raise ExprSyntaxError(tok.offset, _OPERAND, tok.text or "end of input")

    def identifier(self, tok: _Token) -> Expr:
        name = tok.text
        if name in COORDS:
            return Coord(COORDS[name])
        if name == "i":
            return ImagUnit()
        if name == "pi":
            return Const("pi")
        if name in FUNCTIONS or name in UNARY_FUNCTIONS:
            self.expect("(")
            arg = self.expression()
            self.expect(")")
            return Unary(name, arg) if name in UNARY_FUNCTIONS else Call(name, arg)
        raise UnknownIdentifier(name, tok.offset)

    def infix(self, tok: _Token, left: Expr) -> Expr:
        if tok.text == "^":
            start = self.peek().offset
            exponent = _fold_integer(self.expression(_POWER_RBP))
            if exponent is None:
                raise ExprSyntaxError(start, {"integer constant"}, "non-integer exponent")
            return Power(left, exponent)
        return Binary(tok.text, left, self.expression(_INFIX_BP[tok.text]))


def _fold(node: Expr) -> Optional[complex]:
    match node:
        case Literal(value):
            return value
        case Unary("neg", operand):
            v = _fold(operand)
            return None if v is None else -v
        case Binary(op, left, right):
            a, b = _fold(left), _fold(right)
            if a is None or b is None:
                return None
            if op == "/":
                return None if b == 0 else a / b
            return {"+": a + b, "-": a - b, "*": a * b}[op]
        case Power(base, n):
            v = _fold(base)
            if v is None or (v == 0 and n < 0):
                return None
            return v ** n
    return None


def _fold_integer(node: Expr) -> Optional[int]:
    v = _fold(node)
    if v is None or v.imag != 0 or not float(v.real).is_integer():
        return None
    return int(v.real)


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree."""
    parser = _Parser(src)
    tree = parser.expression()
    tail = parser.peek()
    if tail.kind != "end":
        raise ExprSyntaxError(tail.offset, {"operator", "end of input"}, tail.text)
    return tree


# ── evaluation ───────────────────────────────────────────────────────

def evaluate(node: Expr, point: Sequence[float], order: int) -> Jet:
    """Evaluate ``node`` as a jet of the given order at ``point``."""
    coords = [Jet.variable(k, order, point) for k in range(3)]

    def walk(n: Expr) -> Jet:
        match n:
            case Literal(value):
                return Jet.constant(value, order, point)
            case Coord(index):
                return coords[index]
            case ImagUnit():
                return Jet.constant(1j, order, point)
            case Const():
                return Jet.constant(math.pi, order, point)
            case Unary("neg", operand):
                return -walk(operand)
            case Unary("re", operand):
                return walk(operand).real
            case Unary("im", operand):
                return walk(operand).imag
            case Unary("conj", operand):
                return walk(operand).conj()
            case Binary(op, left, right):
                return jets.jet_arith(walk(left), walk(right),
                                      {"+": "add", "-": "sub", "*": "mul", "/": "div"}[op])
            case Power(base, exponent):
                return walk(base) ** exponent
            case Call(fn, arg):
                return jets.jet_elementary(walk(arg), fn)
        raise TypeError(f"not an expression node: {n!r}")

    return walk(node)


def evaluate_source(src: str, point: Sequence[float], order: int) -> Jet:
    return evaluate(parse(src), point, order)


# ── printing ─────────────────────────────────────────────────────────

_ATOM = 100


def _precedence(node: Expr) -> int:
    match node:
        case Binary(op, _, _):
            return _INFIX_BP[op]
        case Unary("neg", _):
            return _PREFIX_BP
        case Power():
            return _INFIX_BP["^"]
        case Literal(value) if value.imag != 0 or value.real < 0:
            return 0
    return _ATOM


def _wrap(node: Expr, minimum: int) -> str:
    text = to_source(node)
    return f"({text})" if _precedence(node) < minimum else text


def _number(x: float) -> str:
    return format(x, ".17g")


def to_source(node: Expr) -> str:
    """Render ``node`` back to source that parses to the same tree."""
    match node:
        case Literal(value):
            if value.imag == 0:
                return _number(value.real)
            return f"{_number(value.real)} + {_number(value.imag)}*i"
        case Coord(index):
            return f"u{index + 1}"
        case ImagUnit():
            return "i"
        case Const(name):
            return name
        case Unary("neg", operand):
            return "-" + _wrap(operand, _PREFIX_BP)
        case Unary(op, operand) | Call(op, operand):
            return f"{op}({to_source(operand)})"
        case Binary(op, left, right):
            bp = _INFIX_BP[op]
            return f"{_wrap(left, bp)} {op} {_wrap(right, bp + 1)}"
        case Power(base, exponent):
            exp_text = str(exponent) if exponent >= 0 else f"({exponent})"
            return f"{_wrap(base, _ATOM)}^{exp_text}"
    raise TypeError(f"not an expression node: {node!r}")
