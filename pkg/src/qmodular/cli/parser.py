"""Recursive-descent parser and printer for form expressions.

Grammar (whitespace is insignificant, names are case-sensitive)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | factor
    factor := atom ("^" int)?
    atom   := name | int | "q" ("^" qexp)? | "D" "(" expr ")"
            | func "(" args ")" | "(" expr ")"
    qexp   := int | "(" ["-"] int ["/" int] ")"
    int    := ["-"] digits          (signs only directly after "^")

A bare ``q^1/2`` is rejected: write ``q^(1/2)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import QModularError

__all__ = [
    "ParseError", "UnknownName", "FormExpr", "Name", "Num", "QPow", "BinOp", "Pow",
    "Neg", "Deriv", "Call", "parse", "to_text", "FUNCTIONS", "is_form_name",
]


class ParseError(QModularError, ValueError):
    def __init__(self, message: str, position: int, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class UnknownName(ParseError):
    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(f"unknown name {name!r}", position)


# -- tree ---------------------------------------------------------------------

class FormExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Name(FormExpr):
    name: str


@dataclass(frozen=True)
class Num(FormExpr):
    value: int


@dataclass(frozen=True)
class QPow(FormExpr):
    exponent: Fraction


@dataclass(frozen=True)
class BinOp(FormExpr):
    op: str
    left: FormExpr
    right: FormExpr


@dataclass(frozen=True)
class Pow(FormExpr):
    base: FormExpr
    exponent: int


@dataclass(frozen=True)
class Neg(FormExpr):
    operand: FormExpr


@dataclass(frozen=True)
class Deriv(FormExpr):
    operand: FormExpr


@dataclass(frozen=True)
class Call(FormExpr):
    func: str
    args: tuple   # ints and bare words


_FIXED_NAMES = {"Delta", "eta", "theta_Z", "theta_E8"}
_EIS = re.compile(r"(E|Ehat)([1-9][0-9]*)")

# function name -> allowed argument shapes
FUNCTIONS = {
    "k3": ("int",),
    "abelian": ("int",),
    "mirrorF": ("int", "variant?"),
    "hirzebruch": ("beta",),
}
_VARIANTS = {"printed", "alternate"}


def is_form_name(name: str) -> bool:
    if name in _FIXED_NAMES:
        return True
    m = _EIS.fullmatch(name)
    return bool(m) and int(m.group(2)) % 2 == 0


# -- tokenizer --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))")


@dataclass(frozen=True)
class _Tok:
    kind: str    # "int", "ident", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos == len(text):
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, n: int = 1) -> _Tok:
        return self.toks[min(self.i + n, len(self.toks) - 1)]

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            raise ParseError(f"unexpected {self._desc()}", self.tok.pos, {repr(text)})
        return self.advance()

    def _desc(self) -> str:
        return "end of input" if self.tok.kind == "end" else repr(self.tok.text)

    def signed_int(self) -> int:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "int":
            raise ParseError(f"unexpected {self._desc()}", self.tok.pos, {"integer"})
        return sign * int(self.advance().text)

    # expr := term (("+" | "-") term)*
    def expr(self) -> FormExpr:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> FormExpr:
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> FormExpr:
        if self.at("-"):
            self.advance()
            return Neg(self.unary())
        return self.factor()

    def factor(self) -> FormExpr:
        node = self.atom()
        if self.at("^"):
            self.advance()
            node = Pow(node, self.signed_int())
        return node

    def atom(self) -> FormExpr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Num(int(t.text))
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "ident":
            if t.text == "q":
                self.advance()
                node = QPow(self.q_exponent() if self.at("^") else Fraction(1))
                if self.at("^"):
                    raise ParseError("q already carries an exponent", self.tok.pos)
                return node
            if t.text == "D" and self.peek().text == "(":
                self.advance()
                self.advance()
                node = self.expr()
                self.expect(")")
                return Deriv(node)
            if t.text in FUNCTIONS:
                return self.call()
            if is_form_name(t.text):
                self.advance()
                return Name(t.text)
            raise UnknownName(t.text, t.pos)
        raise ParseError(f"unexpected {self._desc()}", t.pos,
                         {"name", "integer", "'q'", "'D'", "'('", "'-'"})

    def q_exponent(self) -> Fraction:
        self.expect("^")
        if self.at("("):
            self.advance()
            num = self.signed_int()
            den = 1
            if self.at("/"):
                self.advance()
                pos = self.tok.pos
                den = self.signed_int()
                if den <= 0:
                    raise ParseError("exponent denominator must be positive", pos)
            self.expect(")")
            return Fraction(num, den)
        e = self.signed_int()
        if self.at("/") and self.peek().kind == "int":
            raise ParseError("ambiguous q exponent, write q^(p/r)", self.tok.pos, {"'('"})
        return Fraction(e)

    def call(self) -> Call:
        name_tok = self.advance()
        func = name_tok.text
        self.expect("(")
        args = []
        while True:
            if self.tok.kind == "ident":
                args.append(self.advance().text)
            else:
                args.append(self.signed_int())
            if not self.at(","):
                break
            self.advance()
        self.expect(")")
        _check_args(func, tuple(args), name_tok.pos)
        return Call(func, tuple(args))


def _check_args(func: str, args: tuple, pos: int) -> None:
    shapes = FUNCTIONS[func]
    required = [s for s in shapes if not s.endswith("?")]
    if not len(required) <= len(args) <= len(shapes):
        raise ParseError(f"{func} takes {len(required)} to {len(shapes)} arguments", pos)
    for shape, arg in zip(shapes, args):
        kind = shape.rstrip("?")
        ok = (isinstance(arg, int) if kind == "int"
              else arg in _VARIANTS if kind == "variant"
              else arg in ("C", "F"))
        if not ok:
            raise ParseError(f"bad argument {arg!r} to {func}", pos)


def parse(text: str) -> FormExpr:
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "end":
        raise ParseError(f"unexpected {p._desc()}", p.tok.pos,
                         {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"})
    return node


# -- printer ------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG, _POW, _ATOM = 3, 4, 5


def _prec(node: FormExpr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _NEG
    if isinstance(node, Pow) or (isinstance(node, QPow) and node.exponent != 1):
        return _POW
    return _ATOM


def _wrap(node: FormExpr, need: int) -> str:
    s = to_text(node)
    return s if _prec(node) >= need else f"({s})"


def to_text(node: FormExpr) -> str:
    """Text that parses back to the same tree."""
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Num):
        if node.value < 0:
            raise ValueError("integer literals are non-negative; use Neg")
        return str(node.value)
    if isinstance(node, QPow):
        e = node.exponent
        return "q" if e == 1 else f"q^({e})"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        return f"{_wrap(node.left, p)} {node.op} {_wrap(node.right, p + 1)}"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _NEG)
    if isinstance(node, Pow):
        base = node.base
        text = f"({to_text(base)})" if isinstance(base, QPow) else _wrap(base, _ATOM)
        return f"{text}^{node.exponent}"
    if isinstance(node, Deriv):
        return f"D({to_text(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({', '.join(str(a) for a in node.args)})"
    raise TypeError(f"not a form expression: {node!r}")
