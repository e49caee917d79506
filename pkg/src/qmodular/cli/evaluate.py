"""Evaluation of parsed expressions to q-expansions, and the JSON series document."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from ..enumgeo import abelian_series, hirzebruch_series, k3_series, mirror_F
from ..errors import ComputationError, InsufficientOrder
from ..forms import Normalization, delta, eisenstein, eta, jacobi_theta_z
from ..lattice import builtin_lattice, theta_series
from ..qseries import D, QExp
from .parser import BinOp, Call, Deriv, FormExpr, Name, Neg, Num, Pow, QPow, parse, to_text

__all__ = ["evaluate", "evaluate_text", "SeriesDocument"]

_BOOSTS = (0, 2, 4, 8, 16, 32, 64)


def _leaf(node: FormExpr, L: int) -> QExp:
    if isinstance(node, QPow):
        return QExp.monomial(node.exponent, L)
    if isinstance(node, Name):
        n = node.name
        if n == "Delta":
            return delta(L)
        if n == "eta":
            return eta(L)
        if n == "theta_Z":
            return jacobi_theta_z(L)
        if n == "theta_E8":
            return theta_series(builtin_lattice("E8"), Fraction(2 * L - 1, 2))
        if n.startswith("Ehat"):
            return eisenstein(int(n[4:]), Normalization.EHAT, L)
        return eisenstein(int(n[1:]), order=L)
    f, args = node.func, node.args
    if f == "k3":
        return k3_series(args[0], L)
    if f == "abelian":
        return abelian_series(args[0], L)
    if f == "mirrorF":
        return mirror_F(args[0], L, *args[1:])
    return hirzebruch_series(args[0], L)


def _eval(node: FormExpr, L: int, memo: dict):
    """QExp, or a Fraction for constant subexpressions."""
    if isinstance(node, Num):
        return Fraction(node.value)
    if isinstance(node, (Name, QPow, Call)):
        if node not in memo:
            memo[node] = _leaf(node, L)
        return memo[node]
    if isinstance(node, Neg):
        return -_eval(node.operand, L, memo)
    if isinstance(node, Deriv):
        inner = _eval(node.operand, L, memo)
        return Fraction(0) if isinstance(inner, Fraction) else D(inner)
    if isinstance(node, Pow):
        base = _eval(node.base, L, memo)
        if isinstance(base, Fraction) and base == 0 and node.exponent < 0:
            raise ComputationError("zero raised to a negative power")
        return base ** node.exponent
    if isinstance(node, BinOp):
        a = _eval(node.left, L, memo)
        b = _eval(node.right, L, memo)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if isinstance(b, Fraction) and b == 0:
            raise ComputationError("division by zero")
        return a / b
    raise TypeError(f"not a form expression: {node!r}")


def evaluate(node: FormExpr, order) -> QExp:
    """The series of ``node`` with every exponent below ``order`` known.

    Leaves are expanded a little past ``order`` and the margin grows until
    division and negative powers have left enough of the window intact.
    """
    order = Fraction(order)
    for boost in _BOOSTS:
        L = max(math.ceil(order) + boost, 1)
        value = _eval(node, L, {})
        if isinstance(value, Fraction):
            return QExp.constant(value, order)
        if value.order >= order:
            return value.truncate(order)
    raise InsufficientOrder(
        f"could not reach order {order} for {to_text(node)} (best {value.order})")


def evaluate_text(text: str, order) -> QExp:
    return evaluate(parse(text), order)


@dataclass(frozen=True)
class SeriesDocument:
    """Serialized series: exponents are numerators over ``granularity``."""
    granularity: int
    truncation: int
    coefficients: tuple[tuple[int, Fraction], ...]
    provenance: str = ""

    @classmethod
    def from_series(cls, f: QExp, provenance: str = "") -> "SeriesDocument":
        return cls(f.granularity, f.trunc,
                   tuple((k, Fraction(c)) for k, c in f.coeffs.items()), provenance)

    def to_series(self) -> QExp:
        return QExp(dict(self.coefficients), self.truncation, self.granularity)

    def to_json(self) -> dict:
        return {
            "granularity": self.granularity,
            "truncation": self.truncation,
            "coefficients": [[k, str(c)] for k, c in self.coefficients],
            "provenance": self.provenance,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, doc: dict) -> "SeriesDocument":
        coeffs = []
        last = None
        for k, text in doc["coefficients"]:
            if not isinstance(k, int) or not isinstance(text, str):
                raise ValueError(f"malformed coefficient entry {[k, text]!r}")
            c = Fraction(text)
            if str(c) != text:
                raise ValueError(f"coefficient {text!r} is not in lowest terms")
            if last is not None and k <= last:
                raise ValueError("exponents must be strictly increasing")
            last = k
            coeffs.append((k, c))
        return cls(int(doc["granularity"]), int(doc["truncation"]), tuple(coeffs),
                   str(doc.get("provenance", "")))

    @classmethod
    def loads(cls, text: str) -> "SeriesDocument":
        return cls.from_json(json.loads(text))
