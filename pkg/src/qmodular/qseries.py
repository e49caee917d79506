"""Truncated Laurent series in q^(1/N) with exact rational coefficients.

A :class:`QExp` stores the coefficient of ``q^(k/N)`` under the integer key
``k``.  Every coefficient with ``k < trunc`` is known (absent keys are zero);
nothing is known from ``q^(trunc/N)`` on.  Values are immutable.

Operator overloads are provided for convenience (``+ - * / **`` with other
series or rational scalars); the module-level functions are the same
operations under their plain names.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping, Union

from .errors import OutOfWindow, ZeroSeries

__all__ = [
    "QExp", "align", "add", "neg", "scale", "mul", "inv", "power", "D",
    "product_expansion", "coeff", "eq",
]

Scalar = Union[int, Fraction]


def _exact(value) -> Scalar:
    """Coerce to int when integral, otherwise to Fraction.

    Keeping integral coefficients as ``int`` makes the common case (integer
    q-expansions) several times faster than carrying Fractions everywhere.
    """
    if isinstance(value, int):
        return value
    if not isinstance(value, (Rational, str)):
        raise TypeError(f"exact rational expected, got {value!r}")
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


def _is_scalar(x) -> bool:
    return isinstance(x, Rational)


def _numerator_bound(order, granularity: int) -> int:
    """Smallest integer T with T/N >= order, i.e. exponents < order are kept."""
    return math.ceil(Fraction(order) * granularity)


class QExp:
    """Truncated Laurent series ``sum c_k q^(k/N) + O(q^(trunc/N))``."""

    __slots__ = ("granularity", "trunc", "_c")

    def __init__(self, coeffs: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = (),
                 trunc: int = 0, granularity: int = 1):
        granularity = int(granularity)
        if granularity < 1:
            raise ValueError("granularity must be a positive integer")
        trunc = int(trunc)
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Scalar] = {}
        for k, v in items:
            k = int(k)
            if k < trunc:
                acc[k] = acc.get(k, 0) + _exact(v)
        self.granularity = granularity
        self.trunc = trunc
        self._c = {k: _exact(acc[k]) for k in sorted(acc) if acc[k] != 0}

    @classmethod
    def _raw(cls, coeffs: dict[int, Scalar], trunc: int, granularity: int) -> "QExp":
        # internal fast path: keys are ints, values already exact
        obj = cls.__new__(cls)
        obj.granularity = granularity
        obj.trunc = trunc
        obj._c = {k: _exact(coeffs[k]) for k in sorted(coeffs)
                  if k < trunc and coeffs[k] != 0}
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_list(cls, values: Iterable[Scalar], start: int = 0,
                  granularity: int = 1, trunc: int | None = None) -> "QExp":
        """Dense coefficients for exponent numerators start, start+1, ..."""
        values = list(values)
        if trunc is None:
            trunc = start + len(values)
        return cls({start + i: v for i, v in enumerate(values)}, trunc, granularity)

    @classmethod
    def constant(cls, c: Scalar, order) -> "QExp":
        return cls({0: c}, _numerator_bound(order, 1), 1)

    @classmethod
    def monomial(cls, exponent, order, c: Scalar = 1) -> "QExp":
        """``c * q^exponent`` known for all exponents below ``order``."""
        e = Fraction(exponent)
        N = e.denominator
        return cls({e.numerator: c}, _numerator_bound(order, N), N)

    # -- inspection -------------------------------------------------------

    @property
    def coeffs(self) -> Mapping[int, Scalar]:
        return MappingProxyType(self._c)

    @property
    def order(self) -> Fraction:
        """Exclusive exponent bound of the known window."""
        return Fraction(self.trunc, self.granularity)

    @property
    def valuation(self) -> int:
        """Lowest exponent numerator that may be nonzero (trunc if none stored)."""
        for k in self._c:
            return k
        return self.trunc

    @property
    def lowest_exponent(self) -> Fraction | None:
        for k in self._c:
            return Fraction(k, self.granularity)
        return None

    def is_zero(self) -> bool:
        return not self._c

    def items(self) -> Iterator[tuple[Fraction, Fraction]]:
        """(exponent, coefficient) pairs in increasing exponent order."""
        N = self.granularity
        for k, v in self._c.items():
            yield Fraction(k, N), Fraction(v)

    def coeff(self, exponent) -> Fraction:
        return coeff(self, exponent)

    def coefficients(self, start, stop) -> list[Fraction]:
        """Coefficients of q^start, q^(start+1), ..., q^(stop-1)."""
        return [self.coeff(e) for e in range(start, stop)]

    def identical(self, other: "QExp") -> bool:
        """Representation equality: same granularity, truncation and terms."""
        return (self.granularity == other.granularity and self.trunc == other.trunc
                and self._c == other._c)

    def rescaled(self, factor: int) -> "QExp":
        """Same series written over granularity ``factor * N``."""
        if factor == 1:
            return self
        return QExp._raw({k * factor: v for k, v in self._c.items()},
                         self.trunc * factor, self.granularity * factor)

    def truncate(self, order) -> "QExp":
        T = min(self.trunc, _numerator_bound(order, self.granularity))
        return QExp._raw(self._c, T, self.granularity)

    def shift(self, exponent) -> "QExp":
        """Exact multiplication by q^exponent."""
        e = Fraction(exponent)
        a = self.rescaled(_lcm(self.granularity, e.denominator) // self.granularity)
        s = e.numerator * (a.granularity // e.denominator)
        return QExp._raw({k + s: v for k, v in a._c.items()}, a.trunc + s, a.granularity)

    def __repr__(self) -> str:
        return f"QExp({self.to_text()})"

    def to_text(self, max_terms: int = 8) -> str:
        parts = []
        for i, (e, c) in enumerate(self.items()):
            if i == max_terms:
                parts.append("...")
                break
            parts.append(_term_text(c, e))
        parts.append(f"O({_mono_text(self.order)})")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    # -- operators --------------------------------------------------------

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __add__(self, other):
        if _is_scalar(other):
            return _add_scalar(self, other)
        if isinstance(other, QExp):
            return add(self, other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if _is_scalar(other):
            return _add_scalar(self, -other)
        if isinstance(other, QExp):
            return add(self, neg(other))
        return NotImplemented

    def __rsub__(self, other):
        if _is_scalar(other):
            return _add_scalar(neg(self), other)
        return NotImplemented

    def __mul__(self, other):
        if _is_scalar(other):
            return scale(self, other)
        if isinstance(other, QExp):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            return scale(self, Fraction(1) / Fraction(other))
        if isinstance(other, QExp):
            return mul(self, inv(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return scale(inv(self), other)
        return NotImplemented

    def __pow__(self, n):
        if isinstance(n, int):
            return power(self, n)
        return NotImplemented


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _mono_text(e: Fraction) -> str:
    if e == 0:
        return "1"
    if e == 1:
        return "q"
    return f"q^{e}" if e.denominator == 1 and e > 0 else f"q^({e})"


def _term_text(c: Fraction, e: Fraction) -> str:
    if e == 0:
        return str(c)
    if c == 1:
        return _mono_text(e)
    if c == -1:
        return "-" + _mono_text(e)
    return f"{c}*{_mono_text(e)}"


# -- ring operations --------------------------------------------------------

def align(a: QExp, b: QExp) -> tuple[QExp, QExp]:
    """Rewrite both series over the common granularity lcm(N_a, N_b)."""
    L = _lcm(a.granularity, b.granularity)
    return a.rescaled(L // a.granularity), b.rescaled(L // b.granularity)


def add(a: QExp, b: QExp) -> QExp:
    a, b = align(a, b)
    T = min(a.trunc, b.trunc)
    out = dict(a._c)
    for k, v in b._c.items():
        out[k] = out.get(k, 0) + v
    return QExp._raw(out, T, a.granularity)


def neg(a: QExp) -> QExp:
    return QExp._raw({k: -v for k, v in a._c.items()}, a.trunc, a.granularity)


def scale(a: QExp, c) -> QExp:
    c = _exact(c)
    if c == 0:
        return QExp._raw({}, a.trunc, a.granularity)
    return QExp._raw({k: v * c for k, v in a._c.items()}, a.trunc, a.granularity)


def _add_scalar(a: QExp, c) -> QExp:
    out = dict(a._c)
    out[0] = out.get(0, 0) + _exact(c)
    return QExp._raw(out, a.trunc, a.granularity)


def mul(a: QExp, b: QExp) -> QExp:
    """Cauchy product.

    With valuations v_a, v_b the product is known below
    ``min(T_a + v_b, T_b + v_a)``.
    """
    a, b = align(a, b)
    T = min(a.trunc + b.valuation, b.trunc + a.valuation)
    bi = list(b._c.items())
    out: dict[int, Scalar] = {}
    get = out.get
    for ka, ca in a._c.items():
        lim = T - ka
        for kb, cb in bi:
            if kb >= lim:
                break
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return QExp._raw(out, T, a.granularity)


def inv(a: QExp) -> QExp:
    """Multiplicative inverse ``q^(-v) * (u)^(-1)`` where ``a = q^v * u``."""
    if not a._c:
        raise ZeroSeries("cannot invert a series with no nonzero coefficient")
    items = iter(a._c.items())
    v, lead = next(items)
    n = a.trunc - v
    rest = [(k - v, c) for k, c in items]
    inv_lead = _exact(Fraction(1) / Fraction(lead))
    b: list[Scalar] = [0] * n
    b[0] = inv_lead
    for m in range(1, n):
        s = 0
        for j, uj in rest:
            if j > m:
                break
            bm = b[m - j]
            if bm:
                s += uj * bm
        if s:
            b[m] = _exact(-s * inv_lead)
    return QExp._raw({m - v: c for m, c in enumerate(b) if c}, a.trunc - 2 * v,
                     a.granularity)


def power(a: QExp, n: int) -> QExp:
    """a**n by binary powering; negative n goes through :func:`inv`."""
    n = int(n)
    if n < 0:
        return power(inv(a), -n)
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    if result is None:
        return QExp._raw({0: 1}, max(a.trunc, 1), a.granularity)
    return result


def D(a: QExp) -> QExp:
    """The operator q d/dq: c q^(k/N) -> c (k/N) q^(k/N)."""
    N = a.granularity
    return QExp._raw({k: v * Fraction(k, N) for k, v in a._c.items()},
                     a.trunc, N)


def product_expansion(exponent_fn: Callable[[int], int] | int, order: int,
                      prefactor_exponent=0) -> QExp:
    """``q^p * prod_{k>=1} (1 - q^k)^(e_k)`` known below ``q^(order + p)``.

    Uses the logarithmic-derivative recurrence
    ``n P_n = -sum_{j=1}^n s_j P_{n-j}`` with ``s_j = sum_{d | j} d e_d``,
    which is exact over the integers and O(order^2).
    """
    if not callable(exponent_fn):
        const = int(exponent_fn)
        exponent_fn = lambda k: const  # noqa: E731
    p = Fraction(prefactor_exponent)
    N = p.denominator
    order = max(int(order), 0)
    e = [0] + [int(exponent_fn(k)) for k in range(1, order)]
    s = [0] * order
    for d in range(1, order):
        if e[d]:
            de = d * e[d]
            for j in range(d, order, d):
                s[j] += de
    P = [0] * order
    if order:
        P[0] = 1
    for n in range(1, order):
        acc = 0
        for j in range(1, n + 1):
            if s[j] and P[n - j]:
                acc += s[j] * P[n - j]
        q_, r = divmod(-acc, n)
        if r:
            raise ArithmeticError("non-integral product coefficient")  # cannot happen
        P[n] = q_
    base = p.numerator
    return QExp._raw({base + n * N: c for n, c in enumerate(P) if c},
                     base + order * N, N)


# -- inspection helpers -----------------------------------------------------

def coeff(a: QExp, exponent) -> Fraction:
    """Coefficient of q^exponent; raises OutOfWindow beyond the known window."""
    e = Fraction(exponent)
    if e >= a.order:
        raise OutOfWindow(f"exponent {e} is outside the known window (< {a.order})")
    k = e * a.granularity
    if k.denominator != 1:
        return Fraction(0)
    return Fraction(a._c.get(k.numerator, 0))


def eq(a: QExp, b: QExp, through) -> bool:
    """Compare every coefficient with exponent <= ``through``."""
    bound = Fraction(through)
    if bound >= a.order or bound >= b.order:
        raise OutOfWindow(
            f"comparison through {bound} needs windows beyond it "
            f"(have {a.order} and {b.order})")
    a, b = align(a, b)
    limit = bound * a.granularity
    keys = {k for k in a._c if k <= limit} | {k for k in b._c if k <= limit}
    return all(a._c.get(k, 0) == b._c.get(k, 0) for k in keys)
