"""Structure of the rings of modular and quasi-modular forms for PSL2(Z).

Every modular form of weight k is a unique polynomial in E4, E6, and every
quasi-modular form a unique polynomial in E2, E4, E6.  The decompositions here
recover those polynomials from a q-expansion by an exact linear solve and then
verify the whole known window of the input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .errors import (DepthZero, InsufficientOrder, NotModular, NotQuasiModular,
                     SingularMatrix)
from .forms import delta, eisenstein
from .qseries import QExp, D

__all__ = [
    "ModularPoly", "QuasiModularPoly", "DepthReduction", "dim_mk", "dim_qmk",
    "weight_monomials", "qm_weight_monomials", "monomial_series",
    "decompose_modular", "decompose_modular_inductive", "decompose_quasimodular",
    "depth_reduce_step", "is_cusp", "delta_shift", "derivative_closure_check",
    "algebraic_independence_check", "hnf_2x2", "VERIFY_MARGIN",
]

# extra coefficients beyond dim that must be present and are residual-checked
VERIFY_MARGIN = 10


def _clean(terms) -> dict:
    out = {}
    for key, v in terms.items():
        v = Fraction(v)
        if v:
            out[tuple(int(x) for x in key)] = v
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class ModularPoly:
    """sum c_(a,b) E4^a E6^b, homogeneous of the given weight."""
    weight: int
    terms: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        terms = _clean(self.terms)
        for a, b in terms:
            if a < 0 or b < 0 or 4 * a + 6 * b != self.weight:
                raise ValueError(f"monomial E4^{a} E6^{b} is not of weight {self.weight}")
        object.__setattr__(self, "terms", terms)

    def to_quasi(self) -> "QuasiModularPoly":
        return QuasiModularPoly(self.weight, {(0, a, b): c for (a, b), c in self.terms.items()})

    def to_series(self, order: int) -> QExp:
        return self.to_quasi().to_series(order)

    def __add__(self, other: "ModularPoly") -> "ModularPoly":
        if other.weight != self.weight and self.terms and other.terms:
            raise ValueError("cannot add polynomials of different weight")
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, 0) + c
        return ModularPoly(self.weight if self.terms else other.weight, terms)

    def __mul__(self, other):
        if isinstance(other, ModularPoly):
            terms: dict = {}
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in other.terms.items():
                    key = (a1 + a2, b1 + b2)
                    terms[key] = terms.get(key, 0) + c1 * c2
            return ModularPoly(self.weight + other.weight, terms)
        c = Fraction(other)
        return ModularPoly(self.weight, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __str__(self) -> str:
        return _poly_text(self.terms, ("E4", "E6"))


@dataclass(frozen=True)
class QuasiModularPoly:
    """sum c_(a,b,c) E2^a E4^b E6^c, homogeneous of the given weight."""
    weight: int
    terms: Mapping[tuple[int, int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        terms = _clean(self.terms)
        for a, b, c in terms:
            if min(a, b, c) < 0 or 2 * a + 4 * b + 6 * c != self.weight:
                raise ValueError(
                    f"monomial E2^{a} E4^{b} E6^{c} is not of weight {self.weight}")
        object.__setattr__(self, "terms", terms)

    @property
    def depth(self) -> int:
        return max((a for a, _, _ in self.terms), default=0)

    def to_series(self, order: int) -> QExp:
        total = QExp({}, order)
        for (a, b, c), coef in self.terms.items():
            total = total + monomial_series((a, b, c), order) * coef
        return total

    def __add__(self, other: "QuasiModularPoly") -> "QuasiModularPoly":
        if other.weight != self.weight and self.terms and other.terms:
            raise ValueError("cannot add polynomials of different weight")
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, 0) + c
        return QuasiModularPoly(self.weight if self.terms else other.weight, terms)

    def __sub__(self, other: "QuasiModularPoly") -> "QuasiModularPoly":
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, QuasiModularPoly):
            terms: dict = {}
            for k1, c1 in self.terms.items():
                for k2, c2 in other.terms.items():
                    key = tuple(x + y for x, y in zip(k1, k2))
                    terms[key] = terms.get(key, 0) + c1 * c2
            return QuasiModularPoly(self.weight + other.weight, terms)
        c = Fraction(other)
        return QuasiModularPoly(self.weight, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __str__(self) -> str:
        return _poly_text(self.terms, ("E2", "E4", "E6"))


def _poly_text(terms, names) -> str:
    if not terms:
        return "0"
    parts = []
    for key, c in terms.items():
        mono = " ".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, key) if e)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


# -- dimensions and monomials -------------------------------------------------

def dim_mk(k: int) -> int:
    """dim M_k(PSL2(Z))."""
    if k < 0 or k % 2:
        return 0
    return k // 12 if k % 12 == 2 else k // 12 + 1


def weight_monomials(k: int) -> list[tuple[int, int]]:
    """All (a, b) >= 0 with 4a + 6b = k, ordered by a."""
    if k < 0:
        return []
    return [(a, (k - 4 * a) // 6) for a in range(k // 4 + 1) if (k - 4 * a) % 6 == 0]


def qm_weight_monomials(k: int) -> list[tuple[int, int, int]]:
    """All (a, b, c) >= 0 with 2a + 4b + 6c = k, lexicographic."""
    if k < 0:
        return []
    return [(a, b, c) for a in range(k // 2 + 1)
            for b, c in weight_monomials(k - 2 * a)]


def dim_qmk(k: int) -> int:
    return len(qm_weight_monomials(k))


@lru_cache(maxsize=512)
def _eisenstein_power(weight: int, e: int, order: int) -> QExp:
    if e == 0:
        return QExp({0: 1}, order)
    if e == 1:
        return eisenstein(weight, order=order)
    half = _eisenstein_power(weight, e // 2, order)
    sq = half * half
    return sq * eisenstein(weight, order=order) if e % 2 else sq


@lru_cache(maxsize=4096)
def monomial_series(exps: tuple[int, ...], order: int) -> QExp:
    """E2^a E4^b E6^c for exps = (a, b, c), or E4^a E6^b for exps = (a, b)."""
    if len(exps) == 2:
        exps = (0,) + tuple(exps)
    a, b, c = exps
    out = _eisenstein_power(2, a, order)
    if b:
        out = out * _eisenstein_power(4, b, order)
    if c:
        out = out * _eisenstein_power(6, c, order)
    return out


# -- exact linear algebra -------------------------------------------------

def _integral(f: QExp, error=NotModular) -> QExp:
    """View f as an integer-exponent series; reject negative exponents."""
    N = f.granularity
    if N > 1:
        if any(k % N for k in f.coeffs):
            raise error("series has fractional exponents")
        f = QExp({k // N: v for k, v in f.coeffs.items()}, -(-f.trunc // N))
    if f.coeffs and next(iter(f.coeffs)) < 0:
        raise error("series has a pole at infinity")
    return f


def _solve_prefix(columns: list[QExp], target: QExp, n_rows: int) -> list[Fraction]:
    """Solve sum x_i columns_i = target using rows q^0, q^1, ... in order.

    Rows are added one at a time (fully reduced Gauss-Jordan) until the system
    has full column rank; typically that happens after exactly len(columns)
    rows.  Consistency of the remaining rows is left to the caller.
    """
    n = len(columns)
    pivots: list[tuple[int, list[Fraction], Fraction]] = []
    for r in range(n_rows):
        if len(pivots) == n:
            break
        row = [Fraction(col.coeffs.get(r, 0)) for col in columns]
        rhs = Fraction(target.coeffs.get(r, 0))
        for pc, prow, prhs in pivots:
            f = row[pc]
            if f:
                row = [x - f * y for x, y in zip(row, prow)]
                rhs -= f * prhs
        pc = next((i for i, x in enumerate(row) if x), None)
        if pc is None:
            continue
        piv = row[pc]
        row = [x / piv for x in row]
        rhs /= piv
        for idx, (qc, qrow, qrhs) in enumerate(pivots):
            f = qrow[pc]
            if f:
                pivots[idx] = (qc, [x - f * y for x, y in zip(qrow, row)], qrhs - f * rhs)
        pivots.append((pc, row, rhs))
    if len(pivots) < n:
        raise InsufficientOrder(
            f"monomial basis not separated by the first {n_rows} coefficients")
    x = [Fraction(0)] * n
    for pc, _, rhs in pivots:
        x[pc] = rhs
    return x


def _decompose(f: QExp, monomials: list[tuple], margin: int, error) -> list[Fraction]:
    f = _integral(f, error)
    n = len(monomials)
    available = f.trunc
    if available < n + margin:
        raise InsufficientOrder(
            f"need at least {n + margin} coefficients, series is known to q^{available}")
    if n == 0:
        if f.coeffs:
            raise error("no nonzero form of this weight, but the series is nonzero")
        return []
    columns = [monomial_series(m, available) for m in monomials]
    x = _solve_prefix(columns, f, available)
    residual = f
    for xi, col in zip(x, columns):
        if xi:
            residual = residual - col * xi
    if not residual.is_zero():
        lead = next(iter(residual.coeffs))
        raise error(f"residual nonzero at q^{lead} within the verification window")
    return x


def decompose_modular(f: QExp, k: int, margin: int = VERIFY_MARGIN) -> ModularPoly:
    """The polynomial in E4, E6 whose expansion matches f on its whole window."""
    monos = weight_monomials(k) if k >= 0 and k % 2 == 0 else []
    x = _decompose(f, monos, margin, NotModular)
    return ModularPoly(k, dict(zip(monos, x)))


def decompose_quasimodular(f: QExp, k: int, margin: int = VERIFY_MARGIN) -> QuasiModularPoly:
    """The polynomial in E2, E4, E6 whose expansion matches f on its whole window."""
    monos = qm_weight_monomials(k) if k >= 0 and k % 2 == 0 else []
    x = _decompose(f, monos, margin, NotQuasiModular)
    return QuasiModularPoly(k, dict(zip(monos, x)))


_DELTA_POLY = ModularPoly(12, {(3, 0): Fraction(1, 1728), (0, 2): Fraction(-1, 1728)})


def decompose_modular_inductive(f: QExp, k: int) -> ModularPoly:
    """Greedy decomposition: strip a0 E4^a E6^b, divide the cusp form by Delta,
    recurse on weight k - 12.  Independent of the linear solve above."""
    f = _integral(f)
    monos = weight_monomials(k) if k >= 0 and k % 2 == 0 else []
    if not monos:
        if not f.is_zero():
            raise NotModular(f"nonzero series at weight {k}, which has no forms")
        return ModularPoly(k)
    a0 = f.coeff(0)
    mono = monos[-1]
    rest = f - monomial_series(mono, f.trunc) * a0
    head = ModularPoly(k, {mono: a0})
    if k < 12:
        if not rest.is_zero():
            raise NotModular("residual nonzero after removing the constant term")
        return head
    if rest.trunc <= 1:
        raise InsufficientOrder("window too short to divide by Delta")
    g = rest / delta(rest.trunc)
    return head + decompose_modular_inductive(g, k - 12) * _DELTA_POLY


# -- depth -------------------------------------------------------------------

@dataclass(frozen=True)
class DepthReduction:
    """p = slice * E2^depth + remainder, with slice modular of weight k - 2*depth."""
    depth: int
    slice: ModularPoly
    remainder: QuasiModularPoly

    @property
    def companion(self) -> ModularPoly:
        """f_r with p - f_r (E2/12)^r of lower depth."""
        return self.slice * (12 ** self.depth)


def depth_reduce_step(p: QuasiModularPoly) -> DepthReduction:
    r = p.depth
    if r == 0:
        raise DepthZero("polynomial already has depth 0")
    top = {(b, c): v for (a, b, c), v in p.terms.items() if a == r}
    rest = {key: v for key, v in p.terms.items() if key[0] != r}
    return DepthReduction(r, ModularPoly(p.weight - 2 * r, top),
                          QuasiModularPoly(p.weight, rest))


# -- cusp forms and derivatives ----------------------------------------------

def is_cusp(f: QExp) -> bool:
    lowest = f.lowest_exponent
    return lowest is None or lowest > 0


def delta_shift(f: QExp) -> QExp:
    """f * Delta (multiplication by Delta maps M_k onto S_{k+12})."""
    return f * delta(math.ceil(f.order))


def derivative_closure_check(f: QExp, k: int, margin: int = VERIFY_MARGIN) -> QuasiModularPoly:
    """Decompose D f at weight k + 2; raises NotQuasiModular on failure."""
    return decompose_quasimodular(D(f), k + 2, margin)


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col] / rows[rank][col]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def algebraic_independence_check(max_weight: int, quasi: bool = False) -> bool:
    """For each even k <= max_weight, the leading-coefficient matrix of the
    weight-k monomials (first dim rows) must be nonsingular."""
    for k in range(0, max_weight + 1, 2):
        monos = qm_weight_monomials(k) if quasi else weight_monomials(k)
        n = len(monos)
        if n == 0:
            continue
        cols = [monomial_series(m, n) for m in monos]
        matrix = [[Fraction(c.coeffs.get(r, 0)) for c in cols] for r in range(n)]
        if _rank(matrix) < n:
            return False
    return True


# -- 2x2 Hermite form ----------------------------------------------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf_2x2(matrix) -> tuple[tuple[tuple[int, int], tuple[int, int]],
                              tuple[tuple[int, int], tuple[int, int]]]:
    """Return (H, U) with matrix @ U = H = ((m, r), (0, n)), U in SL2(Z),
    m n = det, 0 <= r < m."""
    (a, b), (c, d) = matrix
    det = a * d - b * c
    if det <= 0:
        raise SingularMatrix(f"determinant must be positive, got {det}")
    g, x, y = _xgcd(c, d)
    if g < 0:
        g, x, y = -g, -x, -y
    # (c, d) U = (0, g); det U = 1
    U = [[d // g, x], [-c // g, y]]
    m = a * U[0][0] + b * U[1][0]
    r = a * U[0][1] + b * U[1][1]
    n = g
    if m < 0:  # cannot happen since m n = det > 0 and n > 0
        raise AssertionError
    t = -(r // m)
    # right-multiply by ((1, t), (0, 1)) to reduce r modulo m
    U = [[U[0][0], U[0][0] * t + U[0][1]], [U[1][0], U[1][0] * t + U[1][1]]]
    r += t * m
    H = ((m, r), (0, n))
    return H, ((U[0][0], U[0][1]), (U[1][0], U[1][1]))
