"""Theta series of positive-definite integral lattices.

Vectors are enumerated with the Fincke-Pohst scheme: the Gram matrix is
written as sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2 with exact rational q, and
each coordinate is confined to the interval left over by the coordinates
already fixed.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import NotPositiveDefinite, UnknownLattice
from .qseries import QExp

__all__ = [
    "Lattice", "theta_series", "vector_count", "norm_counts", "builtin_lattice",
    "E8_GRAM", "load_lattice",
]

# E8 root lattice: 7-node chain with the branch node attached to the third.
_E8_BONDS = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]
E8_GRAM = tuple(
    tuple(2 if i == j else (-1 if (i, j) in _E8_BONDS or (j, i) in _E8_BONDS else 0)
          for j in range(8))
    for i in range(8))


def _pohst_form(gram) -> list[list[Fraction]]:
    """Cohen's quadratic-form decomposition; raises if not positive definite."""
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        if q[i][i] <= 0:
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for m in range(k, n):
                q[k][m] -= q[k][i] * q[i][m]
    return q


@dataclass(frozen=True)
class Lattice:
    rank: int
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        if len(gram) != self.rank or any(len(row) != self.rank for row in gram):
            raise ValueError(f"Gram matrix must be {self.rank}x{self.rank}")
        if any(gram[i][j] != gram[j][i] for i in range(self.rank) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        _pohst_form(gram)
        object.__setattr__(self, "gram", gram)

    @classmethod
    def from_gram(cls, gram) -> "Lattice":
        gram = [list(row) for row in gram]
        return cls(len(gram), tuple(tuple(r) for r in gram))

    @property
    def determinant(self) -> int:
        q = _pohst_form(self.gram)
        det = Fraction(1)
        for i in range(self.rank):
            det *= q[i][i]
        return int(det)

    def norm(self, x) -> int:
        g = self.gram
        return sum(g[i][j] * x[i] * x[j] for i in range(self.rank) for j in range(self.rank))

    def direct_sum(self, other: "Lattice") -> "Lattice":
        r, s = self.rank, other.rank
        rows = [list(row) + [0] * s for row in self.gram]
        rows += [[0] * r + list(row) for row in other.gram]
        return Lattice.from_gram(rows)

    def to_json(self) -> dict:
        return {"rank": self.rank, "gram": [list(row) for row in self.gram]}

    @classmethod
    def from_json(cls, doc: dict) -> "Lattice":
        return cls(int(doc["rank"]), tuple(tuple(row) for row in doc["gram"]))


def load_lattice(path) -> Lattice:
    return Lattice.from_json(json.loads(Path(path).read_text()))


def builtin_lattice(name: str, rank: int | None = None) -> Lattice:
    """``builtin_lattice("E8")`` or ``builtin_lattice("Zn", r)``."""
    key = name.strip().lower()
    if key == "e8":
        return Lattice(8, E8_GRAM)
    if key in ("zn", "z"):
        if rank is None or rank < 0:
            raise ValueError("Zn needs a non-negative rank")
        return Lattice(rank, tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank)))
    raise UnknownLattice(name)


def norm_counts(L: Lattice, bound: int) -> Counter:
    """Counter {n: #{x : x^T G x = n}} for all n <= bound.

    Interval pruning runs in floating point on the exact decomposition, widened
    by a relative margin so no vector is lost; every candidate reaching the
    innermost coordinate is accepted or rejected by its exact integer norm.
    """
    n = L.rank
    counts: Counter = Counter()
    if n == 0:
        counts[0] = 1
        return counts
    if bound < 0:
        return counts
    qf = [[float(v) for v in row] for row in _pohst_form(L.gram)]
    G = L.gram
    g00 = G[0][0]
    x = [0] * n
    slack = 1e-9 * (bound + 1)

    def leaf(lo, hi):
        rest = 0
        lin = 0
        for i in range(1, n):
            xi = x[i]
            if xi:
                Gi = G[i]
                lin += G[0][i] * xi
                for j in range(1, n):
                    if x[j]:
                        rest += Gi[j] * xi * x[j]
        lin2 = 2 * lin
        for x0 in range(lo, hi + 1):
            val = (g00 * x0 + lin2) * x0 + rest
            if val <= bound:
                counts[val] += 1

    def recurse(i, remaining):
        qi = qf[i]
        u = 0.0
        for j in range(i + 1, n):
            if x[j]:
                u += qi[j] * x[j]
        r = math.sqrt(max(remaining, 0.0) / qi[i]) + 1e-7
        lo = math.ceil(-u - r)
        hi = math.floor(-u + r)
        if i == 0:
            leaf(lo, hi)
            return
        qii = qi[i]
        for xi in range(lo, hi + 1):
            t = xi + u
            rem = remaining - qii * t * t
            if rem >= -slack:
                x[i] = xi
                recurse(i - 1, rem)
        x[i] = 0

    recurse(n - 1, bound + slack)
    return counts


def theta_series(L: Lattice, max_exponent=10) -> QExp:
    """sum over lattice vectors of q^(x.x/2) for exponents <= max_exponent.

    Granularity 2; Z^n gives half-integer exponents, even lattices integer ones.
    """
    M = Fraction(max_exponent)
    if M < 0:
        raise ValueError("max_exponent must be non-negative")
    bound = math.floor(2 * M)
    counts = norm_counts(L, bound)
    return QExp(dict(counts), bound + 1, 2)


def vector_count(L: Lattice, norm: int) -> int:
    """#{x : x^T G x = norm}."""
    if norm < 0:
        raise ValueError("norm must be non-negative")
    return norm_counts(L, norm)[norm]
