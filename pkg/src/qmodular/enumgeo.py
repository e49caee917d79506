"""Enumerative generating functions built from quasi-modular forms.

* trivalent Feynman graphs, their automorphism groups and the closed-form
  graph amplitudes of the elliptic-curve B-model (holomorphic limit E2* -> E2);
* a brute-force symmetric-group count of simply ramified covers of an
  elliptic curve (the A-model side), with a small JSON cache;
* curve-counting series on K3 and Abelian surfaces and two Gromov-Witten
  series of the elliptic fibration over the first Hirzebruch surface.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .errors import BudgetExceeded
from .forms import Normalization, bernoulli, delta, eisenstein, eta_pow
from .qseries import QExp, D
from .ringstruct import QuasiModularPoly

__all__ = [
    "Multigraph", "THETA_GRAPH", "GAMMA1_GRAPH", "GAMMA2_GRAPH",
    "multigraph_automorphisms", "validate_trivalent", "propagator_coeffs",
    "amplitude_poly", "graph_amplitude", "mirror_F", "mirror_F_poly",
    "hurwitz_cost", "hurwitz_tuple_count", "hurwitz_oracle", "iter_hurwitz_tuples",
    "HurwitzRecord", "HurwitzCache", "DEFAULT_BUDGET", "compare_mirror_oracle",
    "k3_series", "abelian_series", "hirzebruch_series",
]

DEFAULT_BUDGET = 5 * 10 ** 8


# -- graphs -----------------------------------------------------------------

@dataclass(frozen=True)
class Multigraph:
    """Vertices 0..V-1 and a multiset of unordered edges (loops allowed)."""
    vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple(sorted(tuple(sorted((int(u), int(v)))) for u, v in self.edges))
        for u, v in edges:
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError(f"edge ({u}, {v}) uses an unknown vertex")
        object.__setattr__(self, "edges", edges)

    @property
    def genus(self) -> int:
        """First Betti number E - V + (number of components)."""
        return len(self.edges) - self.vertices + self.components()

    def degrees(self) -> list[int]:
        deg = [0] * self.vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def components(self) -> int:
        parent = list(range(self.vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in self.edges:
            parent[find(u)] = find(v)
        return len({find(a) for a in range(self.vertices)})


THETA_GRAPH = Multigraph(2, ((0, 1), (0, 1), (0, 1)))
# square whose top and bottom sides are doubled
GAMMA1_GRAPH = Multigraph(4, ((0, 1), (0, 1), (0, 2), (1, 3), (2, 3), (2, 3)))
# complete graph on four vertices
GAMMA2_GRAPH = Multigraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


def multigraph_automorphisms(G: Multigraph) -> int:
    """|Aut G|: vertex permutations preserving the edge multiset, times the
    permutations of parallel edges and the flips of loops."""
    mult = Counter(G.edges)
    vertex_perms = 0
    for p in itertools.permutations(range(G.vertices)):
        image = Counter(tuple(sorted((p[u], p[v]))) for u, v in G.edges)
        if image == mult:
            vertex_perms += 1
    edge_factor = 1
    for (u, v), m in mult.items():
        edge_factor *= math.factorial(m)
        if u == v:
            edge_factor *= 2 ** m
    return vertex_perms * edge_factor


def validate_trivalent(G: Multigraph, g: int) -> bool:
    return (all(d == 3 for d in G.degrees())
            and G.vertices == 2 * g - 2
            and len(G.edges) == 3 * g - 3
            and G.components() == 1)


# -- propagator and amplitudes ----------------------------------------------

def propagator_coeffs(n_max: int, order: int) -> tuple[Fraction, list[tuple[int, QExp]]]:
    """Laurent coefficients of P(z, tau) in the variable w = 2 pi i z.

    Returns (principal, terms): principal is the coefficient of w^-2 and
    ``terms`` lists (2n - 2, coefficient of w^(2n-2)) for n = 1..n_max, where
    the coefficient is (B_2n / 2n) E_2n / (2n-2)!  (from zeta(1-2n) = -B_2n/2n).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    terms = []
    for n in range(1, n_max + 1):
        c = bernoulli(2 * n) / (2 * n) / math.factorial(2 * n - 2)
        terms.append((2 * n - 2, eisenstein(2 * n, order=order) * c))
    return Fraction(-1), terms


_AMPLITUDES = {
    "theta": (Fraction(1, 2 ** 8 * 3 ** 4 * 5),
              {(3, 0, 0): 10, (1, 1, 0): -6, (0, 0, 1): -4}),
    "gamma1": (Fraction(1, 2 ** 7 * 3 ** 6),
               {(0, 0, 2): 4, (0, 3, 0): 4, (1, 1, 1): -12, (2, 2, 0): -3,
                (3, 0, 1): 4, (6, 0, 0): -3}),
    "gamma2": (Fraction(1, 2 ** 8 * 3 ** 4), None),
}


def amplitude_poly(name: str, variant: str = "printed") -> QuasiModularPoly:
    """Closed-form graph amplitude as a polynomial in E2, E4, E6.

    For ``gamma1`` the term written ``6 E4^2 E4`` is ambiguous: ``variant``
    "printed" reads it literally as 6 E4^3, "alternate" as 6 E2^4 E4.
    """
    if name not in _AMPLITUDES:
        raise KeyError(f"unknown graph amplitude {name!r}")
    pref, terms = _AMPLITUDES[name]
    if name == "gamma2":
        base = QuasiModularPoly(4, {(0, 1, 0): 1, (2, 0, 0): -1})
        return base * base * base * pref
    terms = dict(terms)
    if name == "gamma1":
        if variant == "printed":
            terms[(0, 3, 0)] += 6
        elif variant == "alternate":
            terms[(4, 1, 0)] = 6
        else:
            raise ValueError(f"unknown variant {variant!r}")
    weight = 6 if name == "theta" else 12
    return QuasiModularPoly(weight, terms) * pref


def graph_amplitude(name: str, order: int, variant: str = "printed") -> QExp:
    return amplitude_poly(name, variant).to_series(order)


_GENUS_GRAPHS = {
    2: (("theta", THETA_GRAPH),),
    3: (("gamma1", GAMMA1_GRAPH), ("gamma2", GAMMA2_GRAPH)),
}


def mirror_F_poly(g: int, variant: str = "printed") -> QuasiModularPoly:
    """sum over the genus-g graphs of I_Gamma / |Aut Gamma|."""
    if g not in _GENUS_GRAPHS:
        raise ValueError("closed-form amplitudes are only available for g = 2, 3")
    total = QuasiModularPoly(6 * g - 6)
    for name, graph in _GENUS_GRAPHS[g]:
        total = total + amplitude_poly(name, variant) * Fraction(1, multigraph_automorphisms(graph))
    return total


def mirror_F(g: int, order: int, variant: str = "printed") -> QExp:
    return mirror_F_poly(g, variant).to_series(order)


# -- Hurwitz oracle ---------------------------------------------------------

def _compose(p, q):
    return tuple(p[i] for i in q)


def _inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _transpositions(d: int) -> list[tuple[int, ...]]:
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            t = list(range(d))
            t[i], t[j] = j, i
            out.append(tuple(t))
    return out


def hurwitz_cost(d: int, g: int) -> int:
    """Estimated elementary steps: d!^2 * (d choose 2)^(2g-2)."""
    return math.factorial(d) ** 2 * math.comb(d, 2) ** (2 * g - 2)


def _orbit_labels(d: int, gens) -> list[int]:
    parent = list(range(d))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p in gens:
        for i in range(d):
            parent[find(i)] = find(p[i])
    return [find(i) for i in range(d)]


def _transitive(d: int, gens) -> bool:
    return len(set(_orbit_labels(d, gens))) <= 1


def hurwitz_tuple_count(d: int, g: int, budget: int = DEFAULT_BUDGET) -> int:
    """#{(a, b, t_1..t_{2g-2}) : a b a^-1 b^-1 t_1...t_{2g-2} = id, transitive}
    with a, b in S_d and t_i transpositions.

    The transposition tuples are tabulated once by product and by the set of
    transpositions used (which is all transitivity needs), then matched
    against every commutator.
    """
    if d < 1 or g < 1:
        raise ValueError("need d >= 1 and g >= 1")
    cost = hurwitz_cost(d, g)
    if cost > budget:
        raise BudgetExceeded(cost, budget)
    m = 2 * g - 2
    ident = tuple(range(d))
    table: dict[tuple, Counter] = {}
    trans = _transpositions(d)
    for tup in itertools.product(range(len(trans)), repeat=m):
        prod = ident
        for idx in tup:
            prod = _compose(prod, trans[idx])
        table.setdefault(prod, Counter())[frozenset(tup)] += 1
    perms = list(itertools.permutations(range(d)))
    total = 0
    for a in perms:
        a_inv = _inverse(a)
        for b in perms:
            comm = _compose(_compose(_compose(a, b), a_inv), _inverse(b))
            entries = table.get(_inverse(comm))
            if not entries:
                continue
            labels = _orbit_labels(d, (a, b))
            if len(set(labels)) == 1:
                total += sum(entries.values())
                continue
            for used, count in entries.items():
                if _transitive(d, [labels] + [trans[i] for i in used]):
                    total += count
    return total


def iter_hurwitz_tuples(d: int, g: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every qualifying tuple, by plain exhaustive search (small d only)."""
    ident = tuple(range(d))
    trans = _transpositions(d)
    perms = list(itertools.permutations(range(d)))
    for a in perms:
        for b in perms:
            comm = _compose(_compose(_compose(a, b), _inverse(a)), _inverse(b))
            for ts in itertools.product(trans, repeat=2 * g - 2):
                prod = comm
                for t in ts:
                    prod = _compose(prod, t)
                if prod == ident and _transitive(d, (a, b) + ts):
                    yield (a, b) + ts


def hurwitz_oracle(d: int, g: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Automorphism-weighted count of connected degree-d covers of an elliptic
    curve simply branched over 2g-2 labelled points: tuples / d!."""
    return Fraction(hurwitz_tuple_count(d, g, budget), math.factorial(d))


@dataclass(frozen=True)
class HurwitzRecord:
    degree: int
    genus: int
    count: Fraction
    method: str = "oracle"
    tuples: int | None = None


CACHE_VERSION = 1


class HurwitzCache:
    """JSON file mapping "d,g" to {"v": version, "tuples": int, "count": "p/q"}."""

    def __init__(self, path):
        self.path = Path(path)
        self._data: dict = {}
        if self.path.exists():
            try:
                self._data = json.loads(self.path.read_text())
            except json.JSONDecodeError:
                self._data = {}

    def get(self, d: int, g: int) -> HurwitzRecord | None:
        rec = self._data.get(f"{d},{g}")
        if not isinstance(rec, dict) or rec.get("v") != CACHE_VERSION:
            return None
        return HurwitzRecord(d, g, Fraction(rec["count"]), "oracle", int(rec["tuples"]))

    def put(self, record: HurwitzRecord) -> None:
        self._data[f"{record.degree},{record.genus}"] = {
            "v": CACHE_VERSION, "tuples": record.tuples, "count": str(record.count)}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(self._data, indent=2, sort_keys=True) + "\n")

    def lookup(self, d: int, g: int, budget: int = DEFAULT_BUDGET) -> HurwitzRecord:
        rec = self.get(d, g)
        if rec is None:
            tuples = hurwitz_tuple_count(d, g, budget)
            rec = HurwitzRecord(d, g, Fraction(tuples, math.factorial(d)), "oracle", tuples)
            self.put(rec)
        return rec


def compare_mirror_oracle(g: int, degrees, variant: str = "printed",
                          budget: int = DEFAULT_BUDGET, cache: HurwitzCache | None = None):
    """Rows (d, mirror coefficient, oracle count, ratio or None)."""
    degrees = list(degrees)
    series = mirror_F(g, max(degrees) + 1, variant)
    rows = []
    for d in degrees:
        oracle = cache.lookup(d, g, budget).count if cache else hurwitz_oracle(d, g, budget)
        mirror = series.coeff(d)
        ratio = mirror / oracle if oracle else None
        rows.append((d, mirror, oracle, ratio))
    return rows


# -- surfaces and threefolds ------------------------------------------------

def _d_ehat2(order: int) -> QExp:
    return D(eisenstein(2, Normalization.EHAT, order))


def k3_series(g: int, order: int = 10) -> QExp:
    """(D Ehat2)^g / Delta, known for exponents below ``order``."""
    if g < 0:
        raise ValueError("g must be non-negative")
    work = order + 2
    return (_d_ehat2(work) ** g / delta(work)).truncate(order)


def abelian_series(g: int, order: int = 10) -> QExp:
    """(D Ehat2)^(g-2) D^2 Ehat2."""
    if g < 2:
        raise ValueError("g must be at least 2")
    e = _d_ehat2(order)
    return e ** (g - 2) * D(e)


def hirzebruch_series(beta: str, order: int = 10) -> QExp:
    """F_C = q^(1/2) E4 / eta^12 and F_F = -2 E10 / eta^24, with E10 = E4 E6."""
    work = order + 2
    E4 = eisenstein(4, order=work)
    if beta == "C":
        out = (E4 / eta_pow(12, work)).shift(Fraction(1, 2))
    elif beta == "F":
        out = E4 * eisenstein(6, order=work) / delta(work) * -2
    else:
        raise ValueError("beta must be 'C' or 'F'")
    return out.truncate(order)
