import itertools
import json
import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmodular.errors import NotPositiveDefinite, UnknownLattice
from qmodular.forms import eisenstein, jacobi_theta_z, sigma
from qmodular.lattice import (E8_GRAM, Lattice, builtin_lattice, load_lattice, norm_counts,
                              theta_series, vector_count)
from qmodular.qseries import eq

A2 = Lattice.from_gram([[2, -1], [-1, 2]])


def _inverse_diag(gram):
    """Diagonal of the inverse Gram matrix, by exact Gauss-Jordan."""
    n = len(gram)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(gram)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [M[i][n + i] for i in range(n)]


def brute_counts(L, bound):
    """Count vectors of norm <= bound inside the box |x_i| <= sqrt(bound (G^-1)_ii)."""
    box = [math.isqrt(int(bound * d)) + 1 for d in _inverse_diag(L.gram)]
    counts = Counter()
    for x in itertools.product(*(range(-b, b + 1) for b in box)):
        n = L.norm(x)
        if n <= bound:
            counts[n] += 1
    return counts


def test_e8_gram_shape():
    E8 = builtin_lattice("E8")
    assert E8.rank == 8 and E8.gram == E8_GRAM
    assert E8.determinant == 1
    assert all(E8.gram[i][i] == 2 for i in range(8))


def test_e8_theta_is_e4():
    theta = theta_series(builtin_lattice("E8"), 4)
    assert eq(theta, eisenstein(4, order=5), 4)


def test_e8_shell_sizes():
    E8 = builtin_lattice("E8")
    assert vector_count(E8, 2) == 240
    assert vector_count(E8, 4) == 2160
    assert vector_count(E8, 3) == 0


def test_z4_jacobi_four_squares():
    theta = theta_series(builtin_lattice("Zn", 4), 6)
    for n in range(1, 13):
        r4 = 8 * sigma(1, n) - (32 * sigma(1, n // 4) if n % 4 == 0 else 0)
        assert theta.coeff(Fraction(n, 2)) == r4


def test_zn_theta_is_power_of_jacobi_theta():
    for r in (1, 2, 3):
        assert eq(theta_series(builtin_lattice("Zn", r), 5), jacobi_theta_z(6) ** r, 5)


def test_a2_against_brute_force():
    assert norm_counts(A2, 30) == brute_counts(A2, 30)
    assert vector_count(A2, 2) == 6


def test_direct_sum_multiplies_theta():
    L = A2.direct_sum(builtin_lattice("Zn", 1))
    assert L.rank == 3
    lhs = theta_series(L, 4)
    rhs = theta_series(A2, 4) * theta_series(builtin_lattice("Zn", 1), 4)
    assert eq(lhs, rhs, 4)


@st.composite
def gram_matrices(draw):
    n = draw(st.integers(1, 3))
    while True:
        B = [[draw(st.integers(-2, 2)) for _ in range(n)] for _ in range(n)]
        G = [[sum(B[k][i] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        try:
            return Lattice.from_gram(G)
        except NotPositiveDefinite:
            # singular B: bump the diagonal to force definiteness
            G = [[G[i][j] + (i == j) for j in range(n)] for i in range(n)]
            return Lattice.from_gram(G)


@given(gram_matrices(), st.integers(0, 12))
@settings(max_examples=40, deadline=None)
def test_enumeration_against_brute_force(L, bound):
    assert norm_counts(L, bound) == brute_counts(L, bound)


def test_validation():
    with pytest.raises(NotPositiveDefinite):
        Lattice.from_gram([[1, 2], [2, 1]])
    with pytest.raises(NotPositiveDefinite):
        Lattice.from_gram([[0]])
    with pytest.raises(ValueError):
        Lattice.from_gram([[2, 1], [0, 2]])
    with pytest.raises(UnknownLattice):
        builtin_lattice("Leech")


def test_json_round_trip(tmp_path):
    doc = A2.to_json()
    assert Lattice.from_json(json.loads(json.dumps(doc))) == A2
    path = tmp_path / "a2.json"
    path.write_text(json.dumps(doc))
    assert load_lattice(path) == A2


def test_theta_window_and_granularity():
    t = theta_series(builtin_lattice("Zn", 1), Fraction(5, 2))
    assert t.granularity == 2 and t.order == 3
    assert t.coeff(Fraction(5, 2)) == 0 and t.coeff(2) == 2
