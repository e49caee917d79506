import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qmodular.errors import NormalizationNotExact
from qmodular.forms import (Normalization, bernoulli, delta, eisenstein, eta, eta_pow,
                            g_normalization_factor, jacobi_theta_z, sigma, sigma_table)
from qmodular.qseries import eq

KNOWN_BERNOULLI = {0: 1, 1: Fraction(-1, 2), 2: Fraction(1, 6), 3: 0, 4: Fraction(-1, 30),
                   6: Fraction(1, 42), 8: Fraction(-1, 30), 10: Fraction(5, 66),
                   12: Fraction(-691, 2730), 14: Fraction(7, 6)}


@pytest.mark.parametrize("n,value", KNOWN_BERNOULLI.items())
def test_bernoulli_table(n, value):
    assert bernoulli(n) == value


def test_odd_bernoulli_vanish():
    assert all(bernoulli(n) == 0 for n in range(3, 40, 2))


@given(st.integers(0, 6), st.integers(1, 400))
def test_sigma_against_brute_force(r, d):
    assert sigma(r, d) == sum(m ** r for m in range(1, d + 1) if d % m == 0)


def test_sigma_table_matches_sigma():
    assert sigma_table(3, 50)[1:] == [sigma(3, d) for d in range(1, 50)]
    assert sigma_table(0, 13)[12] == 6


def test_sigma_multiplicative():
    for m, n in [(4, 9), (5, 12), (7, 8)]:
        assert sigma(5, m * n) == sigma(5, m) * sigma(5, n)


@pytest.mark.parametrize("weight,head", [
    (2, [1, -24, -72, -96, -168]),
    (4, [1, 240, 2160, 6720, 17520]),
    (6, [1, -504, -16632, -122976, -532728]),
    (8, [1, 480, 61920, 1050240]),
])
def test_eisenstein_heads(weight, head):
    E = eisenstein(weight, order=len(head))
    assert E.coefficients(0, len(head)) == head
    assert E.order == len(head)


def test_ehat_constant_term():
    for w in (2, 4, 6, 12):
        Eh = eisenstein(w, Normalization.EHAT, 5)
        assert Eh.coeff(0) == -bernoulli(w) / (2 * w)
        assert Eh.coeff(1) == 1     # sigma_(w-1)(1)
    assert eisenstein(2, "Ehat", 3).coeff(0) == Fraction(-1, 24)


def test_g_normalization():
    with pytest.raises(NormalizationNotExact):
        eisenstein(4, Normalization.G_SYMBOLIC)
    for w in (4, 6, 8):
        r, p = g_normalization_factor(w)
        assert p == w
        zeta = sum(1 / n ** w for n in range(1, 20000))
        assert math.isclose(float(r) * (2 * math.pi) ** p, 2 * zeta, rel_tol=1e-10)


def test_eisenstein_rejects_bad_weight():
    for w in (0, 3, -2):
        with pytest.raises(ValueError):
            eisenstein(w)


def test_delta_head_and_cusp():
    D = delta(10)
    assert D.coefficients(0, 10) == [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643]


def test_delta_is_eta24():
    assert eq(delta(40), eta_pow(24, 40), 39)


def test_eta_granularity_and_terms():
    e = eta(10)
    assert e.granularity == 24
    assert e.lowest_exponent == Fraction(1, 24)
    assert e.order == 10 + Fraction(1, 24)
    # Euler: prod (1 - q^n) = 1 - q - q^2 + q^5 + q^7 - ...
    shifted = e.shift(Fraction(-1, 24))
    assert [shifted.coeff(k) for k in range(9)] == [1, -1, -1, 0, 0, 1, 0, 1, 0]


def test_eta_power_matches_repeated_product():
    assert eq(eta_pow(3, 12), eta(12) ** 3, 11)
    assert eta_pow(12, 5).granularity == 2


def test_jacobi_theta():
    t = jacobi_theta_z(5)
    assert t.granularity == 2 and t.order == 5
    expected = {0: 1, Fraction(1, 2): 2, 2: 2, Fraction(9, 2): 2}
    for k in range(10):
        e = Fraction(k, 2)
        assert t.coeff(e) == expected.get(e, 0)


def test_theta_squared_counts_sums_of_two_squares():
    t2 = jacobi_theta_z(10) ** 2
    for n in range(20):
        r2 = sum(1 for a in range(-5, 6) for b in range(-5, 6) if a * a + b * b == n)
        assert t2.coeff(Fraction(n, 2)) == r2
