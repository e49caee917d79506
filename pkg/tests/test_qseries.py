from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmodular.errors import OutOfWindow, ZeroSeries
from qmodular.qseries import D, QExp, align, coeff, eq, inv, mul, product_expansion

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def series(draw, min_start=-2, max_len=10, unit=False):
    N = draw(st.sampled_from([1, 1, 2, 3]))
    start = draw(st.integers(min_start, 3))
    vals = draw(st.lists(rationals, min_size=1, max_size=max_len))
    if unit and vals[0] == 0:
        vals[0] = Fraction(1)
    return QExp.from_list(vals, start=start, granularity=N)


def agree(a, b):
    """Equal on the common known window, whatever the granularities."""
    a, b = align(a, b)
    T = min(a.trunc, b.trunc)
    return a.truncate(Fraction(T, a.granularity)).coeffs == b.truncate(
        Fraction(T, b.granularity)).coeffs


def naive_mul(a, b):
    """Dense double loop over the full windows, then cut to the product window."""
    N = a.granularity
    assert b.granularity == N
    out = {}
    for ka, ca in a.coeffs.items():
        for kb, cb in b.coeffs.items():
            out[ka + kb] = out.get(ka + kb, 0) + ca * cb
    T = min(a.trunc + b.valuation, b.trunc + a.valuation)
    return QExp(out, T, N)


def test_from_list_and_window():
    f = QExp.from_list([1, 2, 0, 3], start=-1)
    assert f.trunc == 3 and f.order == 3
    assert f.valuation == -1
    assert f.coeff(-1) == 1 and f.coeff(1) == 0 and f.coeff(2) == 3
    with pytest.raises(OutOfWindow):
        f.coeff(3)


def test_off_grid_coefficient_is_zero():
    f = QExp({0: 1, 1: 2}, 4, 2)
    assert f.coeff(Fraction(1, 3)) == 0
    assert f.coeff(Fraction(1, 2)) == 2


def test_monomial_and_constant():
    m = QExp.monomial(Fraction(-1, 2), 3)
    assert m.granularity == 2 and m.coeff(Fraction(-1, 2)) == 1
    assert m.order == 3
    c = QExp.constant(Fraction(5, 3), 4)
    assert c.coeff(0) == Fraction(5, 3) and c.order == 4


def test_addition_aligns_granularity():
    a = QExp({0: 1, 1: 1}, 3, 1)        # 1 + q + O(q^3)
    b = QExp({1: 1}, 5, 2)              # q^(1/2) + O(q^(5/2))
    s = a + b
    assert s.granularity == 2
    assert s.order == Fraction(5, 2)
    assert [s.coeff(Fraction(k, 2)) for k in range(5)] == [1, 1, 1, 0, 0]


def test_mul_window_rule():
    a = QExp.from_list([0, 1, 1], trunc=5)    # q + q^2 + O(q^5), valuation 1
    b = QExp.from_list([1, 1], trunc=3)       # 1 + q + O(q^3)
    p = a * b
    assert p.trunc == min(5 + 0, 3 + 1)
    assert p.coefficients(0, 4) == [0, 1, 2, 1]


def test_inverse_of_one_minus_q():
    f = QExp.from_list([1, -1], trunc=10)
    g = inv(f)
    assert g.coefficients(0, 10) == [1] * 10


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroSeries):
        inv(QExp({}, 5))
    with pytest.raises(ZeroDivisionError):
        QExp.from_list([1, 2]) / QExp({}, 3)


def test_inverse_shifts_window():
    f = QExp.from_list([0, 0, 2, 1], trunc=8)   # 2q^2 + q^3 + O(q^8)
    g = inv(f)
    assert g.valuation == -2 and g.trunc == 8 - 4
    one = f * g
    assert eq(one, QExp.constant(1, 10), one.order - 1)


def test_power_zero_and_negative():
    f = QExp.from_list([1, 3], trunc=6)
    assert (f ** 0).coeffs == {0: 1}
    assert eq(f ** -2 * f ** 2, QExp.constant(1, 10), 5)


def test_derivative_on_fractional_exponents():
    f = QExp({1: 4, 3: 2}, 6, 2)
    g = D(f)
    assert g.coeff(Fraction(1, 2)) == 2 and g.coeff(Fraction(3, 2)) == 3


def test_shift_changes_granularity():
    f = QExp.from_list([1, 2], trunc=3)
    g = f.shift(Fraction(1, 3))
    assert g.granularity == 3
    assert g.coeff(Fraction(1, 3)) == 1 and g.coeff(Fraction(4, 3)) == 2
    assert g.order == Fraction(10, 3)


def test_eq_out_of_window():
    f = QExp.from_list([1, 2], trunc=3)
    with pytest.raises(OutOfWindow):
        eq(f, f, 3)
    assert eq(f, f, 2)


def test_coefficients_are_exact():
    f = QExp.from_list([Fraction(1, 3), 2]) * 3
    assert f.coeff(0) == 1 and isinstance(f.coeff(0), Fraction)
    with pytest.raises(TypeError):
        QExp({0: 0.5}, 1)


def test_text_rendering():
    f = QExp({-1: 1, 0: -24, 2: Fraction(1, 2)}, 3)
    assert f.to_text() == "q^(-1) - 24 + 1/2*q^2 + O(q^3)"


def naive_product(e, order):
    """prod_{k < order} (1 - q^k)^(e_k) by repeated multiplication."""
    f = QExp.constant(1, order)
    for k in range(1, order):
        factor = QExp({0: 1, k: -1}, order)
        f = f * (factor ** e(k) if e(k) >= 0 else inv(factor) ** -e(k))
    return f


@pytest.mark.parametrize("e", [lambda k: 1, lambda k: 24, lambda k: -1, lambda k: k % 3 - 1])
def test_product_expansion_matches_naive(e):
    fast = product_expansion(e, 15)
    assert eq(fast, naive_product(e, 15), 14)


def test_euler_pentagonal():
    f = product_expansion(1, 30)
    pent = {}
    for n in range(-5, 6):
        pent[n * (3 * n - 1) // 2] = (-1) ** n
    assert all(f.coeff(k) == pent.get(k, 0) for k in range(30))


@given(series(), series())
def test_mul_matches_naive(a, b):
    if a.granularity != b.granularity:
        b = QExp(b.coeffs, b.trunc, a.granularity)
    p = mul(a, b)
    ref = naive_mul(a, b)
    assert p.identical(ref)


@given(series(), series(), series())
@settings(max_examples=60)
def test_ring_laws(a, b, c):
    assert (a * b).identical(b * a)
    assert agree((a * b) * c, a * (b * c))
    assert agree(a * (b + c), a * b + a * c)


@given(series(unit=True))
def test_inverse_property(a):
    prod = a * inv(a)
    assert agree(prod, QExp.constant(1, prod.order + 1))


@given(series(), series())
def test_leibniz_rule(a, b):
    if a.granularity != b.granularity:
        b = QExp(b.coeffs, b.trunc, a.granularity)
    assert agree(D(a * b), D(a) * b + a * D(b))


@given(series(), st.integers(0, 4))
def test_power_is_repeated_product(a, n):
    ref = QExp.constant(1, max(a.order, 1))
    for _ in range(n):
        ref = ref * a
    assert agree(a ** n, ref)


@given(series())
def test_coeff_bounds(a):
    with pytest.raises(OutOfWindow):
        coeff(a, a.order)
