"""Classical q-expansions: divisor sums, Bernoulli numbers, Eisenstein series,
the discriminant, Dedekind eta and the Jacobi theta series of Z."""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache

from .errors import NormalizationNotExact
from .qseries import QExp, product_expansion

__all__ = [
    "Normalization", "bernoulli", "sigma", "sigma_table", "eisenstein",
    "g_normalization_factor", "delta", "eta", "eta_pow", "jacobi_theta_z",
]


class Normalization(enum.Enum):
    E = "E"                     # constant term 1
    EHAT = "Ehat"               # constant term -B_2k / 4k
    G_SYMBOLIC = "G"            # lattice sum; constant 2 zeta(2k), never exact


@lru_cache(maxsize=None)
def _bernoulli_list(n: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(math.comb(m + 1, j) * B[j] for j in range(m))
        B.append(-acc / (m + 1))
    return tuple(B)


def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _bernoulli_list(n)[n]


def sigma(r: int, d: int) -> int:
    """Sum of r-th powers of the positive divisors of d."""
    if d < 1:
        raise ValueError("d must be positive")
    total = 0
    i = 1
    while i * i <= d:
        if d % i == 0:
            total += i ** r
            j = d // i
            if j != i:
                total += j ** r
        i += 1
    return total


def sigma_table(r: int, n: int) -> list[int]:
    """[0, sigma_r(1), ..., sigma_r(n-1)] by a divisor sieve."""
    table = [0] * max(n, 0)
    for k in range(1, n):
        kr = k ** r
        for m in range(k, n, k):
            table[m] += kr
    return table


def _check_weight(weight: int) -> int:
    weight = int(weight)
    if weight < 2 or weight % 2:
        raise ValueError(f"Eisenstein weight must be even and >= 2, got {weight}")
    return weight


def eisenstein(weight: int, norm: Normalization | str = Normalization.E,
               order: int = 20) -> QExp:
    """E_{2k} = 1 - (4k / B_2k) sum sigma_{2k-1}(d) q^d, or its Ehat rescaling.

    ``order`` is the exclusive exponent bound: coefficients of q^0 .. q^(order-1)
    are returned.
    """
    weight = _check_weight(weight)
    norm = Normalization(norm)
    if norm is Normalization.G_SYMBOLIC:
        raise NormalizationNotExact(
            "G normalization has transcendental constant term 2*zeta(2k); "
            "use g_normalization_factor for numeric work")
    B = bernoulli(weight)
    factor = -Fraction(2 * weight) / B
    sig = sigma_table(weight - 1, order)
    c = {0: 1}
    c.update({d: factor * sig[d] for d in range(1, order)})
    series = QExp(c, order)
    if norm is Normalization.EHAT:
        series = series * (-B / (2 * weight))
    return series


def g_normalization_factor(weight: int) -> tuple[Fraction, int]:
    """(r, p) with G_{2k} = r * (2 pi)^p * E_{2k}; p equals the weight.

    From 2 zeta(2k) = (-1)^(k+1) B_2k (2 pi)^2k / (2k)!.
    """
    weight = _check_weight(weight)
    k = weight // 2
    r = (-1) ** (k + 1) * bernoulli(weight) / math.factorial(weight)
    return r, weight


def delta(order: int = 20) -> QExp:
    """(E4^3 - E6^2) / 1728."""
    E4 = eisenstein(4, order=order)
    E6 = eisenstein(6, order=order)
    return (E4 ** 3 - E6 ** 2) / 1728


def eta(order: int = 20) -> QExp:
    """q^(1/24) prod (1 - q^k), known below q^(order + 1/24)."""
    return product_expansion(1, order, Fraction(1, 24))


def eta_pow(m: int, order: int = 20) -> QExp:
    """eta^m directly from the product; granularity 24/gcd(m, 24)."""
    return product_expansion(m, order, Fraction(m, 24))


def jacobi_theta_z(order: int = 20) -> QExp:
    """sum over n in Z of q^(n^2/2), exponents below ``order``."""
    T = math.ceil(Fraction(order) * 2)
    c = {}
    n = 0
    while n * n < T:
        c[n * n] = 1 if n == 0 else 2
        n += 1
    return QExp(c, T, 2)
