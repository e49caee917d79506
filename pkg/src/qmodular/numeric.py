"""Floating-point evaluation on the upper half-plane and residual checks of the
transformation laws.

Conventions: with E2 = 1 - 24 sum sigma_1(d) q^d,

    (c tau + d)^-2 E2(g tau) = E2(tau) + 12 c / (2 pi i (c tau + d))
    E2*(tau) = E2(tau) - 3 / (pi Im tau)   transforms with weight 2.

Near the real axis the terms of a q-expansion are far larger than its value,
so double precision loses digits to cancellation.  Every evaluation therefore
accepts ``dps``: None sums in doubles, an integer sums with mpmath at that many
decimal digits.  The residual checks default to 30 digits.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import NamedTuple

import mpmath

from .forms import eisenstein
from .qseries import QExp

__all__ = [
    "MoebiusElement", "HalfPlanePoint", "SeriesValue", "moebius_act", "eval_series",
    "modularity_residual", "e2_anomaly", "e2_anomaly_residual", "e2_star_residual",
    "sample_points", "cusp_boundedness",
]

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True, eq=False)
class MoebiusElement:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def T(cls):
        return cls(1, 1, 0, 1)

    @classmethod
    def S(cls):
        return cls(0, -1, 1, 0)

    def _key(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        if c < 0 or (c == 0 and d < 0):
            a, b, c, d = -a, -b, -c, -d
        return a, b, c, d

    def __eq__(self, other):
        if not isinstance(other, MoebiusElement):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __matmul__(self, other: "MoebiusElement") -> "MoebiusElement":
        return MoebiusElement(self.a * other.a + self.b * other.c,
                              self.a * other.b + self.b * other.d,
                              self.c * other.a + self.d * other.c,
                              self.c * other.b + self.d * other.d)

    def cocycle(self, tau: complex) -> complex:
        return self.c * tau + self.d


@dataclass(frozen=True)
class HalfPlanePoint:
    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise ValueError(f"{tau} is not in the upper half-plane")
        object.__setattr__(self, "tau", tau)


RESIDUAL_DPS = 30


def _tau(p) -> complex:
    return p.tau if isinstance(p, HalfPlanePoint) else HalfPlanePoint(p).tau


def moebius_act(g: MoebiusElement, tau) -> HalfPlanePoint:
    t = _tau(tau)
    return HalfPlanePoint((g.a * t + g.b) / (g.c * t + g.d))


def _act_mp(g: MoebiusElement, t):
    return (g.a * t + g.b) / (g.c * t + g.d)


class SeriesValue(NamedTuple):
    value: complex
    tail: float   # |c_max| |q|^(T/N) / (1 - |q|^(1/N))


def _tail(f: QExp, y: float, cmax: float) -> float:
    if not cmax:
        return 0.0
    N = f.granularity
    step = math.exp(-2 * math.pi * y / N)
    return cmax * math.exp(-2 * math.pi * y * f.trunc / N) / (1 - step)


def _eval_mp(f: QExp, t):
    """Sum at an mpmath point (caller sets the working precision)."""
    N = f.granularity
    q = mpmath.exp(2j * mpmath.pi * t / N)
    total = mpmath.mpc(0)
    for k, c in f.coeffs.items():
        total += mpmath.mpf(c.numerator) / c.denominator * q ** k if not isinstance(c, int) \
            else c * q ** k
    return total


def eval_series(f: QExp, tau, dps: int | None = None) -> SeriesValue:
    """sum c_k exp(2 pi i tau k / N) over the stored terms, with a tail estimate."""
    t = _tau(tau)
    cmax = max((abs(float(c)) for c in f.coeffs.values()), default=0.0)
    tail = _tail(f, t.imag, cmax)
    if dps is not None:
        with mpmath.workdps(dps):
            return SeriesValue(complex(_eval_mp(f, mpmath.mpc(t))), tail)
    N = f.granularity
    re, im = [], []
    for k, c in f.coeffs.items():
        z = float(c) * cmath.exp(TWO_PI_I * t * k / N)
        re.append(z.real)
        im.append(z.imag)
    return SeriesValue(complex(math.fsum(re), math.fsum(im)), tail)


def modularity_residual(f: QExp, weight: int, g: MoebiusElement, tau,
                        dps: int | None = RESIDUAL_DPS) -> float:
    """|(c tau + d)^-k f(g tau) - f(tau)|."""
    t = _tau(tau)
    if dps is None:
        lhs = eval_series(f, moebius_act(g, t)).value * g.cocycle(t) ** (-weight)
        return abs(lhs - eval_series(f, t).value)
    with mpmath.workdps(dps):
        tm = mpmath.mpc(t)
        lhs = _eval_mp(f, _act_mp(g, tm)) * (g.c * tm + g.d) ** (-weight)
        return float(abs(lhs - _eval_mp(f, tm)))


def e2_anomaly(g: MoebiusElement, tau) -> complex:
    """12 c / (2 pi i (c tau + d))."""
    t = _tau(tau)
    return 12 * g.c / (TWO_PI_I * g.cocycle(t))


def e2_anomaly_residual(g: MoebiusElement, tau, order: int = 300,
                        dps: int | None = RESIDUAL_DPS) -> float:
    """|(c tau + d)^-2 E2(g tau) - E2(tau) - 12 c / (2 pi i (c tau + d))|."""
    t = _tau(tau)
    E2 = eisenstein(2, order=order)
    if dps is None:
        lhs = eval_series(E2, moebius_act(g, t)).value * g.cocycle(t) ** -2
        return abs(lhs - eval_series(E2, t).value - e2_anomaly(g, t))
    with mpmath.workdps(dps):
        tm = mpmath.mpc(t)
        j = g.c * tm + g.d
        lhs = _eval_mp(E2, _act_mp(g, tm)) / j ** 2
        anomaly = 12 * g.c / (2j * mpmath.pi * j)
        return float(abs(lhs - _eval_mp(E2, tm) - anomaly))


def e2_star_residual(g: MoebiusElement, tau, order: int = 300,
                     dps: int | None = RESIDUAL_DPS) -> float:
    """Weight-2 modularity residual of E2*(tau) = E2(tau) - 3/(pi Im tau)."""
    t = _tau(tau)
    E2 = eisenstein(2, order=order)
    if dps is None:
        def star(x):
            return eval_series(E2, x).value - 3 / (math.pi * x.imag)
        gt = moebius_act(g, t).tau
        return abs(star(gt) * g.cocycle(t) ** -2 - star(t))
    with mpmath.workdps(dps):
        def star(x):
            return _eval_mp(E2, x) - 3 / (mpmath.pi * x.imag)
        tm = mpmath.mpc(t)
        j = g.c * tm + g.d
        return float(abs(star(_act_mp(g, tm)) / j ** 2 - star(tm)))


def _random_element(rng: random.Random, max_entry: int) -> MoebiusElement:
    while True:
        c = rng.randint(-max_entry, max_entry)
        d = rng.randint(-max_entry, max_entry)
        if (c, d) != (0, 0) and math.gcd(c, d) == 1:
            break
    # a d - b c = 1
    g, x, y = _xgcd(d, c)
    a, b = x * g, -y * g
    return MoebiusElement(a, b, c, d)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def sample_points(n: int, seed: int = 0, max_entry: int = 5,
                  im_range: tuple[float, float] = (1.0, 1.5),
                  min_image_im: float = 0.035) -> list[tuple[MoebiusElement, HalfPlanePoint]]:
    """Seeded (g, tau) pairs with |c|, |d| <= max_entry and Im tau in im_range.

    Draws whose image g tau has imaginary part below ``min_image_im`` are
    rejected: there an order-300 truncation no longer converges well enough.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        g = _random_element(rng, max_entry)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(*im_range))
        if moebius_act(g, tau).tau.imag >= min_image_im:
            out.append((g, HalfPlanePoint(tau)))
    return out


def cusp_boundedness(f: QExp, x: float = 0.0, ys=(2.0, 4.0, 8.0, 16.0)) -> list[float]:
    """|f(x + i y)| along a vertical ray; a smoke test for holomorphy at infinity."""
    return [abs(eval_series(f, complex(x, y)).value) for y in ys]
