"""Holomorphic Euler characteristics of toric line bundles by localization.

For a smooth complete fan, chi(O(D)) is the value at x = (1, ..., 1) of

    sum over maximal cones delta of  x^{m_delta} / prod_j (1 - x^{w_j})

where the w_j are the dual-basis vectors of delta (columns of A^{-1}, A the
generator matrix) and m_delta = -A^{-1} b with b the coefficients of D on the
generators of delta. Each term has poles at x = 1 that cancel in the sum.
Substituting x_i = 1 + t^i turns every term into a Laurent series in the
single variable t; the answer is the t^0 coefficient of the sum.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from . import exact
from .cox_geometry import ToricDivisor, divisor_L1, divisor_L2
from .lattice_fan import Fan, build_fan_pi

log = logging.getLogger(__name__)

DEFAULT_GUARD = 64


class PrecisionError(ArithmeticError):
    """Truncation left too few known coefficients, or poles survived."""


# -- truncated power series on plain coefficient lists -------------------------

def _mul(a: list, b: list, n: int) -> list:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        lim = n - i
        for j, y in enumerate(b[:lim]):
            if y:
                out[i + j] += x * y
    return out


def _inv(a: list, n: int) -> list:
    a0 = a[0]
    if a0 == 0:
        raise ZeroDivisionError("series with zero constant term is not a unit")
    r = a0 if a0 in (1, -1) else Fraction(1, a0) if isinstance(a0, int) else 1 / a0
    out = [0] * n
    out[0] = r
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j]:
                s += a[j] * out[k - j]
        out[k] = -s * r
    return out


def _binomial_power(m: int, step: int, n: int) -> list:
    """(1 + t**step)**m to n terms, for any integer m."""
    out = [0] * n
    for j in range(0, (n - 1) // step + 1):
        if m >= 0 and j > m:
            break
        if m >= 0:
            c = comb(m, j)
        else:
            c = (-1) ** j * comb(-m + j - 1, j)
        out[j * step] = c
    return out


def _sparse_mul(a: list, b: list, step: int, n: int) -> list:
    # b is supported on multiples of step
    nz = [(k, c) for k, c in enumerate(b[:n]) if c]
    out = [0] * n
    for k, c in nz:
        for i in range(n - k):
            if a[i]:
                out[i + k] += a[i] * c
    return out


def monomial_series(m: Sequence[int], n: int) -> list:
    """prod_i (1 + t**(i+1))**m_i to n terms."""
    out = _binomial_power(m[0], 1, n) if m else [1] + [0] * (n - 1)
    for i, e in enumerate(m[1:], start=2):
        if e:
            out = _sparse_mul(out, _binomial_power(e, i, n), i, n)
    return out


# -- Laurent objects ----------------------------------------------------------

@dataclass
class TruncatedLaurent:
    """t**valuation * (c_0 + c_1 t + ...), known modulo t**prec.

    Coefficients of degree >= prec are unknown. ``coeffs`` covers exactly the
    degrees valuation .. prec-1. A value with no known nonzero coefficient has
    ``valuation == prec`` and empty ``coeffs``.
    """

    valuation: int
    coeffs: list
    prec: int

    def __post_init__(self):
        if len(self.coeffs) != self.prec - self.valuation:
            raise ValueError("coefficient list does not match the precision window")

    @classmethod
    def from_series(cls, coeffs: list, valuation: int = 0) -> "TruncatedLaurent":
        return cls(valuation, list(coeffs), valuation + len(coeffs))

    def coefficient(self, k: int):
        if k >= self.prec:
            raise PrecisionError(f"t^{k} is beyond the known precision t^{self.prec}")
        if k < self.valuation:
            return 0
        return self.coeffs[k - self.valuation]

    def principal_part(self) -> dict[int, object]:
        return {k: self.coefficient(k) for k in range(self.valuation, min(0, self.prec)) if self.coefficient(k)}

    def pole_order(self) -> int:
        pp = self.principal_part()
        return -min(pp) if pp else 0

    def __add__(self, other: "TruncatedLaurent") -> "TruncatedLaurent":
        lo = min(self.valuation, other.valuation)
        hi = min(self.prec, other.prec)
        lo = min(lo, hi)
        return TruncatedLaurent(lo, [self.coefficient(k) + other.coefficient(k) for k in range(lo, hi)], hi)

    def __mul__(self, other: "TruncatedLaurent") -> "TruncatedLaurent":
        # relative precisions
        ra = self.prec - self.valuation
        rb = other.prec - other.valuation
        n = min(ra, rb)
        return TruncatedLaurent(self.valuation + other.valuation, _mul(self.coeffs, other.coeffs, n),
                                self.valuation + other.valuation + n)

    def normalized(self) -> "TruncatedLaurent":
        """Shift leading zeros into the valuation."""
        k = 0
        while k < len(self.coeffs) and not self.coeffs[k]:
            k += 1
        return TruncatedLaurent(self.valuation + k, self.coeffs[k:], self.prec)

    def inverse(self) -> "TruncatedLaurent":
        s = self.normalized()
        if not s.coeffs:
            raise PrecisionError("cannot invert: no nonzero coefficient within precision")
        n = len(s.coeffs)
        return TruncatedLaurent(-s.valuation, _inv(s.coeffs, n), -s.valuation + n)

    def __truediv__(self, other: "TruncatedLaurent") -> "TruncatedLaurent":
        return self * other.inverse()


def monomial_by_vector(m: Sequence[int], guard: int = DEFAULT_GUARD) -> TruncatedLaurent:
    return TruncatedLaurent.from_series(monomial_series(m, guard))


# -- fans in arbitrary rank ---------------------------------------------------

@dataclass
class SimpleFan:
    """A smooth complete fan in Z^n given by rays and maximal cones (index tuples)."""

    rays: list[tuple[int, ...]]
    cones: list[tuple[int, ...]]


def _fan_data(fan) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    if isinstance(fan, Fan):
        return [r.proj for r in fan.rays], [c.generators for c in fan.maximal_cones]
    return [tuple(r) for r in fan.rays], [tuple(c) for c in fan.cones]


def _coeffs(D) -> Sequence[int]:
    return D.coeffs if isinstance(D, ToricDivisor) else D


class ChartData:
    """Per-cone data reused across divisors: A^{-1} and the denominator series."""

    def __init__(self, rays: list, cone: tuple[int, ...], guard: int):
        a = [list(rays[i]) for i in cone]
        inv = exact.inverse(a)
        if any(x.denominator != 1 for row in inv for x in row):
            raise ValueError(f"cone {cone} is not unimodular")
        self.cone = cone
        self.a_inv = [[int(x) for x in row] for row in inv]
        n = len(cone)
        self.dual = [tuple(self.a_inv[i][j] for i in range(n)) for j in range(n)]
        self.guard = guard
        self.pole = 0
        unit = [1] + [0] * (guard - 1)
        for w in self.dual:
            k = next(i for i, x in enumerate(w) if x) + 1  # 1 - x^w vanishes to order k
            f = monomial_series(w, guard + k)
            factor = [-c for c in f[k:]]
            if factor[0] == 0:
                raise PrecisionError(f"dual vector {w} gives a degenerate factor")
            self.pole += k
            unit = _mul(unit, factor, guard)
        self.den_inv = _inv(unit, guard)

    def m_vector(self, D: Sequence[int]) -> list[int]:
        b = [D[i] for i in self.cone]
        return [-sum(r * x for r, x in zip(row, b)) for row in self.a_inv]

    def piece(self, D: Sequence[int]) -> TruncatedLaurent:
        num = monomial_series(self.m_vector(D), self.guard)
        s = _mul(num, self.den_inv, self.guard)
        return TruncatedLaurent(-self.pole, s, self.guard - self.pole)


def chi_piece(fan, cone_index: int, D, guard: int = DEFAULT_GUARD) -> TruncatedLaurent:
    rays, cones = _fan_data(fan)
    return ChartData(rays, cones[cone_index], guard).piece(_coeffs(D))


def _finish(total: TruncatedLaurent) -> int:
    if total.prec < 1:
        raise PrecisionError(f"sum known only modulo t^{total.prec}; raise the guard")
    pp = total.principal_part()
    if pp:
        raise PrecisionError(f"principal part did not cancel; surviving pole order {-min(pp)}")
    v = Fraction(total.coefficient(0))
    if v.denominator != 1:
        raise ArithmeticError(f"non-integral Euler characteristic {v}")
    return int(v)


def chi_of_divisors(fan, divisors: dict, guard: int = DEFAULT_GUARD) -> dict:
    """chi(O(D)) for several divisors in one pass over the charts."""
    rays, cones = _fan_data(fan)
    sums = {name: None for name in divisors}
    coeffs = {name: _coeffs(D) for name, D in divisors.items()}
    for cone in cones:
        chart = ChartData(rays, cone, guard)
        for name, D in coeffs.items():
            p = chart.piece(D)
            sums[name] = p if sums[name] is None else sums[name] + p
    return {name: _finish(s) for name, s in sums.items()}


def chi_of_divisor(fan, D, guard: int = DEFAULT_GUARD, escalate: int = 2) -> int:
    """chi(O(D)); the guard is doubled up to ``escalate`` times on precision errors."""
    for attempt in range(escalate + 1):
        try:
            return chi_of_divisors(fan, {"D": D}, guard)["D"]
        except PrecisionError:
            if attempt == escalate:
                raise
            guard *= 2
            log.info("escalating Laurent guard to %d", guard)
    raise AssertionError("unreachable")


# -- exact rational-function mode ---------------------------------------------

def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _monomial_poly(m: Sequence[int]) -> tuple[list, list]:
    """prod (1+t^i)^{m_i} as an exact fraction num/den of integer polynomials."""
    num, den = [1], [1]
    for i, e in enumerate(m, start=1):
        base = [1] + [0] * (i - 1) + [1]
        for _ in range(abs(e)):
            if e > 0:
                num = _poly_mul(num, base)
            else:
                den = _poly_mul(den, base)
    return num, den


def exact_piece(fan, cone_index: int, D) -> tuple[list, list]:
    """The localization term of one chart as an exact rational function of t."""
    rays, cones = _fan_data(fan)
    chart = ChartData(rays, cones[cone_index], 1)
    num, den = _monomial_poly(chart.m_vector(_coeffs(D)))
    for w in chart.dual:
        wp, wn = _monomial_poly(w)
        # 1 - wp/wn = (wn - wp)/wn
        diff = _poly_add(wn, [-c for c in wp])
        num = _poly_mul(num, wn)
        den = _poly_mul(den, diff)
    return num, den


def laurent_of_fraction(num: list, den: list, n: int) -> TruncatedLaurent:
    v = next(i for i, c in enumerate(den) if c)
    u = next((i for i, c in enumerate(num) if c), None)
    if u is None:
        return TruncatedLaurent(n, [], n)
    shifted_den = den[v:] + [0] * n
    shifted_num = num[u:] + [0] * n
    s = _mul(shifted_num, _inv(shifted_den, n), n)
    return TruncatedLaurent(u - v, s, u - v + n)


def cross_check_charts(fan, divisors: dict, guard: int = DEFAULT_GUARD, charts=None) -> list:
    """Charts where the truncated piece disagrees with the exact rational one.

    Returns (cone index, divisor name) pairs; empty means full agreement on
    every known coefficient.
    """
    rays, cones = _fan_data(fan)
    bad = []
    for k in (range(len(cones)) if charts is None else charts):
        chart = ChartData(rays, cones[k], guard)
        for name, D in divisors.items():
            p = chart.piece(_coeffs(D))
            num, den = exact_piece(fan, k, D)
            e = laurent_of_fraction(num, den, guard)
            lo = min(p.valuation, e.valuation)
            hi = min(p.prec, e.prec)
            if any(Fraction(p.coefficient(j)) != Fraction(e.coefficient(j)) for j in range(lo, hi)):
                bad.append((k, name))
    return bad


def chi_of_divisor_exact(fan, D) -> int:
    """Sum all terms as one exact rational function, then evaluate at t = 0.

    Polynomial sizes grow with the number of charts; intended for small fans.
    """
    _, cones = _fan_data(fan)
    total_num, total_den = [0], [1]
    for k in range(len(cones)):
        n, d = exact_piece(fan, k, D)
        total_num = _poly_add(_poly_mul(total_num, d), _poly_mul(n, total_den))
        total_den = _poly_mul(total_den, d)
    vn = next((i for i, c in enumerate(total_num) if c), None)
    vd = next(i for i, c in enumerate(total_den) if c)
    if vn is None or vn > vd:
        return 0
    if vn < vd:
        raise PrecisionError("exact sum has a pole at t = 0")
    v = Fraction(total_num[vn], total_den[vd])
    if v.denominator != 1:
        raise ArithmeticError(f"non-integral Euler characteristic {v}")
    return int(v)


# -- the W_0 assembly ---------------------------------------------------------

def koszul_chi(chi_O: int, chi_m1: int, chi_m2: int, chi_m12: int) -> int:
    """chi(O_{Y1 cap Y2}) from the Koszul resolution."""
    return chi_O - chi_m1 - chi_m2 + chi_m12


def pi_divisors(fan: Fan) -> dict:
    l1, l2 = divisor_L1(), divisor_L2()
    zero = ToricDivisor((0,) * len(fan.rays))
    return {"chi_O": zero, "chi_mL1": -l1, "chi_mL2": -l2, "chi_mL1mL2": -(l1 + l2)}


def holo_suite(fan: Fan | None = None, guard: int = DEFAULT_GUARD, exact_check: bool = False) -> dict:
    """chi(O), chi(O(-L1)), chi(O(-L2)), chi(O(-L1-L2)) on P_Pi and chi(O_{W0}).

    With ``exact_check`` every chart's truncated term is also compared with
    its exact rational expansion.
    """
    fan = fan or build_fan_pi()
    start = time.perf_counter()
    divisors = pi_divisors(fan)
    chis = chi_of_divisors(fan, divisors, guard)
    chis["chi_W0"] = koszul_chi(chis["chi_O"], chis["chi_mL1"], chis["chi_mL2"], chis["chi_mL1mL2"])
    chis["guard"] = guard
    if exact_check:
        bad = cross_check_charts(fan, divisors, guard)
        if bad:
            raise PrecisionError(f"truncated and exact chart terms disagree on {bad[:5]}")
        chis["exact_chart_check"] = True
    chis["timing_ms"] = round(1000 * (time.perf_counter() - start))
    return chis


def koszul_chi_W0(fan: Fan | None = None, guard: int = DEFAULT_GUARD) -> int:
    return holo_suite(fan, guard)["chi_W0"]
