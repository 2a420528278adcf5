"""Exact truncated series for the (3,3) Picard-Fuchs system near the MUM point.

Everything is formal: ``z`` is the coordinate at the MUM point and ``L``
stands for t = log z, a symbol that is never evaluated. A PowerSeriesQ of
order D is known modulo z**D.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

C = 3 ** 6
MAX_L_DEGREE = 4
DEFAULT_ORDER = 12


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class PowerSeriesQ:
    """c_0 + c_1 z + ... + c_{D-1} z^{D-1} + O(z^D) with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        c = [_q(x) for x in coeffs]
        if order is not None:
            c = (c + [Fraction(0)] * order)[:order]
        if not c:
            raise ValueError("a power series needs a positive truncation order")
        self.coeffs = c

    @classmethod
    def constant(cls, a, order: int) -> "PowerSeriesQ":
        return cls([a], order)

    @classmethod
    def z(cls, order: int) -> "PowerSeriesQ":
        return cls([0, 1], order)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> Fraction:
        if n >= self.order:
            raise IndexError(f"z^{n} is beyond the truncation order {self.order}")
        return self.coeffs[n] if n >= 0 else Fraction(0)

    def __repr__(self):
        return f"PowerSeriesQ({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        if not isinstance(other, PowerSeriesQ):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[:n] == other.coeffs[:n]

    def truncate(self, order: int) -> "PowerSeriesQ":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return PowerSeriesQ(self.coeffs[:order])

    def _coerce(self, other) -> "PowerSeriesQ":
        if isinstance(other, PowerSeriesQ):
            return other
        return PowerSeriesQ.constant(other, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        n = min(self.order, o.order)
        return PowerSeriesQ([a + b for a, b in zip(self.coeffs[:n], o.coeffs[:n])])

    __radd__ = __add__

    def __neg__(self):
        return PowerSeriesQ([-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PowerSeriesQ):
            k = _q(other)
            return PowerSeriesQ([k * a for a in self.coeffs])
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * n
        for i in range(n):
            if a[i]:
                for j in range(n - i):
                    out[i + j] += a[i] * b[j]
        return PowerSeriesQ(out)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def inverse(self) -> "PowerSeriesQ":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series has zero constant term")
        n = self.order
        out = [Fraction(0)] * n
        out[0] = 1 / a[0]
        for k in range(1, n):
            out[k] = -sum(a[j] * out[k - j] for j in range(1, k + 1)) * out[0]
        return PowerSeriesQ(out)

    def __truediv__(self, other):
        if not isinstance(other, PowerSeriesQ):
            return self * (1 / _q(other))
        return self * other.inverse()

    def theta(self) -> "PowerSeriesQ":
        """z d/dz, which is d/dt on pure series."""
        return PowerSeriesQ([n * c for n, c in enumerate(self.coeffs)])

    def log(self) -> "PowerSeriesQ":
        """log of a series with constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term 1")
        r = self.theta() / self
        return PowerSeriesQ([Fraction(0)] + [r[n] / n for n in range(1, self.order)])

    def exp(self) -> "PowerSeriesQ":
        """exp of a series with zero constant term."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs zero constant term")
        g = self.theta().coeffs
        n = self.order
        out = [Fraction(0)] * n
        out[0] = Fraction(1)
        for k in range(1, n):
            out[k] = sum(g[j] * out[k - j] for j in range(1, k + 1)) / k
        return PowerSeriesQ(out)

    def compose(self, inner: "PowerSeriesQ") -> "PowerSeriesQ":
        """self(inner(z)); inner must vanish at 0."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        out = PowerSeriesQ.constant(0, n)
        for c in reversed(self.coeffs[:n]):
            out = out * inner.truncate(n) + c
        return out

    def derivative(self) -> "PowerSeriesQ":
        """d/dz; the result loses one order."""
        c = [n * a for n, a in enumerate(self.coeffs)][1:]
        return PowerSeriesQ(c or [0])

    def shift(self) -> "PowerSeriesQ":
        """z * self, same truncation order."""
        return PowerSeriesQ([Fraction(0)] + self.coeffs[:-1])


class LogSeries:
    """sum_k L^k * s_k(z), with L standing for t = log z."""

    __slots__ = ("parts", "order")

    def __init__(self, parts: dict[int, PowerSeriesQ] | Sequence[PowerSeriesQ], order: int):
        if not isinstance(parts, dict):
            parts = dict(enumerate(parts))
        clean = {}
        for k, s in parts.items():
            if k < 0 or k > MAX_L_DEGREE:
                raise ValueError(f"L-degree {k} outside 0..{MAX_L_DEGREE}")
            s = s.truncate(order) if s.order > order else s
            if s.order < order:
                raise ValueError("coefficient series shorter than the LogSeries order")
            if any(s.coeffs):
                clean[k] = s
        self.parts = clean
        self.order = order

    @classmethod
    def pure(cls, s: PowerSeriesQ) -> "LogSeries":
        return cls({0: s}, s.order)

    @classmethod
    def L(cls, order: int) -> "LogSeries":
        return cls({1: PowerSeriesQ.constant(1, order)}, order)

    def part(self, k: int) -> PowerSeriesQ:
        return self.parts.get(k, PowerSeriesQ.constant(0, self.order))

    def l_degree(self) -> int:
        return max(self.parts, default=0)

    def is_pure(self) -> bool:
        return self.l_degree() == 0

    def is_zero(self) -> bool:
        return not self.parts

    def as_series(self) -> PowerSeriesQ:
        if not self.is_pure():
            raise ValueError(f"series still carries L^{self.l_degree()}")
        return self.part(0)

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            return NotImplemented
        keys = set(self.parts) | set(other.parts)
        return all(self.part(k) == other.part(k) for k in keys)

    def __repr__(self):
        return "LogSeries(" + ", ".join(f"L^{k}: {s!r}" for k, s in sorted(self.parts.items())) + ")"

    def __add__(self, other: "LogSeries") -> "LogSeries":
        n = min(self.order, other.order)
        keys = set(self.parts) | set(other.parts)
        return LogSeries({k: self.part(k).truncate(n) + other.part(k).truncate(n) for k in keys}, n)

    def __neg__(self):
        return LogSeries({k: -s for k, s in self.parts.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a) -> "LogSeries":
        return LogSeries({k: s * a for k, s in self.parts.items()}, self.order)

    def __mul__(self, other) -> "LogSeries":
        if isinstance(other, PowerSeriesQ):
            other = LogSeries.pure(other)
        if not isinstance(other, LogSeries):
            return self.scale(other)
        n = min(self.order, other.order)
        out: dict[int, PowerSeriesQ] = {}
        for i, a in self.parts.items():
            for j, b in other.parts.items():
                p = a.truncate(n) * b.truncate(n)
                out[i + j] = out[i + j] + p if i + j in out else p
        return LogSeries(out, n)

    __rmul__ = __mul__

    def divide_by_series(self, s: PowerSeriesQ) -> "LogSeries":
        inv = s.truncate(min(s.order, self.order)).inverse()
        return LogSeries({k: p * inv for k, p in self.parts.items()}, min(self.order, s.order))

    def __truediv__(self, other) -> "LogSeries":
        if isinstance(other, LogSeries):
            other = other.as_series()
        if isinstance(other, PowerSeriesQ):
            return self.divide_by_series(other)
        return self.scale(1 / _q(other))

    def ddt(self) -> "LogSeries":
        """d/dt using d/dt (z^n L^k) = n z^n L^k + k z^n L^(k-1)."""
        out: dict[int, PowerSeriesQ] = {}
        for k, s in self.parts.items():
            out[k] = out[k] + s.theta() if k in out else s.theta()
            if k:
                out[k - 1] = out[k - 1] + s * k if k - 1 in out else s * k
        return LogSeries(out, self.order)

    def mul_z(self) -> "LogSeries":
        return LogSeries({k: s.shift() for k, s in self.parts.items()}, self.order)


def _poly_mul_mod(a: list, b: list, n: int) -> list:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _poly_pow_mod(a: list, e: int, n: int) -> list:
    out = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(e):
        out = _poly_mul_mod(out, a, n)
    return out


def _unit_inverse_mod(a: list, n: int) -> list:
    out = [Fraction(0)] * n
    out[0] = 1 / Fraction(a[0])
    for k in range(1, n):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1)) * out[0]
    return out


@dataclass(frozen=True)
class PFOperator:
    """sum_k a_k(z) (d/dt)^k with polynomial coefficients a_k (lists in z)."""

    a: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_factored(cls, const: int, shifts: Sequence) -> "PFOperator":
        """(d/dt)^n - const * z * prod_s (d/dt + s), with n = len(shifts)."""
        poly = [Fraction(1)]  # coefficients in x = d/dt
        for s in shifts:
            poly = [Fraction(0)] + poly
            for i in range(len(poly) - 1):
                poly[i] += _q(s) * poly[i + 1]
        n = len(shifts)
        a = []
        for k in range(n + 1):
            a.append(((Fraction(1) if k == n else Fraction(0)), -const * poly[k]))
        return cls(tuple(a))

    @classmethod
    def x33(cls) -> "PFOperator":
        t, tt = Fraction(1, 3), Fraction(2, 3)
        op = cls.from_factored(C, [t, t, tt, tt])
        if op.coefficient(4) != (1, -C) or op.coefficient(3) != (0, -2 * C):
            raise AssertionError("unexpected leading coefficients of the expanded operator")
        return op

    @property
    def rank(self) -> int:
        return len(self.a) - 1

    def coefficient(self, k: int) -> tuple[Fraction, ...]:
        return self.a[k]

    def coefficient_series(self, k: int, order: int) -> PowerSeriesQ:
        return PowerSeriesQ(self.a[k], order)

    def apply(self, s: LogSeries) -> LogSeries:
        out = None
        d = s
        for k in range(self.rank + 1):
            term = d * self.coefficient_series(k, s.order)
            out = term if out is None else out + term
            d = d.ddt()
        return out


def pf_apply(op: PFOperator, s: LogSeries) -> LogSeries:
    return op.apply(s)


def _w_coefficients(order: int, wdeg: int) -> list[list[Fraction]]:
    """For each d < order, the coefficients of w^0..w^(wdeg-1) of
    prod_{r=1}^{3d} (3w+r)^2 / prod_{r=1}^{d} (w+r)^6."""
    cur = [Fraction(1)] + [Fraction(0)] * (wdeg - 1)
    rows = [cur]
    for d in range(1, order):
        num = [Fraction(1)] + [Fraction(0)] * (wdeg - 1)
        for r in range(3 * d - 2, 3 * d + 1):
            num = _poly_mul_mod(num, _poly_pow_mod([Fraction(r), Fraction(3)], 2, wdeg), wdeg)
        den = _poly_pow_mod([Fraction(d), Fraction(1)], 6, wdeg)
        cur = _poly_mul_mod(_poly_mul_mod(cur, num, wdeg), _unit_inverse_mod(den, wdeg), wdeg)
        rows.append(cur)
    return rows


def holomorphic_parts(order: int, count: int = 5) -> list[PowerSeriesQ]:
    """Ĩ_0..Ĩ_{count-1}: the w^q coefficients of the z-sum without e^{wt}."""
    rows = _w_coefficients(order, count)
    return [PowerSeriesQ([row[q] for row in rows]) for q in range(count)]


def i0_series(order: int = DEFAULT_ORDER, count: int = 4) -> list[LogSeries]:
    """I_{0,q} for q < count; count = 5 also yields I_{0,4}."""
    if order < 1:
        raise ValueError("order must be at least 1")
    if count > MAX_L_DEGREE + 1:
        raise ValueError(f"at most {MAX_L_DEGREE + 1} components are supported")
    hol = holomorphic_parts(order, count)
    out = []
    for q in range(count):
        parts = {j: hol[q - j] * Fraction(1, factorial(j)) for j in range(q + 1)}
        out.append(LogSeries(parts, order))
    return out


def ipq_table(order: int = DEFAULT_ORDER) -> dict[tuple[int, int], LogSeries]:
    """I_{p,q} for 0 <= p, q <= 4 via I_{p,q} = d/dt (I_{p-1,q} / I_{p-1,p-1})."""
    table = {(0, q): s for q, s in enumerate(i0_series(order, 5))}
    for p in range(1, 5):
        diag = table[(p - 1, p - 1)]
        if not diag.is_pure():
            raise ArithmeticError(f"I_{p-1},{p-1} is not a pure series")
        den = diag.as_series()
        if den[0] == 0:
            raise ZeroDivisionError(f"I_{p-1},{p-1} is not a unit")
        for q in range(5):
            table[(p, q)] = (table[(p - 1, q)] / den).ddt()
    return table


def diagonal(table: dict, p: int) -> PowerSeriesQ:
    return table[(p, p)].as_series()


@dataclass(frozen=True)
class MirrorMap:
    q_over_z: PowerSeriesQ  # Q(z)/z
    j_tilde: PowerSeriesQ  # Ĩ_1/Ĩ_0
    log_q: LogSeries  # L + j_tilde

    @property
    def q(self) -> PowerSeriesQ:
        return self.q_over_z.shift()


def mirror_map(order: int = DEFAULT_ORDER) -> MirrorMap:
    i00, i01 = i0_series(order, 2)
    log_q = i01 / i00
    j = (log_q - LogSeries.L(order)).as_series()
    if j[0] != 0:
        raise ArithmeticError("Ĩ_1/Ĩ_0 has a constant term")
    return MirrorMap(j.exp(), j, log_q)


def invert_mirror(q_over_z: PowerSeriesQ, order: int | None = None) -> PowerSeriesQ:
    """z(Q) with Q = z * q_over_z(z), by Newton iteration on F(z) = z*g(z) - Q."""
    n = order or q_over_z.order
    g = q_over_z.truncate(n)
    if g[0] == 0:
        raise ZeroDivisionError("Q/z must have a nonzero constant term")
    Q = PowerSeriesQ.z(n)
    F = g.shift()  # z*g(z)
    dF = PowerSeriesQ(F.derivative().coeffs, n)  # exact up to z^(n-2), enough below
    z = Q * (1 / g[0])
    prec = 2
    while True:
        z = z - (F.compose(z) - Q) / dF.compose(z)
        if prec >= n:
            break
        prec *= 2
    # one more step guards against the truncated derivative tail
    z = z - (F.compose(z) - Q) / dF.compose(z)
    return z


def yukawa_from_pf(op: PFOperator, order: int = DEFAULT_ORDER) -> PowerSeriesQ:
    """Y with (z d/dz) Y = -(1/2)(a_{n-1}/a_n) Y and Y(0) = 1."""
    n = op.rank
    an = op.coefficient_series(n, order)
    if an[0] == 0:
        raise ZeroDivisionError("leading coefficient vanishes at z = 0")
    r = op.coefficient_series(n - 1, order) / an * Fraction(-1, 2)
    if r[0] != 0:
        raise ValueError("a_{n-1}(0) must vanish for a power-series solution with Y(0) = 1")
    y = [Fraction(1)] + [Fraction(0)] * (order - 1)
    for k in range(1, order):
        y[k] = sum(r[j] * y[k - j] for j in range(1, k + 1)) / k
    return PowerSeriesQ(y)


def series_report(order: int = DEFAULT_ORDER) -> dict:
    """Tables for the CLI plus the identity checks."""
    table = ipq_table(order)
    diag = [diagonal(table, p) for p in range(5)]
    op = PFOperator.x33()
    i0 = i0_series(order, 4)
    annihilated = [pf_apply(op, s).is_zero() for s in i0]
    prod = diag[0]
    for d in diag[1:]:
        prod = prod * d
    closed = (1 - C * PowerSeriesQ.z(order)).inverse()
    y = yukawa_from_pf(op, order)
    mm = mirror_map(order)
    checks = {
        "pf_annihilation": all(annihilated),
        "diagonal_symmetry": all(diag[p] == diag[4 - p] for p in range(5)),
        "diagonal_product": prod == closed,
        "diagonal_unit": all(d[0] == 1 for d in diag),
        "yukawa_closed_form": y == closed,
        "lower_triangle_zero": all(table[(p, q)].is_zero() for p in range(5) for q in range(p)),
    }
    return {
        "order": order,
        "I0": [{str(k): [str(c) for c in s.part(k).coeffs] for k in sorted(s.parts)} for s in i0],
        "Ipp": [[str(c) for c in d.coeffs] for d in diag],
        "Q": [str(c) for c in mm.q.coeffs],
        "yukawa": [str(c) for c in y.coeffs],
        "checks": checks,
    }
