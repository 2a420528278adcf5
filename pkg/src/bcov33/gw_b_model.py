"""Genus-one B-model series F_{1,A} and its Q-expansion coefficients N_1^d."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .series_engine import (
    C, DEFAULT_ORDER, LogSeries, PowerSeriesQ, diagonal, holomorphic_parts,
    invert_mirror, ipq_table, mirror_map,
)

# intersection data of X_{3,3}: c_2 = 6 H^2 and H^3 = 9
C2_DOT_H = 6 * 9
CHI_X33 = -144


def n1_zero(c2_dot_h: int = C2_DOT_H) -> Fraction:
    return Fraction(-1, 24) * c2_dot_h


@dataclass
class GenusOneSeries:
    n1_0: Fraction
    n1: dict[int, Fraction]
    constant: Fraction
    order: int
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "N1_0": str(self.n1_0),
            "N1": {str(d): str(v) for d, v in sorted(self.n1.items())},
            "constant": str(self.constant),
            "order": self.order,
        }


def f1a_in_z(order: int = DEFAULT_ORDER) -> LogSeries:
    """-(9/4) L - (7/12) log(1 - 3^6 z) + (chi/24) log Ĩ_0
    - (1/2)(6 log Ĩ_0 + 3 log I_11 + log I_22)."""
    table = ipq_table(order)
    i0 = holomorphic_parts(order, 1)[0]
    i11, i22 = diagonal(table, 1), diagonal(table, 2)
    z = PowerSeriesQ.z(order)
    pure = (
        (1 - C * z).log() * Fraction(-7, 12)
        + i0.log() * Fraction(CHI_X33, 24)
        - (i0.log() * 6 + i11.log() * 3 + i22.log()) * Fraction(1, 2)
    )
    return LogSeries({0: pure, 1: PowerSeriesQ.constant(n1_zero(), order)}, order)


def q_expansion(g: PowerSeriesQ, z_of_q: PowerSeriesQ) -> PowerSeriesQ:
    return g.compose(z_of_q)


def n1_invariants(order: int = DEFAULT_ORDER, identity_mirror: bool = False) -> GenusOneSeries:
    """Coefficients of F_{1,A} = N_1^0 log Q + sum_d N_1^d Q^d.

    With ``identity_mirror`` the substitution uses Q = z, which returns the
    coefficients of the z-series itself.
    """
    f = f1a_in_z(order)
    n0 = n1_zero()
    mm = mirror_map(order)
    g_log = f - mm.log_q.scale(n0)
    if not g_log.is_pure():
        raise ArithmeticError("log Q term failed to cancel the L part")
    g = g_log.as_series()
    z_of_q = PowerSeriesQ.z(order) if identity_mirror else invert_mirror(mm.q_over_z, order)
    h = q_expansion(g, z_of_q)
    return GenusOneSeries(n0, {d: h[d] for d in range(1, order)}, h[0], order)
