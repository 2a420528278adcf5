"""Cox-ring data on P_Pi: the monomials b_t, the equations h1, h2 at psi = 0,
their restrictions to torus strata, and the divisors L1, L2.

A Cox monomial is a sparse map ray-index -> exponent over the rays of Pi.
Restricting to a stratum T_sigma uses the affine chart U_delta of a maximal
cone delta containing sigma: Cox variables of rays outside delta are set to
1, the five variables of delta become the chart coordinates (in delta's
generator order), and monomials divisible by a variable of sigma vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import exact
from .lattice_fan import Cone, Fan, ray_labels
from .polytope import Polytope

# Laurent polynomial in chart coordinates: exponent tuple -> coefficient
LaurentPoly = dict


@dataclass(frozen=True)
class CoxMonomial:
    exponents: tuple[tuple[int, int], ...]  # sorted (ray index, exponent > 0)

    @classmethod
    def from_map(cls, exps: Mapping[int, int]) -> "CoxMonomial":
        if any(e < 0 for e in exps.values()):
            raise ValueError("Cox monomial exponents must be nonnegative")
        return cls(tuple(sorted((r, e) for r, e in exps.items() if e)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.exponents)

    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def __mul__(self, other: "CoxMonomial") -> "CoxMonomial":
        d = self.as_dict()
        for r, e in other.exponents:
            d[r] = d.get(r, 0) + e
        return CoxMonomial.from_map(d)


@dataclass(frozen=True)
class CoxPolynomial:
    terms: tuple[tuple[Fraction, CoxMonomial], ...]

    @classmethod
    def from_terms(cls, terms) -> "CoxPolynomial":
        acc: dict[CoxMonomial, Fraction] = {}
        for c, m in terms:
            acc[m] = acc.get(m, Fraction(0)) + Fraction(c)
        return cls(tuple((c, m) for m, c in sorted(acc.items(), key=lambda kv: kv[0].exponents) if c))

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class ToricDivisor:
    coeffs: tuple[int, ...]  # one coefficient per ray of the fan

    def __neg__(self):
        return ToricDivisor(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        return ToricDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __getitem__(self, i):
        return self.coeffs[i]


_LABELS = ray_labels()
_INDEX = {(k, t): i for i, (k, t) in enumerate(_LABELS)}


def ray_position(kind: str, triple: tuple[int, int, int]) -> int:
    """Index of u_ijk / v_ijk in the canonical ray order of Pi."""
    return _INDEX[(kind, tuple(triple))]


def monomial_b(t: int) -> CoxMonomial:
    """b_t: every ray u_ijk, v_ijk raised to the number of times t occurs in (i,j,k)."""
    if not 1 <= t <= 6:
        raise ValueError("t must be in 1..6")
    return CoxMonomial.from_map({i: trip.count(t) for i, (_, trip) in enumerate(_LABELS)})


def h1_at_psi0() -> CoxPolynomial:
    return CoxPolynomial.from_terms([(-1, monomial_b(t)) for t in (1, 2, 3)])


def h2_at_psi0() -> CoxPolynomial:
    return CoxPolynomial.from_terms([(-1, monomial_b(t)) for t in (4, 5, 6)])


def restrict_to_stratum(p: CoxPolynomial, sigma: Cone, delta: Cone) -> LaurentPoly:
    """Restriction of ``p`` to T_sigma in the chart of ``delta``."""
    if not set(sigma.generators).issubset(delta.generators):
        raise ValueError(f"{sigma.generators} is not a face of {delta.generators}")
    zero = set(sigma.generators)
    out: dict[tuple[int, ...], Fraction] = {}
    for c, mono in p.terms:
        exps = mono.as_dict()
        if any(exps.get(r, 0) > 0 for r in zero):
            continue
        e = tuple(exps.get(r, 0) for r in delta.generators)
        out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def newton_polytope(f: LaurentPoly) -> Polytope:
    return Polytope(list(f))


def verify_saturation_poly(f: LaurentPoly) -> bool:
    """The Newton polytope of ``f`` has no lattice points beyond its exponents."""
    if not f:
        return True
    return len(newton_polytope(f).integral_points()) == len(f)


def verify_saturation(sigma: Cone, delta: Cone) -> bool:
    return all(
        verify_saturation_poly(restrict_to_stratum(p, sigma, delta))
        for p in (h1_at_psi0(), h2_at_psi0())
    )


def divisor_L1() -> ToricDivisor:
    """-D_{v123} + sum of all D_{u_ijk}."""
    c = [1 if kind == "u" else 0 for kind, _ in _LABELS]
    c[ray_position("v", (1, 2, 3))] = -1
    return ToricDivisor(tuple(c))


def divisor_L2() -> ToricDivisor:
    """-D_{u456} + sum of all D_{v_ijk}."""
    c = [1 if kind == "v" else 0 for kind, _ in _LABELS]
    c[ray_position("u", (4, 5, 6))] = -1
    return ToricDivisor(tuple(c))


def character_between(fan: Fan, a: CoxMonomial, b: CoxMonomial, chart: Cone | None = None):
    """The character m (projected coordinates) with a/b = chi^m, or None.

    ``m`` is solved on one chart and then checked on every ray; it exists
    exactly when ``a`` and ``b`` have the same divisor class.
    """
    chart = chart or fan.maximal_cones[0]
    da, db = a.as_dict(), b.as_dict()
    diff = [da.get(r, 0) - db.get(r, 0) for r in range(len(fan.rays))]
    m = exact.solve(fan.generator_matrix(chart), [diff[r] for r in chart.generators])
    for r, ray in enumerate(fan.rays):
        if sum(x * y for x, y in zip(m, ray.proj)) != diff[r]:
            return None
    return tuple(int(x) for x in m) if all(x.denominator == 1 for x in m) else None


def is_homogeneous(fan: Fan, p: CoxPolynomial) -> bool:
    first = p.terms[0][1]
    return all(character_between(fan, m, first) is not None for _, m in p.terms[1:])


def torus_characters(fan: Fan, p: CoxPolynomial) -> list[tuple[Fraction, tuple[int, ...]]]:
    """Terms of ``p`` on the open torus, dehomogenised by the first term.

    Characters are in the dual of the projected lattice, i.e. m_i - m_6.
    """
    first = p.terms[0][1]
    return [(c, character_between(fan, m, first)) for c, m in p.terms]
