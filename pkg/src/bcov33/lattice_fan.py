"""The fans Sigma and Pi in the rank-5 lattice N = {x in Z^6 : sum x = 0}.

Pi is assembled exactly as the original Sage construction does it: three
families of simplices obtained from the edgewise 3-subdivisions of the
standard 3- and 4-simplex, plus prism subdivisions joining the two halves.
Sigma is the face fan of the 12-vertex polytope whose nonzero lattice points
are the 110 rays of Pi.

All matrix work happens in Z^5 by dropping the sixth coordinate.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import exact
from .polytope import Polytope

log = logging.getLogger(__name__)

W_SHIFT = (1, 1, 1, -1, -1, -1)


class FanError(ValueError):
    """Raised when a fan fails an internal consistency check."""


@dataclass(frozen=True, order=True)
class LatticeVector:
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != 6 or sum(self.coords) != 0:
            raise ValueError(f"{self.coords} is not a point of N")

    @property
    def proj(self) -> tuple[int, ...]:
        return self.coords[:5]

    @classmethod
    def from_proj(cls, p: Sequence[int]) -> "LatticeVector":
        p = tuple(int(x) for x in p)
        return cls(p + (-sum(p),))


def _triple_ok(i, j, k):
    if not 1 <= i <= j <= k <= 6:
        raise ValueError(f"need 1 <= i <= j <= k <= 6, got ({i}, {j}, {k})")


def ray_u(i: int, j: int, k: int) -> LatticeVector:
    """u_ijk = -e1 - e2 - e3 + e_i + e_j + e_k."""
    _triple_ok(i, j, k)
    if (i, j, k) == (1, 2, 3):
        raise ValueError("u(1,2,3) is the zero vector and not a ray generator")
    a = [-1, -1, -1, 0, 0, 0]
    for t in (i, j, k):
        a[t - 1] += 1
    return LatticeVector(tuple(a))


def ray_v(i: int, j: int, k: int) -> LatticeVector:
    """v_ijk = -e4 - e5 - e6 + e_i + e_j + e_k."""
    _triple_ok(i, j, k)
    if (i, j, k) == (4, 5, 6):
        raise ValueError("v(4,5,6) is the zero vector and not a ray generator")
    a = [0, 0, 0, -1, -1, -1]
    for t in (i, j, k):
        a[t - 1] += 1
    return LatticeVector(tuple(a))


def ray_labels() -> list[tuple[str, tuple[int, int, int]]]:
    """Canonical ray order of Pi: the 55 u-triples, then the 55 v-triples."""
    triples = list(itertools.combinations_with_replacement(range(1, 7), 3))
    return [("u", t) for t in triples if t != (1, 2, 3)] + [("v", t) for t in triples if t != (4, 5, 6)]


# -- edgewise subdivisions and prisms -------------------------------------

def esd3_simplex3() -> list[list[list[int]]]:
    """Edgewise 3-subdivision of conv{3e_1..3e_4}: 27 simplices."""
    simplices = []
    for i in range(3):
        for j in range(3):
            for k in range(3):
                colors = [(t > 4 * i) + (t > 1 + 4 * j) + (t > 2 + 4 * k) for t in range(12)]
                simplex = []
                for j1 in range(4):
                    p = [0, 0, 0, 0]
                    for i1 in range(3):
                        p[colors[j1 + i1 * 4]] += 1
                    simplex.append(p)
                simplices.append(simplex)
    return simplices


def esd3_simplex4() -> list[list[list[int]]]:
    """Edgewise 3-subdivision of conv{3e_1..3e_5}: 81 simplices."""
    simplices = []
    for i1, i2, i3, i4 in itertools.product(range(3), repeat=4):
        colors = [
            (t > 5 * i1) + (t > 1 + 5 * i2) + (t > 2 + 5 * i3) + (t > 3 + 5 * i4)
            for t in range(15)
        ]
        simplex = []
        for j in range(5):
            p = [0, 0, 0, 0, 0]
            for i in range(3):
                p[colors[j + i * 5]] += 1
            simplex.append(p)
        simplices.append(simplex)
    return simplices


def prism_subdivision(sigma: Sequence[Sequence[int]]) -> list[list[list[int]]]:
    """Split the prism over ``sigma`` and ``sigma + w`` into 4 simplices."""
    if len(sigma) != 4:
        raise ValueError("prism subdivision needs a 3-simplex (4 points)")
    lifted = [[x + w for x, w in zip(p, W_SHIFT)] for p in sigma]
    out = []
    for i in range(4):
        out.append([list(sigma[t]) for t in range(i + 1)] + [list(lifted[t]) for t in range(i, 4)])
    return out


def maximal_cone_generators() -> list[list[tuple[int, ...]]]:
    """Generator lists (6-coordinate) of the maximal cones of Pi, in construction order."""
    cones = []
    for i in range(3):
        for simplex in esd3_simplex4():
            cone = []
            for p in simplex:
                q = p[:i] + [0] + p[i:]
                q[0] -= 1
                q[1] -= 1
                q[2] -= 1
                cone.append(tuple(q))
            cones.append(cone)
    for i in range(3, 6):
        for simplex in esd3_simplex4():
            cone = []
            for p in simplex:
                q = p[:i] + [0] + p[i:]
                q[3] -= 1
                q[4] -= 1
                q[5] -= 1
                cone.append(tuple(q))
            cones.append(cone)
    for i in range(3):
        for j in range(3, 6):
            for simplex in esd3_simplex3():
                base = []
                for p in simplex:
                    q = p[:i] + [0] + p[i:]
                    q = q[:j] + [0] + q[j:]
                    q[0] -= 1
                    q[1] -= 1
                    q[2] -= 1
                    base.append(q)
                for s in prism_subdivision(base):
                    cones.append([tuple(p) for p in s])
    return cones


# -- fan data -----------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    generators: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.generators)

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.generators))


@dataclass
class Fan:
    rays: list[LatticeVector]
    maximal_cones: list[Cone]
    labels: list[str] | None = None
    _faces: dict[int, list[Cone]] = field(default_factory=dict, repr=False)
    _ray_cones: dict[int, list[int]] | None = field(default=None, repr=False)

    @property
    def simplicial(self) -> bool:
        return all(c.dim == 5 for c in self.maximal_cones)

    def ray_index(self) -> dict[tuple[int, ...], int]:
        return {r.coords: i for i, r in enumerate(self.rays)}

    def generator_matrix(self, cone: Cone) -> list[list[int]]:
        """Rows are the projected generators of ``cone`` in its stored order."""
        return [list(self.rays[i].proj) for i in cone.generators]

    def cones_with_ray(self, r: int) -> list[int]:
        if self._ray_cones is None:
            index: dict[int, list[int]] = {}
            for k, c in enumerate(self.maximal_cones):
                for g in c.generators:
                    index.setdefault(g, []).append(k)
            self._ray_cones = index
        return self._ray_cones.get(r, [])

    def to_json(self) -> dict:
        return {
            "rays": [list(r.proj) for r in self.rays],
            "maximal_cones": [list(c.generators) for c in self.maximal_cones],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        rays = [LatticeVector.from_proj(r) for r in data["rays"]]
        cones = [Cone(tuple(int(i) for i in c)) for c in data["maximal_cones"]]
        for c in cones:
            if any(not 0 <= i < len(rays) for i in c.generators):
                raise FanError(f"cone {c.generators} refers to a missing ray")
        return cls(rays, cones)


def build_fan_pi() -> Fan:
    labels = ray_labels()
    rays = [ray_u(*t) if kind == "u" else ray_v(*t) for kind, t in labels]
    index = {r.coords: i for i, r in enumerate(rays)}
    if len(index) != 110:
        raise FanError(f"expected 110 distinct rays, got {len(index)}")
    cones = []
    for gens in maximal_cone_generators():
        try:
            cones.append(Cone(tuple(index[g] for g in gens)))
        except KeyError as exc:
            raise FanError(f"construction produced a non-ray generator {exc}") from None
    fan = Fan(rays, cones, labels=[f"{k}{''.join(map(str, t))}" for k, t in labels])
    used = {g for c in cones for g in c.generators}
    if used != set(range(len(rays))):
        raise FanError(f"{len(rays) - len(used)} declared rays never appear in a maximal cone")
    return fan


SIGMA_VERTICES = [ray_u(i, i, i) for i in range(1, 7)] + [ray_v(i, i, i) for i in range(1, 7)]


def polytope_p() -> Polytope:
    """conv(u_1..u_6, v_1..v_6) in projected coordinates (12 vertices, 111 lattice points)."""
    return Polytope([v.proj for v in SIGMA_VERTICES])


def build_fan_sigma() -> Fan:
    """Face fan of ``polytope_p``; its maximal cones are the cones over facets."""
    p = polytope_p()
    order = {v.proj: i for i, v in enumerate(SIGMA_VERTICES)}
    cones = []
    for normal, b in p.inequalities():
        if b <= 0:
            raise FanError("origin is not interior to P")
        gens = tuple(i for v, i in order.items() if sum(a * x for a, x in zip(normal, v)) == b)
        cones.append(Cone(gens))
    cones.sort(key=lambda c: c.generators)
    labels = [f"u{i}" for i in range(1, 7)] + [f"v{i}" for i in range(1, 7)]
    return Fan(list(SIGMA_VERTICES), cones, labels=labels)


# -- queries and certificates -------------------------------------------------

def faces(fan: Fan, d: int) -> list[Cone]:
    """All distinct d-dimensional faces, as sorted generator tuples in sorted order."""
    if not 0 <= d <= 5:
        raise ValueError("face dimension must be in 0..5")
    if not fan.simplicial:
        raise FanError("face enumeration needs a simplicial fan")
    if d not in fan._faces:
        seen = set()
        for c in fan.maximal_cones:
            for sub in itertools.combinations(sorted(c.generators), d):
                seen.add(sub)
        fan._faces[d] = [Cone(s) for s in sorted(seen)]
    return fan._faces[d]


def containing_maximal_cone(fan: Fan, sigma: Cone) -> Cone:
    """First maximal cone (construction order) having ``sigma`` as a face."""
    gens = set(sigma.generators)
    if not gens:
        return fan.maximal_cones[0]
    first = min(gens, key=lambda g: len(fan.cones_with_ray(g)))
    for k in fan.cones_with_ray(first):
        c = fan.maximal_cones[k]
        if gens.issubset(c.generators):
            return c
    raise FanError(f"no maximal cone contains {sigma.generators}")


def check_smooth(fan: Fan) -> bool:
    if not fan.simplicial:
        raise FanError("smoothness check needs a simplicial fan")
    return all(abs(exact.det_int(fan.generator_matrix(c))) == 1 for c in fan.maximal_cones)


def check_complete(fan: Fan) -> bool:
    """Every 4-face of a maximal cone lies in exactly two maximal cones."""
    if not fan.simplicial:
        raise FanError("facet pairing needs a simplicial fan")
    counts: dict[tuple[int, ...], int] = {}
    for c in fan.maximal_cones:
        if exact.det_int(fan.generator_matrix(c)) == 0:
            return False
        for sub in itertools.combinations(sorted(c.generators), 4):
            counts[sub] = counts.get(sub, 0) + 1
    return bool(counts) and all(v == 2 for v in counts.values())


def _in_simplicial_cone(gen_rows: list[list[int]], x: Sequence[int]) -> bool:
    # x = sum lambda_i g_i with lambda >= 0; columns are generators
    cols = [list(r) for r in zip(*gen_rows)]
    lam = exact.solve(cols, list(x))
    return all(v >= 0 for v in lam)


def _facet_functionals(coarse: Fan) -> list[tuple[list[Fraction], Fraction]]:
    p = Polytope([r.proj for r in coarse.rays])
    out = []
    for normal, b in p.inequalities():
        out.append(([Fraction(a) for a in normal], Fraction(b)))
    return out


def cone_of_point(coarse: Fan, x: Sequence[int]) -> list[int]:
    """Indices of maximal cones of ``coarse`` containing ``x``.

    Simplicial cones are tested by solving the generator system; for a
    face fan the cones containing ``x`` are those whose facet functional
    attains the maximum at ``x``.
    """
    if coarse.simplicial:
        return [k for k, c in enumerate(coarse.maximal_cones) if _in_simplicial_cone(coarse.generator_matrix(c), x)]
    return _face_fan_cones(coarse, x)


def _face_fan_cones(coarse: Fan, x: Sequence[int]) -> list[int]:
    funcs = _facet_functionals(coarse)
    vals = [sum(a * v for a, v in zip(n, x)) / b for n, b in funcs]
    top = max(vals)
    gen_sets = [set(c.generators) for c in coarse.maximal_cones]
    out = []
    for (n, b), v in zip(funcs, vals):
        if v != top:
            continue
        gens = {i for i, r in enumerate(coarse.rays) if sum(a * y for a, y in zip(n, r.proj)) == b}
        out.extend(k for k, s in enumerate(gen_sets) if s == gens)
    return sorted(set(out))


def check_refines(fine: Fan, coarse: Fan) -> bool:
    """Every maximal cone of ``fine`` sits inside one maximal cone of ``coarse``,
    and every maximal cone of ``coarse`` contains at least one of ``fine``."""
    if not fine.simplicial:
        raise FanError("refinement check needs a simplicial fine fan")
    ray_cones = [set(cone_of_point(coarse, r.proj)) for r in fine.rays]
    hit = set()
    for c in fine.maximal_cones:
        common = set.intersection(*(ray_cones[g] for g in c.generators))
        if not common:
            return False
        hit.update(common)
    return hit == set(range(len(coarse.maximal_cones)))


def certify_pi(fan: Fan | None = None) -> dict:
    """Run every structural check on Pi and return a summary."""
    fan = fan or build_fan_pi()
    sigma = build_fan_sigma()
    pts = polytope_p().integral_points()
    nonzero = {p for p in pts if any(p)}
    rays_in_p = all(r.proj in nonzero for r in fan.rays)
    used = {g for c in fan.maximal_cones for g in c.generators}
    return {
        "rays": len(fan.rays),
        "maximal_cones": len(fan.maximal_cones),
        "smooth": check_smooth(fan),
        "complete": check_complete(fan),
        "refines_sigma": check_refines(fan, sigma),
        "ray_closure": used == set(range(len(fan.rays))),
        "rays_are_lattice_points_of_P": rays_in_p and len(nonzero) == len(fan.rays),
        "sigma_rays": len(sigma.rays),
        "sigma_maximal_cones": len(sigma.maximal_cones),
    }
