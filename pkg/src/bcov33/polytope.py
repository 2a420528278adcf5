"""Exact rational polytopes: hulls, Minkowski sums, lattice points, volumes.

A ``Polytope`` is built from any finite point set. The affine span is found
by row reduction and parametrised by a set of *pivot coordinates*: projecting
onto those coordinates is an affine isomorphism of the span, so all facet
work happens in a full-dimensional copy of the polytope. Facets come from an
incremental double-description pass over the homogenised point cone.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from . import exact

Point = tuple


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _double_description(rows: list[tuple[int, ...]], dim: int) -> list[tuple[tuple[int, ...], int]]:
    """Extreme rays of ``{y : row . y >= 0 for all rows}``.

    ``rows`` must span R^dim, so the cone is pointed. Returns each extreme
    ray (primitive integer vector) with the bitmask of rows tight on it.
    """
    basis: list[int] = []
    for i in range(len(rows)):
        if exact.rank([rows[j] for j in basis + [i]]) == len(basis) + 1:
            basis.append(i)
            if len(basis) == dim:
                break
    if len(basis) != dim:
        raise ValueError("constraint rows do not span the space")
    inv = exact.inverse([rows[i] for i in basis])
    rays: list[tuple[tuple[int, ...], int]] = []
    for j in range(dim):
        col = exact.primitive([inv[i][j] for i in range(dim)])
        tight = 0
        for k, b in enumerate(basis):
            if k != j:
                tight |= 1 << b
        rays.append((col, tight))

    in_basis = set(basis)
    for idx, row in enumerate(rows):
        if idx in in_basis:
            continue
        bit = 1 << idx
        pos, neg, zero = [], [], []
        for k, (ray, tight) in enumerate(rays):
            s = sum(a * b for a, b in zip(row, ray))
            if s > 0:
                pos.append((k, s))
            elif s < 0:
                neg.append((k, s))
            else:
                zero.append(k)
        if not neg:
            for k in zero:
                rays[k] = (rays[k][0], rays[k][1] | bit)
            continue
        new = [rays[k] for k, _ in pos] + [(rays[k][0], rays[k][1] | bit) for k in zero]
        tights = [t for _, t in rays]
        for kp, sp in pos:
            rp, tp = rays[kp]
            for kn, sn in neg:
                rn, tn = rays[kn]
                common = tp & tn
                if _popcount(common) < dim - 2:
                    continue
                if any(w != kp and w != kn and t & common == common for w, t in enumerate(tights)):
                    continue
                v = [sp * a - sn * b for a, b in zip(rn, rp)]
                new.append((exact.primitive(v), common | bit))
        rays = new
    return rays


class Polytope:
    """Convex hull of finitely many rational points.

    Attributes
    ----------
    ambient_dim : int
    vertices : tuple of points (ints where integral, else Fractions),
        sorted lexicographically.
    dim : int
        Dimension of the affine span (-1 never occurs; the input is nonempty).
    """

    __slots__ = (
        "ambient_dim", "vertices", "dim", "pivots", "_base", "_span_rows",
        "_facets", "_facet_masks", "_volume",
    )

    def __init__(self, points: Iterable[Sequence]):
        pts = sorted({tuple(_norm(Fraction(x)) if not isinstance(x, int) else x for x in p) for p in points})
        if not pts:
            raise ValueError("a polytope needs at least one point")
        self.ambient_dim = len(pts[0])
        if any(len(p) != self.ambient_dim for p in pts):
            raise ValueError("points of mixed dimension")
        base = pts[0]
        diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
        span_rows, pivots = exact.rref(diffs) if diffs else ([], [])
        self.dim = len(pivots)
        self.pivots = tuple(pivots)
        self._base = base
        self._span_rows = span_rows
        self._volume = None
        if self.dim == 0:
            self.vertices = (base,)
            self._facets = []
            self._facet_masks = []
            return
        proj = [tuple(p[c] for c in pivots) for p in pts]
        rows = []
        for q in proj:
            den = 1
            for x in q:
                if isinstance(x, Fraction):
                    den = den * x.denominator // math.gcd(den, x.denominator)
            rows.append((den,) + tuple(int(x * den) for x in q))
        rays = _double_description(rows, self.dim + 1)
        tights = []
        for _, tight in rays:
            tights.append(tight)
        # point i is a vertex iff no other point is tight on every facet tight at i
        per_point = [0] * len(pts)
        for f, tight in enumerate(tights):
            for i in range(len(pts)):
                if tight >> i & 1:
                    per_point[i] |= 1 << f
        vert_idx = [
            i for i in range(len(pts))
            if not any(j != i and per_point[j] & per_point[i] == per_point[i] for j in range(len(pts)))
        ]
        self.vertices = tuple(pts[i] for i in vert_idx)
        self._facets = []
        self._facet_masks = []
        for (ray, _), tight in zip(rays, tights):
            b0, normal = ray[0], ray[1:]
            # normal . x + b0 >= 0  <=>  (-normal) . x <= b0
            self._facets.append((tuple(-a for a in normal), b0))
            mask = 0
            for k, i in enumerate(vert_idx):
                if tight >> i & 1:
                    mask |= 1 << k
            self._facet_masks.append(mask)

    # -- basic queries -------------------------------------------------
    def __repr__(self):
        return f"Polytope(dim={self.dim}, ambient={self.ambient_dim}, vertices={len(self.vertices)})"

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def project(self, p: Sequence) -> tuple:
        return tuple(p[c] for c in self.pivots)

    def in_span(self, p: Sequence) -> bool:
        """Whether ``p`` lies in the affine span."""
        d = [a - b for a, b in zip(p, self._base)]
        for j in range(self.ambient_dim):
            if j in self.pivots:
                continue
            expected = sum(d[c] * row[j] for c, row in zip(self.pivots, self._span_rows))
            if d[j] != expected:
                return False
        return True

    def inequalities(self) -> list[tuple[tuple[int, ...], int]]:
        """Facet inequalities ``a . x <= b`` in pivot coordinates."""
        return list(self._facets)

    def equations(self) -> list[tuple[tuple, Fraction]]:
        """Affine equations ``c . x = e`` (ambient coordinates) cutting out the span."""
        eqs = []
        for j in range(self.ambient_dim):
            if j in self.pivots:
                continue
            c = [Fraction(0)] * self.ambient_dim
            c[j] = Fraction(1)
            for col, row in zip(self.pivots, self._span_rows):
                c[col] -= row[j]
            eqs.append((tuple(c), sum(a * b for a, b in zip(c, self._base))))
        return eqs

    def contains(self, p: Sequence) -> bool:
        if not self.in_span(p):
            return False
        q = self.project(p)
        return all(sum(a * x for a, x in zip(n, q)) <= b for n, b in self._facets)

    def is_coordinate_aligned(self) -> bool:
        """True when the affine span is a translate of the span of the pivot axes."""
        return all(row[j] == 0 for row in self._span_rows for j in range(self.ambient_dim) if j not in self.pivots)

    # -- constructions -------------------------------------------------
    def __add__(self, other: "Polytope") -> "Polytope":
        return minkowski_sum(self, other)

    def dilate(self, k) -> "Polytope":
        return Polytope([tuple(k * x for x in v) for v in self.vertices])

    def translate(self, t: Sequence) -> "Polytope":
        return Polytope([tuple(x + y for x, y in zip(v, t)) for v in self.vertices])

    # -- triangulation and volume --------------------------------------
    def _subfacets(self, face: int) -> list[int]:
        cands = {face & f for f in self._facet_masks}
        cands.discard(face)
        cands.discard(0)
        return [c for c in cands if not any(c != o and c & o == c for o in cands)]

    def triangulation(self) -> list[tuple[int, ...]]:
        """Pulling triangulation; each simplex is a tuple of vertex indices."""
        if self.dim == 0:
            return [(0,)]
        memo: dict[tuple[int, int], list[int]] = {}

        def tri(face: int, d: int) -> list[int]:
            key = (face, d)
            if key in memo:
                return memo[key]
            if _popcount(face) == d + 1:
                out = [face]
            else:
                apex = face & -face
                out = []
                for sub in self._subfacets(face):
                    if sub & apex:
                        continue
                    out.extend(s | apex for s in tri(sub, d - 1))
            memo[key] = out
            return out

        full = (1 << len(self.vertices)) - 1
        simplices = []
        for mask in tri(full, self.dim):
            simplices.append(tuple(i for i in range(len(self.vertices)) if mask >> i & 1))
        return simplices

    def lattice_volume(self) -> Fraction:
        """Lebesgue volume in pivot coordinates (full-dimensional measure)."""
        if self._volume is None:
            if self.dim == 0:
                self._volume = Fraction(1)
            else:
                proj = [self.project(v) for v in self.vertices]
                total = Fraction(0)
                for simplex in self.triangulation():
                    v0 = proj[simplex[0]]
                    rows = [[a - b for a, b in zip(proj[i], v0)] for i in simplex[1:]]
                    if all(isinstance(x, int) for r in rows for x in r):
                        total += abs(exact.det_int(rows))
                    else:
                        total += abs(exact.det(rows))
                self._volume = Fraction(total) / math.factorial(self.dim)
        return self._volume

    # -- lattice points ------------------------------------------------
    def integral_points(self) -> list[tuple[int, ...]]:
        """All integer points, sorted lexicographically."""
        lo = [math.ceil(min(v[c] for v in self.vertices)) for c in self.pivots]
        hi = [math.floor(max(v[c] for v in self.vertices)) for c in self.pivots]
        rest = [j for j in range(self.ambient_dim) if j not in self.pivots]
        out = []
        for q in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            if not all(sum(a * x for a, x in zip(n, q)) <= b for n, b in self._facets):
                continue
            p = [0] * self.ambient_dim
            for c, x in zip(self.pivots, q):
                p[c] = x
            ok = True
            for j in rest:
                val = self._base[j] + sum((x - self._base[c]) * row[j] for c, x, row in zip(self.pivots, q, self._span_rows))
                if isinstance(val, Fraction):
                    if val.denominator != 1:
                        ok = False
                        break
                    val = int(val)
                p[j] = val
            if ok:
                out.append(tuple(p))
        out.sort()
        return out


def hull(points: Iterable[Sequence]) -> Polytope:
    return Polytope(points)


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    if p.ambient_dim != q.ambient_dim:
        raise ValueError(f"ambient dimensions differ: {p.ambient_dim} vs {q.ambient_dim}")
    return Polytope([tuple(a + b for a, b in zip(u, v)) for u in p.vertices for v in q.vertices])


def volume_in_coordinate_span(p: Polytope) -> Fraction:
    """Volume of ``p`` inside the coordinate subspace parallel to its span.

    Raises ValueError when the affine span is not parallel to a coordinate
    subspace; project first in that case.
    """
    if not p.is_coordinate_aligned():
        raise ValueError("affine span is not coordinate-aligned")
    return p.lattice_volume()


def mixed_volume_ie(polys: Sequence[Polytope], d: int) -> Fraction:
    """Inclusion-exclusion mixed volume, ``d!`` times the classical one.

    Sum over nonempty subsets S of ``(-1)**(d-|S|) Vol(sum of S)``; sums of
    dimension below ``d`` contribute nothing.
    """
    if len(polys) != d:
        raise ValueError(f"expected {d} polytopes, got {len(polys)}")
    # Minkowski sums depend only on the multiset of summands
    cache: dict[tuple, Polytope] = {}
    keys = [p.vertices for p in polys]
    total = Fraction(0)
    for k in range(1, d + 1):
        for subset in itertools.combinations(range(d), k):
            key = tuple(sorted(keys[i] for i in subset))
            if key not in cache:
                cache[key] = reduce(minkowski_sum, (polys[i] for i in subset))
            s = cache[key]
            if s.dim == d:
                total += (-1) ** (d - k) * volume_in_coordinate_span(s)
    return total
