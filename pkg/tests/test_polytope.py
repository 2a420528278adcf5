import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bcov33 import exact
from bcov33.lattice_fan import polytope_p
from bcov33.polytope import Polytope, hull, minkowski_sum, mixed_volume_ie, volume_in_coordinate_span


def simplex(d, scale=1):
    return hull([tuple(0 for _ in range(d))] + [tuple(scale if i == j else 0 for i in range(d)) for j in range(d)])


def seg(d, axis):
    return hull([(0,) * d, tuple(1 if i == axis else 0 for i in range(d))])


points = st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=1, max_size=5)


class TestHull:
    def test_interior_point_dropped(self):
        p = hull([(0, 0), (1, 0), (0, 1), (1, 1), (Fraction(1, 2), Fraction(1, 2))])
        assert len(p.vertices) == 4
        assert p.dim == 2

    def test_single_point(self):
        p = hull([(0, 0, 0)])
        assert p.dim == 0 and p.vertices == ((0, 0, 0),)

    def test_dilated_simplex(self):
        p = simplex(3, 3)
        assert p.dim == 3 and len(p.vertices) == 4

    def test_lower_dimensional_span(self):
        p = hull([(0, 0, 0), (1, 1, 0), (2, 0, 0)])
        assert p.dim == 2
        assert p.contains((1, 0, 0)) and not p.contains((1, 0, 1))

    def test_mixed_dimension_rejected(self):
        with pytest.raises(ValueError):
            hull([(0, 0), (1, 0, 0)])

    @settings(max_examples=60, deadline=None)
    @given(points)
    def test_h_representation_holds_vertices(self, pts):
        p = hull(pts)
        for q in pts:
            assert p.contains(q)
        for v in p.vertices:
            assert v in {tuple(q) for q in pts}
        # a far point is outside
        assert not p.contains((7, 7, 7))


class TestMinkowski:
    def test_segments_make_square(self):
        sq = minkowski_sum(seg(2, 0), seg(2, 1))
        assert sq.vertices == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_point_translates(self):
        p = simplex(2)
        assert minkowski_sum(p, hull([(3, -1)])) == p.translate((3, -1))

    def test_doubling_simplex(self):
        t = simplex(2)
        s = t + t
        assert s == t.dilate(2)
        assert s.lattice_volume() == 4 * t.lattice_volume()

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            minkowski_sum(simplex(2), simplex(3))


class TestVolume:
    def test_examples(self):
        assert volume_in_coordinate_span(seg(2, 0) + seg(2, 1)) == 1
        assert volume_in_coordinate_span(simplex(2)) == Fraction(1, 2)
        assert volume_in_coordinate_span(simplex(3, 3)) == Fraction(9, 2)

    def test_non_aligned_span_rejected(self):
        with pytest.raises(ValueError):
            volume_in_coordinate_span(hull([(0, 0), (1, 1)]))

    def test_aligned_lower_dimensional(self):
        p = hull([(0, 5, 0), (2, 5, 0), (0, 5, 3)])
        assert volume_in_coordinate_span(p) == 3

    @settings(max_examples=50, deadline=None)
    @given(points, st.sampled_from([1, 2, 3]))
    def test_dilation_law(self, pts, lam):
        p = hull(pts)
        assert p.dilate(lam).lattice_volume() == lam ** p.dim * p.lattice_volume()

    @settings(max_examples=50, deadline=None)
    @given(points)
    def test_triangulation_covers_volume(self, pts):
        # independent check: simplices of the triangulation are full-dimensional,
        # and their volumes add up to a volume computed by a different base vertex
        p = hull(pts)
        if p.dim < 1:
            return
        proj = [p.project(v) for v in p.vertices]
        vols = []
        for s in p.triangulation():
            assert len(s) == p.dim + 1
            rows = [[a - b for a, b in zip(proj[i], proj[s[-1]])] for i in s[:-1]]
            vols.append(abs(exact.det(rows)) / math.factorial(p.dim))
        assert all(v > 0 for v in vols)
        assert sum(vols) == p.lattice_volume()
        # reflection through the origin preserves volume
        q = hull([tuple(-x for x in v) for v in p.vertices])
        assert q.lattice_volume() == p.lattice_volume()

    def test_unit_cube_against_box(self):
        cube = hull(list(itertools.product([0, 1], repeat=4)))
        assert cube.lattice_volume() == 1
        assert len(cube.triangulation()) == 24


class TestIntegralPoints:
    def test_examples(self):
        assert len(simplex(2).integral_points()) == 3
        p = hull([tuple(3 if i == j else 0 for i in range(4)) for j in range(4)])
        assert len(p.integral_points()) == 20

    def test_twelve_vertex_polytope(self):
        p = polytope_p()
        assert len(p.vertices) == 12
        assert len(p.integral_points()) == 111

    @pytest.mark.parametrize("n,k", [(1, 2), (2, 3), (3, 3), (4, 2), (2, 4), (3, 5)])
    def test_stars_and_bars(self, n, k):
        p = hull([tuple(n if i == j else 0 for i in range(k)) for j in range(k)])
        assert len(p.integral_points()) == math.comb(n + k - 1, k - 1)

    def test_sorted(self):
        pts = simplex(3, 2).integral_points()
        assert pts == sorted(pts)


def _interpolated_mixed_volume(polys, d):
    """d! * MV as the coefficient of l_1...l_d in Vol(sum l_i P_i).

    Vol(sum l_i P_i) is a homogeneous degree-d polynomial in l; fit it exactly
    from values on an integer grid.
    """
    monos = [e for e in itertools.product(range(d + 1), repeat=d) if sum(e) == d]
    grid = list(itertools.product(range(1, d + 2), repeat=d))[: len(monos) + 4]
    rows, rhs = [], []
    for lam in grid:
        s = polys[0].dilate(lam[0])
        for l, p in zip(lam[1:], polys[1:]):
            s = s + p.dilate(l)
        v = s.lattice_volume() if s.dim == d else Fraction(0)
        rows.append([math.prod(Fraction(l) ** a for l, a in zip(lam, e)) for e in monos])
        rhs.append(v)
    red, piv = exact.rref([r + [b] for r, b in zip(rows, rhs)])
    assert piv == list(range(len(monos))), "interpolation grid is not unisolvent"
    coeffs = {}
    for r, c in zip(red, piv):
        coeffs[monos[c]] = r[-1]
    return coeffs.get((1,) * d, Fraction(0))


def _random_poly(rng, d):
    n = rng.randint(1, 5)
    return hull([tuple(rng.randint(0, 2) for _ in range(d)) for _ in range(n)])


class TestMixedVolume:
    def test_examples(self):
        assert mixed_volume_ie([seg(2, 0), seg(2, 1)], 2) == 1
        t = simplex(2)
        assert mixed_volume_ie([t, t], 2) == 1

    def test_argument_count(self):
        with pytest.raises(ValueError):
            mixed_volume_ie([simplex(2)], 2)

    @pytest.mark.parametrize("seed", range(8))
    def test_copies_give_factorial_volume(self, seed):
        rng = random.Random(seed)
        d = rng.choice([2, 3])
        p = _random_poly(rng, d)
        assert mixed_volume_ie([p] * d, d) == math.factorial(d) * (p.lattice_volume() if p.dim == d else 0)

    def test_interpolation_oracle_many_instances(self):
        # at least 100 random instances with up to 5 vertices in dimension <= 3
        rng = random.Random(20240611)
        checked = 0
        for _ in range(110):
            d = rng.choice([1, 2, 2, 3])
            polys = [_random_poly(rng, d) for _ in range(d)]
            assert mixed_volume_ie(polys, d) == _interpolated_mixed_volume(polys, d)
            checked += 1
        assert checked >= 100

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_symmetry(self, seed):
        rng = random.Random(seed)
        polys = [_random_poly(rng, 3) for _ in range(3)]
        base = mixed_volume_ie(polys, 3)
        for perm in itertools.permutations(polys):
            assert mixed_volume_ie(list(perm), 3) == base
