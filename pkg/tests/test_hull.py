"""Extreme pointsework: examples, the rational referee, and hull properties."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_extreme, hypercube_symmetries, in_hull, rand_subset
from gridpeel import (
    ContractError,
    PointSet,
    extreme_points,
    grid,
    hull_description,
    oracle_extreme,
    oracle_peel,
)


class TestExtremePoints:
    def test_singleton(self):
        assert extreme_points(PointSet([(1, 1)])) == PointSet([(1, 1)])

    def test_grid_3x3_keeps_only_corners(self):
        got = extreme_points(grid(3, 2))
        assert got == PointSet([(1, 1), (1, 3), (3, 1), (3, 3)])

    def test_cube_grid_all_extreme(self):
        s = grid(2, 3)
        assert extreme_points(s) == s

    def test_collinear_returns_endpoints(self):
        got = extreme_points(PointSet([(1, 1), (2, 2), (3, 3)]))
        assert got == PointSet([(1, 1), (3, 3)])

    def test_empty_set(self):
        s = PointSet([], dim=2)
        assert extreme_points(s) == s

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(ContractError):
            extreme_points([(1, 1), (1, 2, 3)])

    def test_collinear_edge_points_are_not_vertices(self):
        # hull edge passes through (2,1) and (1,2); neither is a vertex
        s = PointSet([(0, 0), (3, 0), (0, 3), (2, 1), (1, 2), (1, 1)])
        assert extreme_points(s) == PointSet([(0, 0), (3, 0), (0, 3)])

    def test_coplanar_facet_points_are_not_vertices(self):
        s = PointSet(
            [(0, 0, 0), (2, 0, 0), (0, 2, 0), (2, 2, 0), (1, 1, 0), (1, 1, 2)]
        )
        assert (1, 1, 0) not in extreme_points(s)

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_matches_referee_on_random_sets(self, d):
        rng = random.Random(40 + d)
        for _ in range(10):
            s = rand_subset(rng, 3 if d >= 3 else 5, d, 0.4)
            if len(s) > 10:
                continue
            assert set(extreme_points(s)) == brute_extreme(s)


class TestHullDescription:
    def test_cube(self):
        h = hull_description(grid(2, 3))
        assert h.affine_dim == 3
        assert len(h.vertices) == 8
        assert len(h.facets) == 6
        assert sorted(f.normal for f in h.facets) == sorted(
            [(-1, 0, 0), (0, -1, 0), (0, 0, -1), (0, 0, 1), (0, 1, 0), (1, 0, 0)]
        )

    def test_second_shell_of_3cube_is_cuboctahedron(self):
        corners = set(itertools.product((1, 3), repeat=3))
        inner = PointSet(p for p in grid(3, 3) if p not in corners)
        assert len(inner) == 19
        h = hull_description(inner)
        assert len(h.vertices) == 12
        assert len(h.facets) == 14

    def test_planar_triangle_in_3space(self):
        h = hull_description(PointSet([(0, 0, 0), (1, 0, 0), (0, 1, 0)]))
        assert h.affine_dim == 2
        assert len(h.vertices) == 3
        assert h.facets == ()

    def test_empty_input(self):
        h = hull_description(PointSet([], dim=3))
        assert h.affine_dim == -1
        assert len(h.vertices) == 0

    def test_vertices_agree_with_extreme_points(self):
        rng = random.Random(5)
        for d in (2, 3):
            for _ in range(10):
                s = rand_subset(rng, 5, d, 0.5)
                assert hull_description(s).vertices == extreme_points(s)

    def test_facet_soundness_3d(self):
        """Every facet inequality holds set-wide, with equality exactly on
        the facet; coplanar non-vertices must lie inside the facet polygon."""
        rng = random.Random(11)
        checked = 0
        for _ in range(25):
            s = rand_subset(rng, 4, 3, 0.5)
            h = hull_description(s)
            if h.affine_dim < 3:
                continue
            for f in h.facets:
                dots = {p: sum(a * b for a, b in zip(f.normal, p)) for p in s}
                assert all(v <= f.offset for v in dots.values())
                on_plane = {p for p, v in dots.items() if v == f.offset}
                assert set(f.vertices) <= on_plane
                assert set(f.vertices) <= set(h.vertices)
                for p in on_plane - set(f.vertices):
                    assert in_hull(p, f.vertices)
                checked += 1
        assert checked > 20

    def test_2d_facets_are_hull_edges(self):
        h = hull_description(grid(3, 2))
        assert len(h.facets) == 4
        for f in h.facets:
            assert all(
                sum(a * b for a, b in zip(f.normal, p)) <= f.offset for p in grid(3, 2)
            )


class TestOracle:
    def test_grid_center(self):
        assert oracle_extreme((2, 2), grid(3, 2)) is False

    def test_grid_corner(self):
        assert oracle_extreme((1, 1), grid(3, 2)) is True

    def test_edge_midpoint(self):
        assert oracle_extreme((2, 1), grid(3, 2)) is False

    def test_membership_required(self):
        with pytest.raises(ContractError):
            oracle_extreme((9, 9), grid(3, 2))

    def test_oracle_matches_rational_referee(self):
        rng = random.Random(23)
        checked = 0
        for d, n, keep in ((2, 4, 0.45), (3, 3, 0.35)):
            for _ in range(12):
                s = rand_subset(rng, n, d, keep)
                if len(s) > 12:
                    continue
                ref = brute_extreme(s)
                assert {p for p in s if oracle_extreme(p, s)} == ref
                checked += 1
        assert checked >= 15

    def test_oracle_peel_layer_sizes(self):
        layers = oracle_peel(grid(3, 2))
        assert [len(l) for l in layers] == [4, 4, 1]


class TestProperties:
    @pytest.mark.parametrize(
        "d,n,keep,cases", [(2, 15, 0.6, 3), (3, 6, 0.6, 3), (4, 4, 0.5, 2)]
    )
    def test_oracle_equivalence(self, d, n, keep, cases):
        # the stated bound: exact agreement up to 200 points, dim <= 4
        rng = random.Random(100 + d)
        for _ in range(cases):
            s = rand_subset(rng, n, d, keep)
            assert len(s) <= 200
            want = {p for p in s if oracle_extreme(p, s)}
            assert set(extreme_points(s)) == want

    def test_idempotence(self):
        rng = random.Random(7)
        for d, n in ((2, 8), (3, 4), (4, 3)):
            for _ in range(8):
                s = rand_subset(rng, n, d, 0.5)
                e = extreme_points(s)
                assert extreme_points(e) == e

    def test_symmetry_equivariance(self):
        rng = random.Random(9)
        for d, n in ((2, 5), (3, 3)):
            maps = hypercube_symmetries(n, d)
            for _ in range(6):
                s = rand_subset(rng, n, d, 0.5)
                e = extreme_points(s)
                for g in maps:
                    gs = PointSet([g(p) for p in s], dim=d)
                    assert extreme_points(gs) == PointSet([g(p) for p in e], dim=d)

    def test_monotone_hull_nesting(self):
        rng = random.Random(31)
        for d, n in ((2, 6), (3, 4)):
            for _ in range(10):
                s = rand_subset(rng, n, d, 0.6)
                h = hull_description(s)
                if h.affine_dim < d:
                    continue
                rest = s.difference(h.vertices)
                for f in h.facets:
                    for p in rest:
                        assert sum(a * b for a, b in zip(f.normal, p)) <= f.offset


@settings(max_examples=80, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=20))
def test_hyp_extreme_matches_oracle_2d(pts):
    s = PointSet(pts, dim=2)
    assert set(extreme_points(s)) == {p for p in s if oracle_extreme(p, s)}


@settings(max_examples=30, deadline=None)
@given(
    st.sets(
        st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
        min_size=1,
        max_size=8,
    )
)
def test_hyp_extreme_matches_referee_3d(pts):
    s = PointSet(pts, dim=3)
    e = extreme_points(s)
    assert set(e) == brute_extreme(s)
    assert extreme_points(e) == e
