"""Peeling traces: frozen small-grid values, invariants, and exports."""

import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_peel, rand_subset
from gridpeel import (
    ContractError,
    PeelOptions,
    PointSet,
    dump_json,
    grid,
    grid_trace,
    oracle_extreme,
    oracle_peel,
    peel_all,
    peel_once,
    restriction_equivalence_check,
    shell_lower_bound,
    tau_grid,
    trace_to_csv,
    trace_to_json_obj,
)
from gridpeel.points import central_reflect

# tau([n]^2) for n = 1..12; cross-checked below against the oracle-only path
TAU_PLANAR = [1, 1, 3, 3, 6, 6, 9, 9, 12, 12, 15, 15]


class TestPeelOnce:
    def test_3x3_removes_corners(self):
        removed, remaining = peel_once(grid(3, 2))
        assert removed == PointSet([(1, 1), (1, 3), (3, 1), (3, 3)])
        assert remaining == PointSet([(1, 2), (2, 1), (2, 2), (2, 3), (3, 2)])

    def test_2x2_empties_in_one_step(self):
        removed, remaining = peel_once(grid(2, 2))
        assert removed == grid(2, 2)
        assert len(remaining) == 0

    def test_singleton(self):
        removed, remaining = peel_once(PointSet([(5, 5, 5)]))
        assert removed == PointSet([(5, 5, 5)])
        assert len(remaining) == 0

    def test_empty_rejected(self):
        with pytest.raises(ContractError):
            peel_once(PointSet([], dim=2))


class TestPeelAll:
    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_single_point_grid(self, d):
        assert peel_all(grid(1, d)).tau == 1

    def test_3x3_layers(self):
        t = peel_all(grid(3, 2))
        assert t.tau == 3
        assert t.layer_sizes() == (4, 4, 1)

    def test_3cube_layers(self):
        t = peel_all(grid(3, 3))
        assert t.tau == 4
        assert t.layer_sizes() == (8, 12, 6, 1)

    def test_3cube_instrumented(self):
        t = peel_all(grid(3, 3), PeelOptions(fvectors=True, volumes=True))
        fv = [(s.f0, s.f1, s.f2) for s in t.summaries]
        assert fv == [(8, 12, 6), (12, 24, 14), (6, 12, 8), (1, None, None)]
        assert [s.normalized_volume for s in t.summaries] == [48, 40, 8, 0]
        assert [s.affine_dim for s in t.summaries] == [3, 3, 3, 0]

    def test_empty_rejected(self):
        with pytest.raises(ContractError):
            peel_all(PointSet([], dim=3))

    def test_summary_only_mode_drops_layers(self):
        t = peel_all(grid(4, 2), PeelOptions(store_points=False))
        assert t.layers is None
        assert sum(t.layer_sizes()) == 16


class TestTauGrid:
    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_hypercube_vertices(self, d):
        assert tau_grid(2, d) == 1

    def test_small_values(self):
        assert tau_grid(3, 2) == 3
        assert tau_grid(3, 3) == 4

    def test_d1_is_halving(self):
        for n in range(1, 30):
            assert tau_grid(n, 1) == (n + 1) // 2

    def test_planar_benchmark_frozen(self):
        got = [tau_grid(n, 2) for n in range(1, 13)]
        assert got == TAU_PLANAR

    def test_planar_benchmark_oracle_rerun(self):
        # independent rerun of the n <= 12 benchmark on the oracle-only path
        for n in range(1, 13):
            layers = oracle_peel(grid(n, 2))
            assert len(layers) == TAU_PLANAR[n - 1]
            t = peel_all(grid(n, 2), PeelOptions(store_points=True))
            assert [frozenset(l) for l in layers] == [
                frozenset(l) for l in t.layers
            ]

    def test_symmetry_flag_changes_nothing_d2(self):
        for n in range(1, 14):
            assert tau_grid(n, 2, PeelOptions(symmetry=True)) == tau_grid(n, 2)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_symmetry_flag_changes_nothing_d3(self, n):
        a = grid_trace(n, 3, PeelOptions(symmetry=True, fvectors=True, volumes=True))
        b = grid_trace(n, 3, PeelOptions(symmetry=False, fvectors=True, volumes=True))
        assert a.summaries == b.summaries

    def test_grid_path_equals_generic_path(self):
        for n, d in ((5, 2), (7, 2), (4, 3)):
            a = grid_trace(n, d, PeelOptions(store_points=True))
            b = peel_all(
                PointSet(itertools.product(range(1, n + 1), repeat=d), dim=d),
                PeelOptions(store_points=True),
            )
            assert a.layers == b.layers


class TestTraceInvariants:
    def _traces(self):
        rng = random.Random(77)
        for d, n in ((2, 7), (3, 4)):
            for _ in range(6):
                s = rand_subset(rng, n, d, 0.6)
                yield s, peel_all(s, PeelOptions(store_points=True, volumes=True))
        yield grid(6, 2), peel_all(grid(6, 2), PeelOptions(store_points=True, volumes=True))
        yield grid(4, 3), peel_all(grid(4, 3), PeelOptions(store_points=True, volumes=True))

    def test_conservation_and_progress(self):
        for s, t in self._traces():
            assert sum(t.layer_sizes()) == len(s)
            assert all(k >= 1 for k in t.layer_sizes())
            assert t.tau == len(t.layers) == len(t.summaries)
            assert t.tau <= len(s)
            union = set()
            for layer in t.layers:
                assert not (set(layer) & union)
                union |= set(layer)
            assert union == set(s)

    def test_layers_extreme_in_suffix(self):
        for s, t in self._traces():
            suffix = []
            for layer in reversed(t.layers):
                suffix = list(layer) + suffix
                ps = PointSet(suffix, dim=t.d)
                for p in layer:
                    assert oracle_extreme(p, ps)

    def test_volume_monotone(self):
        for s, t in self._traces():
            vols = [x.normalized_volume for x in t.summaries]
            assert all(v is not None for v in vols)
            assert all(a >= b for a, b in zip(vols, vols[1:]))

    def test_central_symmetry_of_grid_layers(self):
        for n, d in ((9, 2), (4, 3), (5, 3)):
            t = grid_trace(n, d, PeelOptions(store_points=True))
            for layer in t.layers:
                pts = set(layer)
                assert {central_reflect(p, n) for p in pts} == pts

    def test_shell_lower_bound(self):
        assert [shell_lower_bound(n) for n in (1, 2, 5, 8)] == [1, 1, 3, 4]
        for n, d in ((7, 2), (9, 2), (4, 3), (6, 3)):
            assert tau_grid(n, d) >= shell_lower_bound(n)


class TestRestriction:
    def test_3cube_all_faces(self):
        for face in range(6):
            assert restriction_equivalence_check(grid(3, 3), face)

    def test_subset_of_the_face_itself(self):
        # every point already on H: the two processes are the same process
        a = PointSet([(1, 1, 1), (1, 3, 2), (1, 2, 4), (1, 4, 4), (1, 2, 2)])
        ok, aligned = restriction_equivalence_check(a, 0, n=4, detail=True)
        assert ok and aligned

    def test_random_subsets(self):
        rng = random.Random(55)
        for _ in range(12):
            a = rand_subset(rng, 5, 3, rng.uniform(0.2, 0.8))
            for face in range(6):
                assert restriction_equivalence_check(a, face, n=5)

    def test_face_index_validated(self):
        with pytest.raises(ContractError):
            restriction_equivalence_check(grid(3, 3), 6)
        with pytest.raises(ContractError):
            restriction_equivalence_check(grid(3, 3), -1)

    def test_points_outside_box_rejected(self):
        with pytest.raises(ContractError):
            restriction_equivalence_check(PointSet([(0, 1, 1)]), 0, n=3)


class TestExports:
    def test_csv_shape(self):
        t = peel_all(grid(3, 3), PeelOptions(fvectors=True, volumes=True))
        text = trace_to_csv(t, seed=0)
        assert text.splitlines() == [
            "# seed=0",
            "layer_index,f0,f1,f2,normalized_volume",
            "0,8,12,6,48",
            "1,12,24,14,40",
            "2,6,12,8,8",
            "3,1,,,0",
        ]

    def test_csv_without_seed_has_no_comment(self):
        t = peel_all(grid(2, 2))
        assert trace_to_csv(t).splitlines()[0] == "layer_index,f0,f1,f2,normalized_volume"

    def test_json_schema(self):
        t = grid_trace(3, 3, PeelOptions(fvectors=True, volumes=True))
        obj = trace_to_json_obj(t)
        assert set(obj) >= {"d", "n", "tau", "layers"}
        assert obj["d"] == 3 and obj["n"] == 3 and obj["tau"] == 4
        first = obj["layers"][0]
        assert first["index"] == 0 and first["f0"] == 8
        assert first["f1"] == 12 and first["f2"] == 6
        assert first["normalized_volume"] == 48
        # degenerate final layer has no face keys
        assert "f1" not in obj["layers"][3]

    def test_json_points_on_request_only(self):
        t = grid_trace(3, 2, PeelOptions(store_points=True))
        with_points = trace_to_json_obj(t, include_points=True)
        without = trace_to_json_obj(t, include_points=False)
        assert with_points["layers"][0]["points"] == [[1, 1], [1, 3], [3, 1], [3, 3]]
        assert "points" not in without["layers"][0]
        # not stored and requested anyway: contract error
        bare = grid_trace(3, 2, PeelOptions(store_points=False))
        with pytest.raises(ContractError):
            trace_to_json_obj(bare, include_points=True)

    def test_dump_json_is_deterministic(self):
        t1 = grid_trace(4, 2, PeelOptions(fvectors=True, volumes=True))
        t2 = grid_trace(4, 2, PeelOptions(fvectors=True, volumes=True))
        assert dump_json(trace_to_json_obj(t1)) == dump_json(trace_to_json_obj(t2))
        parsed = json.loads(dump_json(trace_to_json_obj(t1)))
        assert parsed["tau"] == t1.tau


@settings(max_examples=40, deadline=None)
@given(
    st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=10)
)
def test_hyp_peeling_matches_referee_2d(pts):
    t = peel_all(PointSet(pts, dim=2), PeelOptions(store_points=True))
    assert [frozenset(l) for l in t.layers] == brute_peel(pts)
