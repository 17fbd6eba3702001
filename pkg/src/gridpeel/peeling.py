"""The peeling process: traces, grid fast paths, exports, restriction check.

A peeling step removes the hull vertices of whatever remains. The generic
path works on any PointSet. The grid paths exploit one structural fact: when
peeling starts from a full grid, every column (fixed prefix, free last axis)
stays a contiguous interval, because each step removes only column endpoints.
The engine therefore keeps per-column [lo, hi] bounds and hands only the
column endpoints to the hull kernels, which is exact: interior column points
are convex combinations of the endpoints and can never be vertices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels, _pure
from .hull import _affine_frame3, _column_candidates, _conv_feasible, extreme_points
from .points import (
    ContractError,
    InvariantError,
    PointSet,
    affine_rank,
    grid,
    orbit_canon,
)


@dataclass
class PeelOptions:
    """Instrumentation and execution switches for a peeling run."""

    fvectors: bool = False
    volumes: bool = False
    store_points: bool = True
    symmetry: bool = False
    backend: str | None = None
    threads: int = 1


@dataclass(frozen=True)
class LayerSummary:
    layer_index: int
    f0: int
    f1: int | None
    f2: int | None
    normalized_volume: int | None
    affine_dim: int


@dataclass
class PeelingTrace:
    d: int
    n: int | None
    tau: int
    summaries: list[LayerSummary]
    layers: list[PointSet] | None
    seed: int | None = None

    def layer_sizes(self) -> tuple[int, ...]:
        return tuple(s.f0 for s in self.summaries)


def _instrumented(opt: PeelOptions) -> bool:
    return opt.fvectors or opt.volumes


def peel_once(s: PointSet):
    """One peeling step: (removed, remaining). Input must be nonempty."""
    if len(s) == 0:
        raise ContractError("cannot peel an empty point set")
    removed = extreme_points(s)
    if len(removed) == 0:
        raise InvariantError("peeling step removed nothing")
    return removed, s.difference(removed)


def _shoelace_cycle(cycle):
    return _pure.shoelace2(cycle)


def _summary_generic(index, current: PointSet, removed, opt: PeelOptions):
    d = current.dim
    f0 = len(removed)
    adim = affine_rank(removed)
    f1 = f2 = vol = None
    if d == 3 and opt.fvectors and adim == 3:
        cands = _column_candidates(list(current.points))
        frame = _affine_frame3(cands)
        verts, f1, f2, vol6, _ = _kernels.hull3d_stats(cands, frame, opt.backend)
        if len(verts) != f0:
            raise InvariantError("facet statistics disagree with the removed layer")
        vol = vol6 if opt.volumes else None
    elif opt.volumes:
        if adim < d:
            vol = 0
        elif d == 3:
            cands = _column_candidates(list(current.points))
            frame = _affine_frame3(cands)
            _, _, _, vol, _ = _kernels.hull3d_stats(cands, frame, opt.backend)
        elif d == 2:
            cands = _column_candidates(list(current.points))
            idx = _kernels.hull2d(cands, opt.backend)
            vol = _shoelace_cycle([cands[i] for i in idx])
        elif d == 1:
            pts = current.points
            vol = pts[-1][0] - pts[0][0]
        # d >= 4: only f0 is maintained
    if d != 3:
        f1 = f2 = None
    return LayerSummary(index, f0, f1, f2, vol, adim)


def _check_volumes(summaries):
    prev = None
    for s in summaries:
        if s.normalized_volume is None:
            continue
        if prev is not None and s.normalized_volume > prev:
            raise InvariantError("layer volume increased along the trace")
        prev = s.normalized_volume


def peel_all(s: PointSet, options: PeelOptions | None = None) -> PeelingTrace:
    """Run the peeling process to exhaustion and record the trace."""
    if not isinstance(s, PointSet):
        s = PointSet(s)
    if len(s) == 0:
        raise ContractError("cannot peel an empty point set")
    opt = options or PeelOptions()
    layers = [] if opt.store_points else None
    summaries = []
    current = s
    index = 0
    while len(current):
        removed = extreme_points(current, backend=opt.backend, threads=opt.threads)
        if len(removed) == 0:
            raise InvariantError("peeling step removed nothing")
        summaries.append(_summary_generic(index, current, removed, opt))
        if layers is not None:
            layers.append(removed)
        current = current.difference(removed)
        index += 1
    if sum(t.f0 for t in summaries) != len(s):
        raise InvariantError("layer sizes do not add up to the input size")
    _check_volumes(summaries)
    return PeelingTrace(s.dim, None, index, summaries, layers)


def _grid1(n: int, opt: PeelOptions) -> PeelingTrace:
    layers = [] if opt.store_points else None
    summaries = []
    lo, hi = 1, n
    index = 0
    while lo <= hi:
        pts = [(lo,)] if lo == hi else [(lo,), (hi,)]
        vol = (hi - lo) if opt.volumes else None
        summaries.append(
            LayerSummary(index, len(pts), None, None, vol, 0 if lo == hi else 1)
        )
        if layers is not None:
            layers.append(PointSet(pts, dim=1))
        lo += 1
        hi -= 1
        index += 1
    return PeelingTrace(1, n, index, summaries, layers)


def _interleaved_candidates(act, lov, hiv):
    # per active column: lo first, then hi when distinct; output stays
    # lexicographically sorted because act is ascending
    two = hiv > lov
    cnt = np.where(two, 2, 1).astype(np.int64)
    total = int(cnt.sum())
    starts = np.cumsum(cnt) - cnt
    ys = np.empty(total, dtype=np.int64)
    ys[starts] = lov
    ys[starts + cnt - 1] = hiv
    return cnt, ys


def _grid2(n: int, opt: PeelOptions) -> PeelingTrace:
    lo = np.ones(n + 1, dtype=np.int64)
    hi = np.full(n + 1, n, dtype=np.int64)
    hi[0] = 0  # column index 0 unused
    layers = [] if opt.store_points else None
    summaries = []
    mirror = opt.symmetry and not _instrumented(opt) and layers is None
    index = 0
    while True:
        act = np.nonzero(lo <= hi)[0]
        if act.size == 0:
            break
        lov = lo[act]
        hiv = hi[act]
        if mirror:
            # layers of [n]^2 are centrally symmetric: the upper chain is the
            # mirror image of the lower chain, so only the lower chain is built
            lidx = _kernels.hull2d_arrays(act, lov, opt.backend, lower_only=True)
            vx = np.concatenate([act[lidx], (n + 1) - act[lidx]])
            vy = np.concatenate([lov[lidx], (n + 1) - lov[lidx]])
            vert = np.unique(np.stack([vx, vy], axis=1), axis=0)
            vx, vy = vert[:, 0], vert[:, 1]
            cycle = None
        else:
            cnt, ys = _interleaved_candidates(act, lov, hiv)
            xs = np.repeat(act, cnt)
            idx = _kernels.hull2d_arrays(xs, ys, opt.backend)
            vx, vy = xs[idx], ys[idx]
            cycle = list(zip(vx.tolist(), vy.tolist()))

        # three or more strict hull vertices can never be collinear, so the
        # affine dimension of the layer is determined by its size
        f0 = int(vx.size)
        adim = min(f0 - 1, 2)
        vol = None
        if opt.volumes:
            vol = _shoelace_cycle(cycle) if adim == 2 else 0
        summaries.append(LayerSummary(index, f0, None, None, vol, adim))
        if layers is not None:
            layers.append(PointSet(zip(vx.tolist(), vy.tolist()), dim=2))

        mask_lo = vy == lo[vx]
        mask_hi = ~mask_lo & (vy == hi[vx])
        if not bool(np.all(mask_lo | mask_hi)):
            raise InvariantError("hull vertex is not a column endpoint")
        lo[vx[mask_lo]] = vy[mask_lo] + 1
        hi[vx[mask_hi]] = vy[mask_hi] - 1
        index += 1

    if sum(t.f0 for t in summaries) != n * n:
        raise InvariantError("grid peel lost points")
    _check_volumes(summaries)
    return PeelingTrace(2, n, index, summaries, layers)


def _affine_frame3_arrays(pts):
    """Affine frame of an (m, 3) int64 array; same contract as the list scan."""
    diffs = pts - pts[0]
    nz = (diffs != 0).any(axis=1)
    if not bool(nz.any()):
        return [0]
    j1 = int(nz.argmax())
    cr = np.cross(diffs, diffs[j1])
    nz2 = (cr != 0).any(axis=1)
    if not bool(nz2.any()):
        return [0, j1]
    j2 = int(nz2.argmax())
    normal = np.cross(diffs[j1], diffs[j2])
    dots = diffs @ normal
    nz3 = dots != 0
    if not bool(nz3.any()):
        return [0, j1, j2]
    return [0, j1, j2, int(nz3.argmax())]


def _grid3(n: int, opt: PeelOptions) -> PeelingTrace:
    zlo = np.ones((n + 1, n + 1), dtype=np.int64)
    zhi = np.full((n + 1, n + 1), n, dtype=np.int64)
    zhi[0, :] = 0
    zhi[:, 0] = 0
    layers = [] if opt.store_points else None
    summaries = []
    index = 0
    while True:
        ax, ay = np.nonzero(zlo <= zhi)
        if ax.size == 0:
            break
        lov = zlo[ax, ay]
        hiv = zhi[ax, ay]
        cnt, zs = _interleaved_candidates(ax, lov, hiv)
        xs = np.repeat(ax, cnt)
        ys = np.repeat(ay, cnt)
        pts = np.stack([xs, ys, zs], axis=1)
        frame = _affine_frame3_arrays(pts)

        if len(frame) == 4:
            verts, f1, f2, vol6, _ = _kernels.hull3d_stats_arrays(
                pts, frame, opt.backend
            )
            vx, vy, vz = xs[verts], ys[verts], zs[verts]
            adim = 3
        else:
            cand_set = PointSet(map(tuple, pts.tolist()), dim=3)
            ext = extreme_points(cand_set, backend=opt.backend)
            arr = np.asarray(sorted(ext), dtype=np.int64)
            vx, vy, vz = arr[:, 0], arr[:, 1], arr[:, 2]
            f1 = f2 = None
            vol6 = 0
            adim = len(frame) - 1

        f0 = int(vx.size)
        vol = vol6 if (opt.volumes and adim == 3) else (0 if opt.volumes else None)
        summaries.append(
            LayerSummary(
                index,
                f0,
                f1 if (opt.fvectors and adim == 3) else None,
                f2 if (opt.fvectors and adim == 3) else None,
                vol,
                adim,
            )
        )
        if layers is not None:
            layers.append(
                PointSet(zip(vx.tolist(), vy.tolist(), vz.tolist()), dim=3)
            )

        mask_lo = vz == zlo[vx, vy]
        mask_hi = ~mask_lo & (vz == zhi[vx, vy])
        if not bool(np.all(mask_lo | mask_hi)):
            raise InvariantError("hull vertex is not a column endpoint")
        zlo[vx[mask_lo], vy[mask_lo]] = vz[mask_lo] + 1
        zhi[vx[mask_hi], vy[mask_hi]] = vz[mask_hi] - 1
        index += 1

    if sum(t.f0 for t in summaries) != n**3:
        raise InvariantError("grid peel lost points")
    _check_volumes(summaries)
    return PeelingTrace(3, n, index, summaries, layers)


def _extreme_nd_orbits(cands, n, threads):
    """LP extremality with one test per hypercube-symmetry orbit.

    Valid only while the candidate-generating set is invariant under the
    symmetries of [n]^d, which holds along any peel of the full grid; the
    invariance of the candidate extremes is re-checked cheaply each step.
    """
    keys = [orbit_canon(p, n) for p in cands]
    rep: dict = {}
    for i, k in enumerate(keys):
        rep.setdefault(k, i)
    items = list(rep.items())

    def is_ext(item):
        _, i = item
        p = cands[i]
        return not _conv_feasible(p, cands[:i] + cands[i + 1 :])

    from concurrent.futures import ThreadPoolExecutor

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flags = list(pool.map(is_ext, items))
    else:
        flags = [is_ext(it) for it in items]
    verdict = {k: f for (k, _), f in zip(items, flags)}
    return [p for p, k in zip(cands, keys) if verdict[k]]


def _gridn(n: int, d: int, opt: PeelOptions) -> PeelingTrace:
    s = grid(n, d)
    if not opt.symmetry:
        trace = peel_all(s, opt)
        return PeelingTrace(d, n, trace.tau, trace.summaries, trace.layers)
    layers = [] if opt.store_points else None
    summaries = []
    current = s
    index = 0
    while len(current):
        cands = _column_candidates(list(current.points))
        removed_pts = _extreme_nd_orbits(cands, n, opt.threads)
        removed = PointSet(removed_pts, dim=d)
        if len(removed) == 0:
            raise InvariantError("peeling step removed nothing")
        if any(tuple(n + 1 - c for c in p) not in removed for p in removed):
            raise InvariantError("orbit replication produced an asymmetric layer")
        summaries.append(_summary_generic(index, current, removed, opt))
        if layers is not None:
            layers.append(removed)
        current = current.difference(removed)
        index += 1
    if sum(t.f0 for t in summaries) != n**d:
        raise InvariantError("grid peel lost points")
    return PeelingTrace(d, n, index, summaries, layers)


def grid_trace(n: int, d: int, options: PeelOptions | None = None) -> PeelingTrace:
    """Full peeling trace of [n]^d via the interval-column engine."""
    if n < 1 or d < 1:
        raise ContractError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    opt = options or PeelOptions(store_points=False)
    if d == 1:
        return _grid1(n, opt)
    if d == 2:
        return _grid2(n, opt)
    if d == 3:
        return _grid3(n, opt)
    return _gridn(n, d, opt)


def tau_grid(n: int, d: int, options: PeelOptions | None = None) -> int:
    """The layer number of [n]^d."""
    opt = options or PeelOptions(store_points=False)
    return grid_trace(n, d, opt).tau


def shell_lower_bound(n: int) -> int:
    # peeling [n]^d cannot finish before the ceil(n/2) nested cubic shells do
    return (n + 1) // 2


def restriction_equivalence_check(
    a: PointSet, face_index: int, n: int | None = None, detail: bool = False
):
    """Compare peeling restricted to a bounding-box face with peeling the face.

    The face hyperplane H is one of the 2d planes x_axis = 1 or x_axis = n
    bounding [n]^d. Returns whether the nonempty restricted removals, in
    order, equal the layers of the (d-1)-dimensional peeling of a cap H. With
    detail=True also returns whether the step indices aligned one-to-one.
    """
    if not isinstance(a, PointSet):
        a = PointSet(a)
    d = a.dim
    if d < 2:
        raise ContractError("restriction needs d >= 2")
    if len(a) == 0:
        raise ContractError("cannot peel an empty point set")
    if n is None:
        n = max(max(p) for p in a.points)
    if any(c < 1 or c > n for p in a.points for c in p):
        raise ContractError(f"point set does not fit in [{n}]^{d}")
    if not 0 <= face_index < 2 * d:
        raise ContractError(f"face_index must be in [0, {2 * d}), got {face_index}")
    axis, side = divmod(face_index, 2)
    value = 1 if side == 0 else n

    trace = peel_all(a, PeelOptions(store_points=True))
    restricted = [
        frozenset(p[:axis] + p[axis + 1 :] for p in layer if p[axis] == value)
        for layer in trace.layers
    ]
    cap = [p[:axis] + p[axis + 1 :] for p in a.points if p[axis] == value]
    if not cap:
        return (True, True) if detail else True
    sub = peel_all(PointSet(cap, dim=d - 1), PeelOptions(store_points=True))
    sub_layers = [frozenset(layer) for layer in sub.layers]

    squeezed = [s for s in restricted if s]
    equivalent = squeezed == sub_layers
    k = len(sub_layers)
    aligned = restricted[:k] == sub_layers and not any(restricted[k:])
    return (equivalent, aligned) if detail else equivalent


def trace_to_json_obj(trace: PeelingTrace, include_points: bool | None = None) -> dict:
    """Plain-dict form of a trace matching the documented export schema."""
    if include_points is None:
        include_points = trace.layers is not None
    elif include_points and trace.layers is None:
        raise ContractError("point lists were not stored in this trace")
    obj: dict = {"d": trace.d, "tau": trace.tau}
    if trace.n is not None:
        obj["n"] = trace.n
    if trace.seed is not None:
        obj["seed"] = trace.seed
    out_layers = []
    for i, s in enumerate(trace.summaries):
        entry: dict = {"index": s.layer_index, "f0": s.f0}
        if s.f1 is not None:
            entry["f1"] = s.f1
        if s.f2 is not None:
            entry["f2"] = s.f2
        if s.normalized_volume is not None:
            entry["normalized_volume"] = s.normalized_volume
        if include_points and trace.layers is not None:
            entry["points"] = [list(p) for p in trace.layers[i].points]
        out_layers.append(entry)
    obj["layers"] = out_layers
    return obj


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def trace_to_csv(trace: PeelingTrace, seed: int | None = None) -> str:
    lines = []
    if seed is not None:
        lines.append(f"# seed={seed}")
    lines.append("layer_index,f0,f1,f2,normalized_volume")
    for s in trace.summaries:
        cells = [
            str(s.layer_index),
            str(s.f0),
            "" if s.f1 is None else str(s.f1),
            "" if s.f2 is None else str(s.f2),
            "" if s.normalized_volume is None else str(s.normalized_volume),
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
