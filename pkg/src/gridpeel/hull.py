"""Extreme points, hull descriptions, and the exact-rational oracle.

The engine path dispatches on dimension: monotone chain in 2D, incremental
conflict hull in 3D, per-point feasibility tests for d >= 4. The oracle path
(oracle_extreme) answers the same question by exact phase-1 simplex and never
touches the hull code, which is what makes the cross-validation meaningful.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd

from . import _kernels
from .points import (
    ContractError,
    InvariantError,
    Point,
    PointSet,
    affine_rank,
    as_point,
)


@dataclass(frozen=True)
class Facet:
    """One facet: primitive outward normal, its offset, and the vertex cycle."""

    normal: Point
    offset: int
    vertices: tuple[Point, ...]


@dataclass(frozen=True)
class HullDescription:
    vertices: PointSet
    facets: tuple[Facet, ...]
    affine_dim: int


def _column_candidates(pts):
    # only the min/max point of each column (fixed first d-1 coordinates)
    # can be extreme; pts is sorted so each group is contiguous
    out = []
    for _, group in itertools.groupby(pts, key=lambda q: q[:-1]):
        g = list(group)
        out.append(g[0])
        if len(g) > 1:
            out.append(g[-1])
    return out


def _conv_feasible(target, pts) -> bool:
    """Decide target in conv(pts) exactly.

    Phase-1 simplex on (sum lambda_i * (p_i - target) = 0, sum lambda_i = 1,
    lambda >= 0) with integer (fraction-free) pivoting and Bland's rule.
    """
    m = len(pts)
    if m == 0:
        return False
    d = len(target)
    nr = d + 1
    ncols = m + nr + 1
    rows = []
    for i in range(d):
        row = [p[i] - target[i] for p in pts] + [0] * (nr + 1)
        row[m + i] = 1
        rows.append(row)
    last = [1] * m + [0] * (nr + 1)
    last[m + d] = 1
    last[ncols - 1] = 1
    rows.append(last)

    z = [-sum(rows[i][j] for i in range(nr)) for j in range(m)]
    z += [0] * nr + [-1]
    basis = [m + i for i in range(nr)]
    art_dead = [False] * nr
    det = 1
    # most-negative entering column, falling back to Bland's rule after a
    # pivot budget so degenerate cycling cannot stall termination
    bland_after = 20 * (m + nr) + 100
    pivots = 0

    while True:
        if z[ncols - 1] == 0:
            return True
        enter = -1
        if pivots < bland_after:
            best = 0
            for j in range(m + nr):
                if j >= m and art_dead[j - m]:
                    continue
                if z[j] < best:
                    best = z[j]
                    enter = j
        else:
            for j in range(m + nr):
                if j >= m and art_dead[j - m]:
                    continue
                if z[j] < 0:
                    enter = j
                    break
        if enter < 0:
            return z[ncols - 1] == 0
        pivots += 1
        r = -1
        for i in range(nr):
            a = rows[i][enter]
            if a > 0:
                if r < 0:
                    r = i
                else:
                    lhs = rows[i][ncols - 1] * rows[r][enter]
                    rhs = rows[r][ncols - 1] * a
                    if lhs < rhs or (lhs == rhs and basis[i] < basis[r]):
                        r = i
        if r < 0:
            raise InvariantError("phase-1 simplex claims unboundedness")
        piv = rows[r][enter]
        pr = rows[r]
        for i in range(nr):
            if i == r:
                continue
            f = rows[i][enter]
            row = rows[i]
            for j in range(ncols):
                num = piv * row[j] - f * pr[j]
                q, rem = divmod(num, det)
                if rem:
                    raise InvariantError("integer pivoting lost exactness")
                row[j] = q
        f = z[enter]
        for j in range(ncols):
            num = piv * z[j] - f * pr[j]
            q, rem = divmod(num, det)
            if rem:
                raise InvariantError("integer pivoting lost exactness")
            z[j] = q
        leaving = basis[r]
        basis[r] = enter
        if leaving >= m:
            art_dead[leaving - m] = True
        det = piv


def oracle_extreme(p, s: PointSet) -> bool:
    """True iff p is not in the convex hull of s minus p. Oracle path only."""
    q = as_point(p)
    if q not in s:
        raise ContractError(f"{q} is not a member of the point set")
    return not _conv_feasible(q, [t for t in s.points if t != q])


def oracle_peel(s: PointSet, predicate=None) -> list[tuple]:
    """Brute-force peeling: strip the oracle-extreme points until empty.

    Reference path for equivalence checks, quadratic LP calls per layer.
    The extremeness predicate can be swapped out for fault injection.
    """
    if predicate is None:
        predicate = oracle_extreme
    layers = []
    current = s
    while len(current):
        shell = tuple(p for p in current.points if predicate(p, current))
        if not shell:
            raise InvariantError("no extreme point found in a nonempty set")
        layers.append(shell)
        current = current.difference(shell)
    return layers


def _cross3(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _affine_frame3(pts):
    """Indices of up to 4 affinely independent points, scanning in order."""
    frame = [0]
    if len(pts) < 2:
        return frame
    frame.append(1)
    v1 = _sub(pts[1], pts[0])
    normal = None
    for j in range(2, len(pts)):
        c = _cross3(v1, _sub(pts[j], pts[0]))
        if c != (0, 0, 0):
            frame.append(j)
            normal = c
            break
    if normal is None:
        return frame
    for k in range(2, len(pts)):
        w = _sub(pts[k], pts[0])
        if normal[0] * w[0] + normal[1] * w[1] + normal[2] * w[2]:
            frame.append(k)
            break
    return frame


def _project_axis(normal):
    return max(range(3), key=lambda a: abs(normal[a]))


def _extreme3(cands, backend):
    """Extreme points among sorted 3D candidates; handles every degeneracy."""
    frame = _affine_frame3(cands)
    if len(frame) == 1:
        return [cands[0]]
    if len(frame) == 2:
        return [cands[0], cands[-1]]
    if len(frame) == 3:
        normal = _cross3(
            _sub(cands[frame[1]], cands[0]), _sub(cands[frame[2]], cands[0])
        )
        axis = _project_axis(normal)
        proj = sorted(
            (p[:axis] + p[axis + 1 :], p) for p in cands
        )
        idx = _kernels.hull2d([q for q, _ in proj], backend)
        return [proj[i][1] for i in idx]
    verts, _, _, _, _ = _kernels.hull3d_stats(cands, frame, backend)
    return [cands[i] for i in verts]


def _extreme_nd(cands, threads):
    def is_ext(i):
        p = cands[i]
        return not _conv_feasible(p, cands[:i] + cands[i + 1 :])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flags = list(pool.map(is_ext, range(len(cands))))
    else:
        flags = [is_ext(i) for i in range(len(cands))]
    return [p for p, f in zip(cands, flags) if f]


def extreme_points(s: PointSet, *, backend: str | None = None, threads: int = 1) -> PointSet:
    """The vertices of conv(s): points not expressible from the others."""
    if not isinstance(s, PointSet):
        s = PointSet(s)
    if len(s) <= 2:
        return s
    d = s.dim
    pts = list(s.points)
    if d == 1:
        return PointSet([pts[0], pts[-1]], dim=1)
    cands = _column_candidates(pts)
    if d == 2:
        idx = _kernels.hull2d(cands, backend)
        return PointSet([cands[i] for i in idx], dim=2)
    if d == 3:
        return PointSet(_extreme3(cands, backend), dim=3)
    return PointSet(_extreme_nd(cands, threads), dim=d)


def _primitive_dir(v):
    # divide out the gcd but keep the direction (outward normals stay outward)
    g = 0
    for c in v:
        g = gcd(g, abs(c))
    if g == 0:
        raise InvariantError("zero normal")
    return tuple(c // g for c in v)


def _order_cycle(vertices, normal):
    """Order coplanar polygon vertices counter-clockwise seen from outside."""
    axis = _project_axis(normal)
    proj = sorted((p[:axis] + p[axis + 1 :], p) for p in vertices)
    idx = _kernels.hull2d([q for q, _ in proj], backend="python")
    if len(idx) != len(vertices):
        raise InvariantError("facet cycle lost a vertex")
    cycle = [proj[i][1] for i in idx]
    # Newell normal of the ordered cycle must point along the outward normal
    nx = ny = nz = 0
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        nx += a[1] * b[2] - a[2] * b[1]
        ny += a[2] * b[0] - a[0] * b[2]
        nz += a[0] * b[1] - a[1] * b[0]
    dot = nx * normal[0] + ny * normal[1] + nz * normal[2]
    if dot == 0:
        raise InvariantError("degenerate facet cycle")
    if dot < 0:
        cycle.reverse()
    start = cycle.index(min(cycle))
    return tuple(cycle[start:] + cycle[:start])


def hull_description(s: PointSet, *, backend: str | None = None) -> HullDescription:
    """Vertices, affine dimension, and (d <= 3, full-dimensional) facets."""
    if not isinstance(s, PointSet):
        s = PointSet(s)
    if len(s) == 0:
        return HullDescription(s, (), -1)
    d = s.dim
    pts = list(s.points)
    adim = affine_rank(pts)
    facets: list[Facet] = []

    if d == 3 and adim == 3:
        cands = _column_candidates(pts)
        frame = _affine_frame3(cands)
        verts, _, _, _, planes = _kernels.hull3d_stats(
            cands, frame, backend, want_planes=True
        )
        vertices = PointSet([cands[i] for i in verts], dim=3)
        for (normal, offset), members in planes.items():
            cycle = _order_cycle([cands[i] for i in members], normal)
            facets.append(Facet(normal, offset, cycle))
    elif d == 2 and adim == 2:
        cands = _column_candidates(pts)
        idx = _kernels.hull2d(cands, backend)
        cycle = [cands[i] for i in idx]
        vertices = PointSet(cycle, dim=2)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            normal = _primitive_dir((b[1] - a[1], a[0] - b[0]))
            facets.append(
                Facet(normal, normal[0] * a[0] + normal[1] * a[1], (a, b))
            )
    else:
        vertices = extreme_points(s, backend=backend)

    facets.sort(key=lambda f: (f.normal, f.offset))
    return HullDescription(vertices, tuple(facets), adim)
