"""Pure-Python geometry kernels: 2D chain hull, 3D incremental hull, facet stats.

This is the reference implementation mirrored by the compiled module
gridpeel._core. It runs on arbitrary-precision Python ints, so it has no
coordinate-width limits; the compiled twin is int64-only and the dispatcher
routes wide inputs here.

All predicates are exact. The 3D hull keeps full conflict lists under strict
visibility and destroys the weakly visible region, which is what makes it
correct on the massively coplanar inputs peeling produces: a point whose
strict conflict list is empty lies in the current hull and can be discarded,
and the weakly visible region seen from an exterior point is a topological
disk, so it is edge-connected and bounded by a single horizon cycle.
"""

from __future__ import annotations

from math import gcd
from random import Random


def _cross2(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def hull2d(pts, lower_only=False):
    """Indices of the strict hull vertices of sorted distinct 2D points.

    pts must be lexicographically sorted. Returns counter-clockwise order
    starting at the lexicographic minimum; collinear edge points are not
    vertices. With lower_only, returns just the lower chain (endpoints
    included).
    """
    m = len(pts)
    if m <= 2:
        return list(range(m))
    lower = []
    for i in range(m):
        x, y = pts[i]
        while len(lower) >= 2:
            j, k = lower[-2], lower[-1]
            if _cross2(pts[j][0], pts[j][1], pts[k][0], pts[k][1], x, y) <= 0:
                lower.pop()
            else:
                break
        lower.append(i)
    if lower_only:
        return lower
    upper = []
    for i in range(m - 1, -1, -1):
        x, y = pts[i]
        while len(upper) >= 2:
            j, k = upper[-2], upper[-1]
            if _cross2(pts[j][0], pts[j][1], pts[k][0], pts[k][1], x, y) <= 0:
                upper.pop()
            else:
                break
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _orient3(pa, pb, pc, pd):
    # sign of det[b-a; c-a; d-a]: > 0 means pd is outside facet (pa,pb,pc)
    bx, by, bz = pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]
    cx, cy, cz = pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]
    dx, dy, dz = pd[0] - pa[0], pd[1] - pa[1], pd[2] - pa[2]
    return (
        bx * (cy * dz - cz * dy)
        - by * (cx * dz - cz * dx)
        + bz * (cx * dy - cy * dx)
    )


def hull3d_mesh(pts, init, seed=1):
    """Outward-oriented triangle mesh of the hull of distinct 3D points.

    pts: list of coordinate triples; init: four indices of affinely
    independent points (the caller has already checked full dimension).
    Returns a list of index triples. The mesh triangulates the boundary;
    its vertex set is a superset of the true vertex set (coplanar corners
    of the triangulation are filtered later by layer_stats3).
    """
    m = len(pts)
    i0, i1, i2, i3 = init
    if _orient3(pts[i0], pts[i1], pts[i2], pts[i3]) < 0:
        i2, i3 = i3, i2

    # facet tables; slot t of facet (a,b,c) is the edge opposite vertex t
    fvert = []
    fnb = []
    fpts = []
    alive = []

    def new_facet(a, b, c):
        fvert.append((a, b, c))
        fnb.append([-1, -1, -1])
        fpts.append([])
        alive.append(True)
        return len(fvert) - 1

    base = [
        new_facet(i1, i2, i3),
        new_facet(i0, i3, i2),
        new_facet(i0, i1, i3),
        new_facet(i0, i2, i1),
    ]
    edge_owner = {}
    for f in base:
        a, b, c = fvert[f]
        for t, (u, v) in enumerate(((b, c), (c, a), (a, b))):
            other = edge_owner.pop((v, u), None)
            if other is None:
                edge_owner[(u, v)] = (f, t)
            else:
                g, s = other
                fnb[f][t] = g
                fnb[g][s] = f
    if edge_owner:
        raise RuntimeError("initial simplex wiring failed")

    done = [False] * m
    for i in init:
        done[i] = True
    order = [i for i in range(m) if not done[i]]
    Random(seed).shuffle(order)

    pfac = {i: [] for i in order}
    for q in order:
        pq = pts[q]
        lst = pfac[q]
        for f in base:
            a, b, c = fvert[f]
            if _orient3(pts[a], pts[b], pts[c], pq) > 0:
                lst.append(f)
                fpts[f].append(q)

    for p in order:
        done[p] = True
        seeds = [f for f in pfac[p] if alive[f]]
        pfac[p] = None
        if not seeds:
            continue
        pp = pts[p]

        # flood the weakly visible region from the strictly visible seeds
        visible = set(seeds)
        stack = list(seeds)
        while stack:
            f = stack.pop()
            for g in fnb[f]:
                if g in visible or not alive[g]:
                    continue
                a, b, c = fvert[g]
                if _orient3(pts[a], pts[b], pts[c], pp) >= 0:
                    visible.add(g)
                    stack.append(g)

        # horizon: directed edges of visible facets whose neighbor survives
        horizon = {}
        for f in visible:
            a, b, c = fvert[f]
            for t, (u, v) in enumerate(((b, c), (c, a), (a, b))):
                g = fnb[f][t]
                if g not in visible:
                    if u in horizon:
                        raise RuntimeError("pinched horizon")
                    horizon[u] = (u, v, g, f)
        if not horizon:
            raise RuntimeError("empty horizon")
        start = next(iter(horizon))
        cycle = []
        u = start
        while True:
            e = horizon.pop(u, None)
            if e is None:
                raise RuntimeError("broken horizon chain")
            cycle.append(e)
            u = e[1]
            if u == start:
                break
        if horizon:
            raise RuntimeError("disconnected horizon")

        created = []
        stamp = {}
        for (u, v, g, f) in cycle:
            nf = new_facet(u, v, p)
            created.append(nf)
            # adjacency across the horizon edge; fix the survivor's slot too
            fnb[nf][2] = g
            fnb[g][fnb[g].index(f)] = nf
            # strict seers of the tent are among the seers of the two old
            # facets sharing its horizon edge
            lst = fpts[nf]
            for q in fpts[f] + fpts[g]:
                if done[q] or stamp.get(q) == nf:
                    continue
                stamp[q] = nf
                if _orient3(pts[u], pts[v], pp, pts[q]) > 0:
                    lst.append(q)
                    pfac[q].append(nf)
        k = len(created)
        for idx, nf in enumerate(created):
            fnb[nf][0] = created[(idx + 1) % k]
            fnb[nf][1] = created[(idx - 1) % k]
        for f in visible:
            alive[f] = False
            fpts[f] = None

    return [fvert[f] for f in range(len(fvert)) if alive[f]]


def _primitive3(nx, ny, nz):
    g = gcd(gcd(abs(nx), abs(ny)), abs(nz))
    return (nx // g, ny // g, nz // g)


def _rank3(normals):
    n1 = normals[0]
    n2 = None
    for w in normals[1:]:
        cx = n1[1] * w[2] - n1[2] * w[1]
        cy = n1[2] * w[0] - n1[0] * w[2]
        cz = n1[0] * w[1] - n1[1] * w[0]
        if cx or cy or cz:
            n2 = w
            break
    if n2 is None:
        return 1
    for w in normals[1:]:
        det = (
            n1[0] * (n2[1] * w[2] - n2[2] * w[1])
            - n1[1] * (n2[0] * w[2] - n2[2] * w[0])
            + n1[2] * (n2[0] * w[1] - n2[1] * w[0])
        )
        if det:
            return 3
    return 2


def layer_stats3(pts, tris, want_planes=False):
    """True vertices and facet statistics from a hull triangle mesh.

    Triangles are grouped into facets by (primitive outward normal, offset);
    a mesh vertex is a true polytope vertex iff its incident facet normals
    span rank 3. Returns (vertex_ids, f1, f2, vol6, planes) where vol6 is
    6 times the Euclidean volume (exact integer) and planes maps
    (normal, offset) -> set of true vertex ids (only when want_planes).
    """
    plane_id = {}
    plane_pts = []
    for (i, j, k) in tris:
        a, b, c = pts[i], pts[j], pts[k]
        nx = (b[1] - a[1]) * (c[2] - a[2]) - (b[2] - a[2]) * (c[1] - a[1])
        ny = (b[2] - a[2]) * (c[0] - a[0]) - (b[0] - a[0]) * (c[2] - a[2])
        nz = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        n = _primitive3(nx, ny, nz)
        key = (n, n[0] * a[0] + n[1] * a[1] + n[2] * a[2])
        pid = plane_id.setdefault(key, len(plane_id))
        if pid == len(plane_pts):
            plane_pts.append(set())
        plane_pts[pid].update((i, j, k))

    vplanes = {}
    for pid, members in enumerate(plane_pts):
        for v in members:
            vplanes.setdefault(v, []).append(pid)

    keys = list(plane_id)
    verts = []
    for v, pids in vplanes.items():
        if len(pids) >= 3 and _rank3([keys[pid][0] for pid in pids]) == 3:
            verts.append(v)
    verts.sort()
    vset = set(verts)

    f2 = len(plane_id)
    incidences = sum(1 for members in plane_pts for v in members if v in vset)
    if incidences % 2:
        raise RuntimeError("odd facet-vertex incidence count")
    f1 = incidences // 2

    o = pts[tris[0][0]]
    vol6 = 0
    for (i, j, k) in tris:
        a, b, c = pts[i], pts[j], pts[k]
        vol6 += _orient3(o, a, b, c)
    if vol6 < 0:
        raise RuntimeError("negative mesh volume")

    planes = None
    if want_planes:
        planes = {
            key: sorted(plane_pts[pid] & vset) for key, pid in plane_id.items()
        }
    return verts, f1, f2, vol6, planes


def shoelace2(cycle):
    """Twice the polygon area for an ordered vertex cycle (exact integer)."""
    s = 0
    ox, oy = cycle[0]
    for (ax, ay), (bx, by) in zip(cycle, cycle[1:] + cycle[:1]):
        s += (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
    return abs(s)
