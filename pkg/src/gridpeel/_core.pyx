# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""int64 compiled twins of the pure-Python geometry kernels.

Same algorithms as gridpeel._pure (strict monotone chain; incremental 3D
hull with full conflict lists and weak-region destruction; plane merging and
rank filtering for true face counts). The dispatcher guarantees every
coordinate satisfies |c| < 2^29 (2D) or |c| < 2^19 (3D), which keeps every
determinant and the accumulated 6*volume inside signed 64-bit range. The
insertion order comes from a fixed splitmix64 shuffle, so results are
reproducible across runs and platforms; the reported statistics are
geometric invariants and do not depend on that order.
"""

import numpy as np

from libc.stdint cimport int64_t, uint64_t
from libcpp.vector cimport vector

ctypedef int64_t i64
ctypedef Py_ssize_t idx_t


cdef inline i64 _cross2(i64 ox, i64 oy, i64 ax, i64 ay, i64 bx, i64 by) nogil:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def hull2d_idx(const i64[:] xs, const i64[:] ys, int mode):
    """Strict hull vertex indices of lex-sorted distinct points.

    mode 0: full hull, counter-clockwise from the lexicographic minimum.
    mode 1: lower chain only, endpoints included.
    """
    cdef idx_t m = xs.shape[0]
    cdef idx_t i, j, k, t
    if m <= 2:
        return np.arange(m, dtype=np.int64)
    cdef vector[idx_t] lower, upper
    for i in range(m):
        while lower.size() >= 2:
            j = lower[lower.size() - 2]
            k = lower[lower.size() - 1]
            if _cross2(xs[j], ys[j], xs[k], ys[k], xs[i], ys[i]) <= 0:
                lower.pop_back()
            else:
                break
        lower.push_back(i)
    cdef i64[::1] out
    if mode == 1:
        res = np.empty(lower.size(), dtype=np.int64)
        out = res
        for t in range(<idx_t> lower.size()):
            out[t] = lower[t]
        return res
    for i in range(m - 1, -1, -1):
        while upper.size() >= 2:
            j = upper[upper.size() - 2]
            k = upper[upper.size() - 1]
            if _cross2(xs[j], ys[j], xs[k], ys[k], xs[i], ys[i]) <= 0:
                upper.pop_back()
            else:
                break
        upper.push_back(i)
    cdef idx_t nl = lower.size() - 1
    cdef idx_t nu = upper.size() - 1
    res = np.empty(nl + nu, dtype=np.int64)
    out = res
    for t in range(nl):
        out[t] = lower[t]
    for t in range(nu):
        out[nl + t] = upper[t]
    return res


cdef inline i64 _orient3(const i64[:, :] p, idx_t a, idx_t b, idx_t c,
                         idx_t d) nogil:
    cdef i64 bx = p[b, 0] - p[a, 0], by = p[b, 1] - p[a, 1], bz = p[b, 2] - p[a, 2]
    cdef i64 cx = p[c, 0] - p[a, 0], cy = p[c, 1] - p[a, 1], cz = p[c, 2] - p[a, 2]
    cdef i64 dx = p[d, 0] - p[a, 0], dy = p[d, 1] - p[a, 1], dz = p[d, 2] - p[a, 2]
    return (bx * (cy * dz - cz * dy)
            - by * (cx * dz - cz * dx)
            + bz * (cx * dy - cy * dx))


cdef inline i64 _gcd3(i64 a, i64 b, i64 c) nogil:
    cdef i64 t
    if a < 0: a = -a
    if b < 0: b = -b
    if c < 0: c = -c
    while b:
        t = a % b
        a = b
        b = t
    while c:
        t = a % c
        a = c
        c = t
    return a


cdef inline uint64_t _splitmix(uint64_t* state) nogil:
    cdef uint64_t z
    state[0] += <uint64_t> 0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t> 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t> 0x94D049BB133111EB
    return z ^ (z >> 31)


def hull3d_stats(arr, idx_t i0, idx_t i1, idx_t i2, idx_t i3):
    """Hull of distinct full-dimensional 3D points: true vertices and stats.

    arr: (m, 3) integer coordinates; i0..i3: affinely independent indices.
    Returns (vertex_ids ndarray, f1, f2, vol6).
    """
    a = np.ascontiguousarray(arr, dtype=np.int64)
    cdef const i64[:, :] p = a
    cdef idx_t m = p.shape[0]
    cdef idx_t t_swap
    if _orient3(p, i0, i1, i2, i3) < 0:
        t_swap = i2; i2 = i3; i3 = t_swap

    # facet tables; slot t of facet (a, b, c) is the edge opposite vertex t
    cdef vector[idx_t] fva, fvb, fvc
    cdef vector[idx_t] nb0, nb1, nb2
    cdef vector[char] alive
    cdef vector[vector[idx_t]] fpts
    cdef vector[vector[idx_t]] pfac = vector[vector[idx_t]](m)
    cdef vector[idx_t] empty

    fva.reserve(16); fvb.reserve(16); fvc.reserve(16)

    cdef idx_t verts4[4][3]
    verts4[0][0] = i1; verts4[0][1] = i2; verts4[0][2] = i3
    verts4[1][0] = i0; verts4[1][1] = i3; verts4[1][2] = i2
    verts4[2][0] = i0; verts4[2][1] = i1; verts4[2][2] = i3
    verts4[3][0] = i0; verts4[3][1] = i2; verts4[3][2] = i1
    cdef idx_t f, g, s, t, u, v, uu, vv
    for f in range(4):
        fva.push_back(verts4[f][0])
        fvb.push_back(verts4[f][1])
        fvc.push_back(verts4[f][2])
        nb0.push_back(-1); nb1.push_back(-1); nb2.push_back(-1)
        alive.push_back(1)
        fpts.push_back(empty)
    # wire the 12 directed edges of the initial simplex by brute force
    for f in range(4):
        for t in range(3):
            if t == 0:
                u = fvb[f]; v = fvc[f]
            elif t == 1:
                u = fvc[f]; v = fva[f]
            else:
                u = fva[f]; v = fvb[f]
            for g in range(4):
                if g == f:
                    continue
                for s in range(3):
                    if s == 0:
                        uu = fvb[g]; vv = fvc[g]
                    elif s == 1:
                        uu = fvc[g]; vv = fva[g]
                    else:
                        uu = fva[g]; vv = fvb[g]
                    if uu == v and vv == u:
                        if t == 0: nb0[f] = g
                        elif t == 1: nb1[f] = g
                        else: nb2[f] = g
    for f in range(4):
        if nb0[f] < 0 or nb1[f] < 0 or nb2[f] < 0:
            raise RuntimeError("initial simplex wiring failed")

    cdef vector[char] done = vector[char](m, 0)
    done[i0] = 1; done[i1] = 1; done[i2] = 1; done[i3] = 1
    cdef vector[idx_t] order
    cdef idx_t q
    for q in range(m):
        if not done[q]:
            order.push_back(q)
    cdef uint64_t rng = <uint64_t> 0xC0FFEE_5EED
    cdef idx_t oi, oj
    for oi in range(<idx_t> order.size() - 1, 0, -1):
        oj = <idx_t> (_splitmix(&rng) % <uint64_t> (oi + 1))
        t_swap = order[oi]; order[oi] = order[oj]; order[oj] = t_swap

    cdef idx_t n_order = order.size()
    for oi in range(n_order):
        q = order[oi]
        for f in range(4):
            if _orient3(p, fva[f], fvb[f], fvc[f], q) > 0:
                fpts[f].push_back(q)
                pfac[q].push_back(f)

    # per-point scratch keyed by epochs so nothing needs clearing
    cdef vector[i64] region_epoch = vector[i64](16, 0)
    cdef vector[i64] hor_epoch = vector[i64](m, 0)
    cdef vector[idx_t] hor_v = vector[idx_t](m)
    cdef vector[idx_t] hor_g = vector[idx_t](m)
    cdef vector[idx_t] hor_f = vector[idx_t](m)
    cdef vector[idx_t] tstamp = vector[idx_t](m, -1)
    cdef i64 epoch = 0
    cdef vector[idx_t] vis, stack, created
    cdef vector[idx_t] cyc_u, cyc_v, cyc_g, cyc_f
    cdef idx_t pnt, nf, start, stored, k_ring, ii, dead
    cdef bint seen

    for oi in range(n_order):
        pnt = order[oi]
        done[pnt] = 1
        vis.clear(); stack.clear()
        epoch += 1
        seen = False
        for ii in range(<idx_t> pfac[pnt].size()):
            f = pfac[pnt][ii]
            if alive[f] and region_epoch[f] != epoch:
                region_epoch[f] = epoch
                vis.push_back(f)
                stack.push_back(f)
                seen = True
        pfac[pnt] = empty
        if not seen:
            continue

        # flood the weakly visible region from the strictly visible seeds
        while stack.size():
            f = stack.back(); stack.pop_back()
            for t in range(3):
                g = nb0[f] if t == 0 else (nb1[f] if t == 1 else nb2[f])
                if g < 0:
                    raise RuntimeError("open mesh")
                if region_epoch[g] == epoch or not alive[g]:
                    continue
                if _orient3(p, fva[g], fvb[g], fvc[g], pnt) >= 0:
                    region_epoch[g] = epoch
                    vis.push_back(g)
                    stack.push_back(g)

        # horizon: directed edges whose outer neighbor survives
        stored = 0
        start = -1
        for ii in range(<idx_t> vis.size()):
            f = vis[ii]
            for t in range(3):
                g = nb0[f] if t == 0 else (nb1[f] if t == 1 else nb2[f])
                if region_epoch[g] == epoch:
                    continue
                if t == 0:
                    u = fvb[f]; v = fvc[f]
                elif t == 1:
                    u = fvc[f]; v = fva[f]
                else:
                    u = fva[f]; v = fvb[f]
                if hor_epoch[u] == epoch:
                    raise RuntimeError("pinched horizon")
                hor_epoch[u] = epoch
                hor_v[u] = v; hor_g[u] = g; hor_f[u] = f
                if start < 0:
                    start = u
                stored += 1
        if stored == 0:
            raise RuntimeError("empty horizon")
        cyc_u.clear(); cyc_v.clear(); cyc_g.clear(); cyc_f.clear()
        u = start
        while True:
            if hor_epoch[u] != epoch:
                raise RuntimeError("broken horizon chain")
            hor_epoch[u] = -1
            cyc_u.push_back(u); cyc_v.push_back(hor_v[u])
            cyc_g.push_back(hor_g[u]); cyc_f.push_back(hor_f[u])
            u = hor_v[u]
            if u == start:
                break
        if <idx_t> cyc_u.size() != stored:
            raise RuntimeError("disconnected horizon")

        created.clear()
        for ii in range(<idx_t> cyc_u.size()):
            u = cyc_u[ii]; v = cyc_v[ii]; g = cyc_g[ii]; f = cyc_f[ii]
            nf = fva.size()
            fva.push_back(u); fvb.push_back(v); fvc.push_back(pnt)
            nb0.push_back(-1); nb1.push_back(-1); nb2.push_back(g)
            alive.push_back(1)
            fpts.push_back(empty)
            region_epoch.push_back(0)
            created.push_back(nf)
            if nb0[g] == f:
                nb0[g] = nf
            elif nb1[g] == f:
                nb1[g] = nf
            elif nb2[g] == f:
                nb2[g] = nf
            else:
                raise RuntimeError("survivor does not neighbor its dead facet")
            # strict seers of the tent are among the seers of the two old
            # facets sharing its horizon edge
            for s in range(2):
                dead = f if s == 0 else g
                for t in range(<idx_t> fpts[dead].size()):
                    q = fpts[dead][t]
                    if done[q] or tstamp[q] == nf:
                        continue
                    tstamp[q] = nf
                    if _orient3(p, u, v, pnt, q) > 0:
                        fpts[nf].push_back(q)
                        pfac[q].push_back(nf)
        k_ring = created.size()
        for ii in range(k_ring):
            nf = created[ii]
            nb0[nf] = created[(ii + 1) % k_ring]
            nb1[nf] = created[ii - 1 if ii > 0 else k_ring - 1]
        for ii in range(<idx_t> vis.size()):
            f = vis[ii]
            alive[f] = 0
            fpts[f] = empty

    # collect the surviving triangles
    cdef vector[idx_t] ta, tb, tc
    cdef idx_t nfac = fva.size()
    for f in range(nfac):
        if alive[f]:
            ta.push_back(fva[f]); tb.push_back(fvb[f]); tc.push_back(fvc[f])
    cdef idx_t ntri = ta.size()

    # group triangles into facet planes by (primitive normal, offset)
    cdef i64 nx, ny, nz, off, gg
    cdef idx_t ia, ib, ic
    plane_id = {}
    plane_members = []
    for t in range(ntri):
        ia = ta[t]; ib = tb[t]; ic = tc[t]
        nx = (p[ib, 1] - p[ia, 1]) * (p[ic, 2] - p[ia, 2]) - \
             (p[ib, 2] - p[ia, 2]) * (p[ic, 1] - p[ia, 1])
        ny = (p[ib, 2] - p[ia, 2]) * (p[ic, 0] - p[ia, 0]) - \
             (p[ib, 0] - p[ia, 0]) * (p[ic, 2] - p[ia, 2])
        nz = (p[ib, 0] - p[ia, 0]) * (p[ic, 1] - p[ia, 1]) - \
             (p[ib, 1] - p[ia, 1]) * (p[ic, 0] - p[ia, 0])
        gg = _gcd3(nx, ny, nz)
        nx //= gg; ny //= gg; nz //= gg
        off = nx * p[ia, 0] + ny * p[ia, 1] + nz * p[ia, 2]
        key = (nx, ny, nz, off)
        pid = plane_id.get(key)
        if pid is None:
            pid = len(plane_id)
            plane_id[key] = pid
            plane_members.append(set())
        plane_members[pid].update((ia, ib, ic))

    # a mesh vertex is a true vertex iff its incident normals span rank 3;
    # the normals can exceed 64 bits in products, so rank runs on Python ints
    vplanes = {}
    for pid, members in enumerate(plane_members):
        for vv_ in members:
            vplanes.setdefault(vv_, []).append(pid)
    keys = list(plane_id)
    true_verts = []
    for vv_, pids in vplanes.items():
        if len(pids) >= 3 and _rank3_py([keys[z][:3] for z in pids]) == 3:
            true_verts.append(vv_)
    true_verts.sort()
    vset = set(true_verts)

    cdef idx_t f2 = len(plane_id)
    cdef idx_t incidences = 0
    for members in plane_members:
        for vv_ in members:
            if vv_ in vset:
                incidences += 1
    if incidences % 2:
        raise RuntimeError("odd facet-vertex incidence count")
    cdef idx_t f1 = incidences // 2

    cdef i64 vol6 = 0
    cdef i64 term
    cdef idx_t origin = ta[0]
    for t in range(ntri):
        term = _orient3(p, origin, ta[t], tb[t], tc[t])
        vol6 += term
    if vol6 < 0:
        raise RuntimeError("negative mesh volume")

    return np.asarray(true_verts, dtype=np.int64), f1, f2, vol6


def _rank3_py(normals):
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
        det = (n1[0] * (n2[1] * w[2] - n2[2] * w[1])
               - n1[1] * (n2[0] * w[2] - n2[2] * w[0])
               + n1[2] * (n2[0] * w[1] - n2[1] * w[0]))
        if det:
            return 3
    return 2
