"""Shared test helpers.

The membership oracle here is deliberately a third implementation, sharing
nothing with the package's simplex oracle or its hull code: it decides
p in conv(S) by Caratheodory, solving exact-rational barycentric systems
for every affinely independent subset of size <= d+1. Hopeless beyond a
dozen points, perfect as an independent referee on small inputs.
"""

import itertools
import random
from fractions import Fraction

from gridpeel import PointSet


def solve_barycentric(subset, p):
    """Barycentric weights of p over an affinely independent subset.

    Returns the unique solution of (sum l_i q_i = p, sum l_i = 1) as
    Fractions, or None when the subset is affinely dependent or p is
    outside its affine hull.
    """
    k = len(subset)
    d = len(p)
    m = [[Fraction(q[i]) for q in subset] + [Fraction(p[i])] for i in range(d)]
    m.append([Fraction(1)] * k + [Fraction(1)])
    r = 0
    for c in range(k):
        pivot_row = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot_row is None:
            return None
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pivot = m[r][c]
        m[r] = [x / pivot for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    for i in range(r, len(m)):
        if m[i][-1] != 0:
            return None
    return [m[i][-1] for i in range(k)]


def in_hull(p, pts):
    """Exact test of p in conv(pts). Small inputs only."""
    pts = list(pts)
    p = tuple(p)
    if not pts:
        return False
    if p in pts:
        return True
    d = len(p)
    for size in range(1, min(len(pts), d + 1) + 1):
        for subset in itertools.combinations(pts, size):
            lam = solve_barycentric(subset, p)
            if lam is not None and all(x >= 0 for x in lam):
                return True
    return False


def brute_extreme(points):
    """Extreme points by the Caratheodory referee."""
    pts = [tuple(p) for p in points]
    return {p for p in pts if not in_hull(p, [q for q in pts if q != p])}


def brute_peel(points):
    """Full peeling using only brute_extreme."""
    remaining = {tuple(p) for p in points}
    layers = []
    while remaining:
        shell = brute_extreme(remaining)
        assert shell, "a nonempty set must have extreme points"
        layers.append(frozenset(shell))
        remaining -= shell
    return layers


def rand_subset(rng: random.Random, n: int, d: int, keep: float) -> PointSet:
    """Random nonempty subset of [n]^d, each point kept with probability keep."""
    pts = [p for p in itertools.product(range(1, n + 1), repeat=d)
           if rng.random() < keep]
    if not pts:
        pts = [tuple(rng.randint(1, n) for _ in range(d))]
    return PointSet(pts, dim=d)


def hypercube_symmetries(n: int, d: int):
    """All 2^d * d! symmetries of [n]^d as point maps."""
    maps = []
    for perm in itertools.permutations(range(d)):
        for flips in itertools.product((False, True), repeat=d):
            def g(p, perm=perm, flips=flips):
                q = tuple(p[i] for i in perm)
                return tuple(n + 1 - c if f else c for c, f in zip(q, flips))
            maps.append(g)
    return maps
