"""Integer point sets and the exact helpers shared across the package.

Everything here is plain integer arithmetic; no floats enter any predicate.
"""

from __future__ import annotations

import itertools

Point = tuple[int, ...]


class ContractError(ValueError):
    """An input violates an operation's contract."""


class DegeneracyError(ValueError):
    """The input is too degenerate for the requested operation."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; results must not be trusted."""


def as_point(obj) -> Point:
    """Coerce to a tuple of exact ints, rejecting floats and other impostors."""
    try:
        coords = tuple(obj)
    except TypeError:
        raise ContractError(f"not a point: {obj!r}") from None
    if not coords:
        raise ContractError("zero-dimensional point")
    for c in coords:
        # bool is an int subclass; keep it out of coordinates anyway
        if not isinstance(c, int) or isinstance(c, bool):
            raise ContractError(f"non-integer coordinate {c!r} in {obj!r}")
    return coords


class PointSet:
    """Immutable finite set of distinct integer points of one dimension.

    Iteration order is always the sorted (lexicographic) order, which keeps
    every downstream artifact deterministic.
    """

    __slots__ = ("points", "dim", "_set")

    def __init__(self, points=(), dim: int | None = None):
        seen = set()
        out = []
        d = dim
        for p in points:
            q = as_point(p)
            if d is None:
                d = len(q)
            elif len(q) != d:
                raise ContractError(
                    f"mixed dimensions: expected {d}, got point {q} of dim {len(q)}"
                )
            if q not in seen:
                seen.add(q)
                out.append(q)
        if d is None:
            raise ContractError("empty point set needs an explicit dim")
        if d < 1:
            raise ContractError("dimension must be >= 1")
        object.__setattr__(self, "points", tuple(sorted(out)))
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "_set", seen)

    def __setattr__(self, name, value):
        raise AttributeError("PointSet is immutable")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return tuple(p) in self._set

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and self._set == other._set

    def __hash__(self):
        return hash((self.dim, self.points))

    def __repr__(self):
        if len(self) <= 8:
            return f"PointSet({list(self.points)})"
        return f"PointSet(<{len(self)} points, dim {self.dim}>)"

    def difference(self, other) -> "PointSet":
        other = set(map(tuple, other))
        return PointSet((p for p in self.points if p not in other), dim=self.dim)


def grid(n: int, d: int) -> PointSet:
    """The grid [n]^d = {1,...,n}^d."""
    if n < 1 or d < 1:
        raise ContractError(f"grid needs n >= 1 and d >= 1, got n={n}, d={d}")
    return PointSet(itertools.product(range(1, n + 1), repeat=d), dim=d)


def central_reflect(p: Point, n: int) -> Point:
    """The central symmetry of [n]^d: x -> (n+1)*1 - x."""
    return tuple(n + 1 - c for c in p)


def orbit_canon(p: Point, n: int) -> Point:
    """Canonical representative of p's orbit under the symmetries of [n]^d.

    The group is generated by coordinate permutations and the per-axis
    reflections c -> n+1-c, so folding each coordinate to min(c, n+1-c) and
    sorting yields a well-defined orbit key.
    """
    return tuple(sorted(min(c, n + 1 - c) for c in p))


def integer_rank(rows) -> int:
    """Rank of an integer matrix, by fraction-free elimination. Exact."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][c]:
                f = m[i][c]
                row = m[i]
                for j in range(c, ncols):
                    row[j] = row[j] * pr[c] - pr[j] * f
        rank += 1
        if rank == len(m):
            break
    return rank


def affine_rank(points) -> int:
    """Dimension of the affine hull; -1 for the empty set, 0 for a single point."""
    pts = list(points)
    if not pts:
        return -1
    base = pts[0]
    return integer_rank(
        [tuple(c - b for c, b in zip(p, base)) for p in pts[1:]]
    )
