"""Backend selection: compiled kernels when available, pure Python otherwise.

The compiled module works on int64 and is only used when every coordinate is
small enough that no intermediate determinant can overflow: |c| < 2^29 in 2D
and |c| < 2^19 in 3D (difference cross products and 3x3 determinants then
stay below 2^63). Wider inputs silently take the pure path, which runs on
arbitrary-precision ints. Set GRIDPEEL_BACKEND=python to force the fallback,
GRIDPEEL_BACKEND=c to require the compiled module.
"""

from __future__ import annotations

import os

from . import _pure
from .points import InvariantError

try:
    from . import _core
except ImportError:
    _core = None

MAX_COORD_2D = 1 << 29
MAX_COORD_3D = 1 << 19

_FORCED = os.environ.get("GRIDPEEL_BACKEND", "auto").lower()
if _FORCED not in ("auto", "c", "python"):
    raise ImportError(f"GRIDPEEL_BACKEND must be auto, c or python, not {_FORCED!r}")
if _FORCED == "c" and _core is None:
    raise ImportError("GRIDPEEL_BACKEND=c but the compiled module is not built")


def have_compiled() -> bool:
    return _core is not None


def backend_name(backend: str | None = None) -> str:
    """Resolve a backend request ('c', 'python' or None=auto) to a name."""
    req = _FORCED if backend is None else backend
    if req == "c" or (req == "auto" and _core is not None):
        if _core is None:
            raise InvariantError("compiled backend requested but not built")
        return "c"
    return "python"


def _fits(pts, limit) -> bool:
    return all(-limit < c < limit for p in pts for c in p)


def hull2d(pts, backend: str | None = None, lower_only: bool = False):
    """Strict hull vertex indices of lex-sorted distinct 2D points."""
    if backend_name(backend) == "c" and _fits(pts, MAX_COORD_2D):
        import numpy as np

        arr = np.asarray(pts, dtype=np.int64)
        return _core.hull2d_idx(arr[:, 0], arr[:, 1], 1 if lower_only else 0).tolist()
    return _pure.hull2d(pts, lower_only=lower_only)


def hull2d_arrays(xs, ys, backend: str | None = None, lower_only: bool = False):
    """Array-native hull2d used by the grid loops; inputs lex-sorted int64."""
    if backend_name(backend) == "c":
        return _core.hull2d_idx(xs, ys, 1 if lower_only else 0)
    pts = list(zip(xs.tolist(), ys.tolist()))
    import numpy as np

    return np.asarray(_pure.hull2d(pts, lower_only=lower_only), dtype=np.int64)


def hull3d_stats(pts, init, backend: str | None = None, want_planes: bool = False):
    """Mesh + facet statistics for full-dimensional 3D input.

    Returns (vertex_ids, f1, f2, vol6, planes). planes is None unless
    requested, and requesting it forces the pure path (only small inputs ask).
    """
    try:
        if (
            not want_planes
            and backend_name(backend) == "c"
            and _fits(pts, MAX_COORD_3D)
        ):
            import numpy as np

            arr = np.asarray(pts, dtype=np.int64)
            verts, f1, f2, vol6 = _core.hull3d_stats(
                arr, init[0], init[1], init[2], init[3]
            )
            return verts.tolist(), f1, f2, vol6, None
        tris = _pure.hull3d_mesh(pts, init)
        return _pure.layer_stats3(pts, tris, want_planes=want_planes)
    except RuntimeError as e:
        raise InvariantError(f"3D hull internal check failed: {e}") from e


def hull3d_stats_arrays(arr, init, backend: str | None = None):
    """Array-native hull3d_stats for the grid loop; arr is (m, 3) int64.

    Returns (vertex_ids, f1, f2, vol6, None) with vertex_ids as an index array.
    """
    import numpy as np

    try:
        if backend_name(backend) == "c" and bool(
            (np.abs(arr) < MAX_COORD_3D).all()
        ):
            verts, f1, f2, vol6 = _core.hull3d_stats(
                arr, init[0], init[1], init[2], init[3]
            )
            return verts, f1, f2, vol6, None
        pts = [tuple(row) for row in arr.tolist()]
        verts, f1, f2, vol6, _ = _pure.layer_stats3(
            pts, _pure.hull3d_mesh(pts, init)
        )
        return np.asarray(verts, dtype=np.int64), f1, f2, vol6, None
    except RuntimeError as e:
        raise InvariantError(f"3D hull internal check failed: {e}") from e
