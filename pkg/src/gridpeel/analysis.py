"""Per-layer instrumentation and cross-run exponent fitting.

Direction categories, face-count and volume-ratio audits, and the log-log
least-squares fit against a target exponent. Everything feeding the floats
(f-vectors, volumes, tau, dot products) is exact integer arithmetic; only the
ratios and the fit itself are floating point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .hull import HullDescription, hull_description
from .lattice import CALIBRATED_ALPHA, DirectionSet, enumerate_directions, filter_directions
from .peeling import PeelingTrace
from .points import ContractError, InvariantError, PointSet, affine_rank

# Marker for directions that cannot be categorized because the layer
# polytope is not full-dimensional.
DEGENERATE = "degenerate"


def classify_direction(v, hull: HullDescription, strict: bool = False):
    """Category of direction v against a layer polytope: the affine dimension
    of the face its supporting hyperplane cuts out (0 vertex, 1 edge, ...).

    Evaluates the max side only; antipodal hyperplanes of a centrally
    symmetric layer support faces of equal dimension. strict=True evaluates
    both sides and demands they agree.

    Returns DEGENERATE when the polytope is not full-dimensional.
    """
    v = tuple(v)
    verts = tuple(hull.vertices)
    if not verts:
        raise ContractError("hull has no vertices")
    d = hull.vertices.dim
    if len(v) != d:
        raise ContractError(f"direction has dimension {len(v)}, hull has {d}")
    if all(c == 0 for c in v):
        raise ContractError("direction must be nonzero")
    if hull.affine_dim < d:
        return DEGENERATE

    def side(w):
        dots = [sum(a * x for a, x in zip(w, p)) for p in verts]
        top = max(dots)
        face = [p for p, t in zip(verts, dots) if t == top]
        return affine_rank(face)

    k = side(v)
    if strict:
        k_opp = side(tuple(-c for c in v))
        if k_opp != k:
            raise InvariantError(
                f"antipodal supports differ for {v}: {k} vs {k_opp}"
            )
    return k


@dataclass(frozen=True)
class CategoryRecord:
    layer_index: int
    mu: int
    filtered: bool
    counts: dict[int, int]
    degenerate: int

    def total(self) -> int:
        return sum(self.counts.values()) + self.degenerate


def category_sweep(
    trace: PeelingTrace,
    mu: int,
    filtered: bool = False,
    nu: float | None = None,
    strict: bool = False,
) -> list[CategoryRecord]:
    """Classify every direction of V_mu (or its filtered subset) against
    every layer polytope of an instrumented d=3 trace."""
    if trace.d != 3:
        raise ContractError("category sweep is defined for d = 3 traces")
    if trace.layers is None:
        raise ContractError("trace was not run with store_points")
    if mu < 1:
        raise ContractError("mu must be >= 1")
    ds = enumerate_directions(mu, trace.d)
    if filtered:
        if nu is None:
            nu = CALIBRATED_ALPHA[trace.d] * mu ** (1.0 / trace.d)
        ds = filter_directions(ds, nu)
    records = []
    for i, layer in enumerate(trace.layers):
        if not isinstance(layer, PointSet):
            layer = PointSet(layer, dim=trace.d)
        hull = hull_description(layer)
        counts: dict[int, int] = {}
        degen = 0
        for v in ds:
            k = classify_direction(v, hull, strict=strict)
            if k == DEGENERATE:
                degen += 1
            else:
                counts[k] = counts.get(k, 0) + 1
        rec = CategoryRecord(i, mu, filtered, counts, degen)
        if rec.total() != len(ds):
            raise InvariantError("category counts do not partition the set")
        records.append(rec)
    return records


@dataclass(frozen=True)
class FaceAuditRecord:
    layer_index: int
    f0: int
    f1: int | None
    f2: int | None
    degenerate: bool
    euler_ok: bool | None
    edge_bound_ok: bool | None  # f1 >= (3/2) f2
    vertex_bound_ok: bool | None  # 2 f0 >= f2
    category_bound_ok: bool | None = None  # f2 >= 2 c_2

    def all_ok(self) -> bool:
        checks = (self.euler_ok, self.edge_bound_ok, self.vertex_bound_ok,
                  self.category_bound_ok)
        return all(c is not False for c in checks)


def face_count_audit(
    trace: PeelingTrace,
    categories: list[CategoryRecord] | None = None,
) -> list[FaceAuditRecord]:
    """Euler and face-count inequalities per full-dimensional layer of an
    instrumented d=3 trace; degenerate layers are reported, not checked."""
    if trace.d != 3:
        raise ContractError("face-count audit is defined for d = 3 traces")
    by_layer = {}
    if categories is not None:
        for rec in categories:
            by_layer[rec.layer_index] = rec
    out = []
    for s in trace.summaries:
        if s.f1 is None or s.f2 is None:
            if s.affine_dim >= trace.d:
                raise ContractError("trace was not run with fvectors")
            out.append(FaceAuditRecord(s.layer_index, s.f0, None, None,
                                       True, None, None, None))
            continue
        euler = s.f0 - s.f1 + s.f2 == 2
        edges = 2 * s.f1 >= 3 * s.f2
        verts = 2 * s.f0 >= s.f2
        cat_ok = None
        rec = by_layer.get(s.layer_index)
        if rec is not None:
            cat_ok = s.f2 >= 2 * rec.counts.get(2, 0)
        out.append(FaceAuditRecord(s.layer_index, s.f0, s.f1, s.f2,
                                   False, euler, edges, verts, cat_ok))
    return out


@dataclass(frozen=True)
class AndrewsRecord:
    layer_index: int
    f0: int
    normalized_volume: int
    ratio: float | None  # None when the layer has zero volume


def andrews_audit(trace: PeelingTrace) -> list[AndrewsRecord]:
    """Vertex count against volume^((d-1)/(d+1)) per layer.

    vol is the Euclidean volume, normalized_volume / d!. Zero-volume layers
    are flagged with ratio None rather than divided by zero.
    """
    d = trace.d
    exponent = (d - 1) / (d + 1)
    out = []
    for s in trace.summaries:
        if s.normalized_volume is None:
            raise ContractError("trace was not run with volumes")
        if s.normalized_volume == 0:
            out.append(AndrewsRecord(s.layer_index, s.f0, 0, None))
            continue
        vol = s.normalized_volume / math.factorial(d)
        out.append(AndrewsRecord(s.layer_index, s.f0, s.normalized_volume,
                                 s.f0 / vol**exponent))
    return out


def max_andrews_ratio(records: list[AndrewsRecord]) -> float | None:
    ratios = [r.ratio for r in records if r.ratio is not None]
    return max(ratios) if ratios else None


@dataclass(frozen=True)
class FitReport:
    pairs: tuple[tuple[int, float], ...]
    slope: float
    intercept: float
    residual: float
    target_exponent: float


def exponent_fit(pairs, target: float) -> FitReport:
    """Least-squares slope of log tau against log n.

    residual is the worst absolute log-scale deviation from the fitted line,
    so an exact power law gives residual 0 up to float round-off.
    """
    pairs = tuple((int(n), t) for n, t in pairs)
    if len(pairs) < 3:
        raise ContractError("exponent fit needs at least 3 pairs")
    if len({n for n, _ in pairs}) != len(pairs):
        raise ContractError("n values must be distinct")
    if any(n < 1 or t <= 0 for n, t in pairs):
        raise ContractError("pairs must be positive")
    xs = [math.log(n) for n, _ in pairs]
    ys = [math.log(t) for _, t in pairs]
    m = len(pairs)
    xbar = sum(xs) / m
    ybar = sum(ys) / m
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    residual = max(abs(y - (slope * x + intercept)) for x, y in zip(xs, ys))
    return FitReport(pairs, slope, intercept, residual, target)


def fit_report_json_obj(report: FitReport) -> dict:
    return {
        "slope": report.slope,
        "intercept": report.intercept,
        "residual": report.residual,
        "target_exponent": report.target_exponent,
    }


def categories_to_csv(records: list[CategoryRecord]) -> str:
    lines = ["layer_index,mu,filtered,c0,c1,c2,degenerate"]
    for r in records:
        lines.append(
            f"{r.layer_index},{r.mu},{str(r.filtered).lower()},"
            f"{r.counts.get(0, 0)},{r.counts.get(1, 0)},{r.counts.get(2, 0)},"
            f"{r.degenerate}"
        )
    return "\n".join(lines) + "\n"


def audit_to_csv(
    face_records: list[FaceAuditRecord],
    andrews_records: list[AndrewsRecord] | None = None,
) -> str:
    """Merged per-layer audit table; ratio column is empty without volume
    instrumentation or on zero-volume layers."""
    ratios = {}
    if andrews_records is not None:
        for r in andrews_records:
            ratios[r.layer_index] = r.ratio
    lines = ["layer_index,f0,f1,f2,euler_ok,ratio"]
    for r in face_records:
        f1 = "" if r.f1 is None else r.f1
        f2 = "" if r.f2 is None else r.f2
        euler = "" if r.euler_ok is None else str(r.euler_ok).lower()
        ratio = ratios.get(r.layer_index)
        rtxt = "" if ratio is None else repr(ratio)
        lines.append(f"{r.layer_index},{r.f0},{f1},{f2},{euler},{rtxt}")
    return "\n".join(lines) + "\n"


def fit_to_csv(report: FitReport) -> str:
    lines = ["n,tau"]
    for n, t in report.pairs:
        lines.append(f"{n},{t}")
    footer = json.dumps(fit_report_json_obj(report), sort_keys=True)
    lines.append(f"# {footer}")
    return "\n".join(lines) + "\n"
