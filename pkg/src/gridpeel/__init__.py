"""Exact convex-layer peeling of integer point sets.

Peels d-dimensional integer grids and arbitrary integer point sets with
integer-only geometric predicates, tracks per-layer f-vectors and volumes,
censuses primitive directions, and fits the measured layer numbers against
power-law targets. A compiled kernel handles the small-coordinate hot path
when available; a pure-Python twin is always present.
"""

from ._kernels import MAX_COORD_2D, MAX_COORD_3D, backend_name, have_compiled
from .analysis import (
    DEGENERATE,
    AndrewsRecord,
    CategoryRecord,
    FaceAuditRecord,
    FitReport,
    andrews_audit,
    audit_to_csv,
    categories_to_csv,
    category_sweep,
    classify_direction,
    exponent_fit,
    face_count_audit,
    fit_report_json_obj,
    fit_to_csv,
    max_andrews_ratio,
)
from .hull import (
    Facet,
    HullDescription,
    extreme_points,
    hull_description,
    oracle_extreme,
    oracle_peel,
)
from .lattice import (
    CALIBRATED_ALPHA,
    CensusReport,
    DirectionSet,
    calibrate_alpha,
    census_report,
    enumerate_directions,
    filter_directions,
    hyperplane_count,
    jordan_partial_sum,
    jordan_totient,
    mobius,
    primitive_normal,
    shortest_orthogonal_vector,
    zeta,
)
from .peeling import (
    LayerSummary,
    PeelingTrace,
    PeelOptions,
    dump_json,
    grid_trace,
    peel_all,
    peel_once,
    restriction_equivalence_check,
    shell_lower_bound,
    tau_grid,
    trace_to_csv,
    trace_to_json_obj,
)
from .points import (
    ContractError,
    DegeneracyError,
    InvariantError,
    PointSet,
    affine_rank,
    grid,
)

__version__ = "0.1.0"

__all__ = [
    "AndrewsRecord",
    "CALIBRATED_ALPHA",
    "CategoryRecord",
    "CensusReport",
    "ContractError",
    "DEGENERATE",
    "DegeneracyError",
    "DirectionSet",
    "Facet",
    "FaceAuditRecord",
    "FitReport",
    "HullDescription",
    "InvariantError",
    "LayerSummary",
    "MAX_COORD_2D",
    "MAX_COORD_3D",
    "PeelOptions",
    "PeelingTrace",
    "PointSet",
    "affine_rank",
    "andrews_audit",
    "audit_to_csv",
    "backend_name",
    "calibrate_alpha",
    "categories_to_csv",
    "category_sweep",
    "census_report",
    "classify_direction",
    "dump_json",
    "enumerate_directions",
    "exponent_fit",
    "extreme_points",
    "face_count_audit",
    "filter_directions",
    "fit_report_json_obj",
    "fit_to_csv",
    "grid",
    "grid_trace",
    "have_compiled",
    "hull_description",
    "hyperplane_count",
    "jordan_partial_sum",
    "jordan_totient",
    "max_andrews_ratio",
    "mobius",
    "oracle_extreme",
    "oracle_peel",
    "peel_all",
    "peel_once",
    "primitive_normal",
    "restriction_equivalence_check",
    "shell_lower_bound",
    "shortest_orthogonal_vector",
    "tau_grid",
    "trace_to_csv",
    "trace_to_json_obj",
    "zeta",
]
