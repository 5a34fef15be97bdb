"""Signed (symmetrized) max-plus arithmetic and the geometry built on it:
tripod metrics, geodesic and semimodule segments, interval-union set
representations with convexity predicates, and metric projections with an
independent brute-force oracle."""

from .algebra import (
    EPS,
    Pair,
    SElem,
    Sign,
    UNIT,
    ZERO,
    balance_rel,
    classify,
    equiv_rel,
    ext_oplus,
    ext_otimes,
    ext_power,
    is_eps,
    lift,
    pair_balance,
    pair_minus,
    pair_norm,
    pair_oplus,
    pair_otimes,
    parts,
    s_abs,
    s_minus,
    s_oplus,
    s_otimes,
    s_power,
    scalar_mul,
)
from .exprs import ExprError, eval_expr
from .metrics import (
    D1,
    D2,
    MagnitudeRangeWarning,
    MetricId,
    SVector,
    THETA,
    d1,
    d2,
    magnitude,
    parse_metric_id,
    phi,
    phi_n,
    rho,
)
from .oracle import (
    DEFAULT_GRID,
    GridSpec,
    grid_connected,
    grid_project,
    grid_segment_sm,
    hausdorff_phi,
)
from .projection import (
    ProjectionResult,
    distance_to_set,
    find_multipoint_witness,
    is_chebyshev,
    project_box,
    project_box_max,
    project_ray,
    project_segment_set,
    project_union,
)
from .raysets import (
    BoxSet,
    RaySet,
    is_box_semimodule_convex,
    is_connected,
    is_geometrically_convex,
    is_semimodule_convex,
    is_traditionally_convex,
    point_on_ray,
    ray_components,
)
from .segments import (
    ArcPiece,
    BrokenLine,
    ChartError,
    PointPiece,
    SegmentSet,
    as_segment_set,
    chart_for,
    component_count,
    components,
    d_segment_contains,
    geometric_segment,
    isolated_points,
    psi,
    psi_inverse,
    semimodule_segment,
    traditional_segment,
    vec_oplus,
    vec_otimes,
    vec_scale,
)

__version__ = "0.1.0"
