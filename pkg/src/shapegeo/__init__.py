"""Shape distances and geodesics for plane curves via square-root lifting."""

from . import curvature, curves, dynamics, errors, geodesy, io, lift, matching
from .curves import (
    CLOSED,
    OPEN,
    ArcData,
    PlaneCurve,
    build_arc_data,
    ds_operator,
    metric_inner,
    metric_norm2,
    normalize,
    resample_by_arclength,
)
from .curvature import (
    LTopOperator,
    TangentPair,
    build_ltop,
    curvature_grassmann,
    curvature_immersion,
    curvature_stiefel,
    curvature_upper_bound,
    horizontal_project,
    ltop_eigen_floor,
    oneill_correction,
    unscaled_stiefel_curvature,
)
from .dynamics import (
    GeodesicState,
    geodesic_rhs,
    horizontal_geodesic_rhs_scalar,
    integrate_geodesic,
    momenta,
)
from .geodesy import (
    GreatCirclePath,
    JordanFrame,
    NeretinPath,
    align_rotations,
    distance_closed_mod_rot,
    distance_open,
    great_circle,
    horizontality_residual,
    jordan_angles,
    neretin_path,
    projection_matrix,
)
from .lift import (
    LiftPair,
    ZeroSetReport,
    apply_phi,
    lift_curve,
    verify_isometry,
    zero_set,
)
from .matching import MatchResult, MonotoneMap, dp_match, dp_match_closed, upper_bound_pipeline

__version__ = "0.1.0"
