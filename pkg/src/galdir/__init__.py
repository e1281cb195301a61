"""galdir: exact incidence geometry in the affine plane over F_p.

Classifies rich/poor/special directions of point sets, builds and factors
the associated lacunary polynomials with multiplicities, and verifies the
covered-or-many-special-directions dichotomy by exhaustive and randomized
search.
"""

from .analysis import (
    CheckOutcome,
    ExhaustiveSummary,
    InequalityAudit,
    SmallSetVerdict,
    TheoremVerdict,
    construct_extremal,
    construct_power_graph,
    exhaustive_verify,
    full_check,
    inequality_audit,
    open_problem_bound,
    special_direction_bound,
    verify_main_theorem,
    verify_small_set_directions,
)
from .bipoly import BiPoly, product_of_point_factors
from .errors import (
    InvariantViolation,
    LacunaryShapeError,
    OutOfTheoremRange,
    PointSetFormatError,
)
from .field import Poly, Prime, pow_mod, xp_minus_x
from .plane import (
    AffineMap,
    DirectionProfile,
    PlaneStats,
    PointSet,
    classify_direction,
    determined_directions,
    is_collinear,
    is_covered_by_n_lines,
    pair_count,
    plane_stats,
)
from .redei import (
    RSBundle,
    lacunary_factorize,
    recover_rich_lines,
    redei_polynomial,
    rs_bundle,
    verify_blackbox,
)
from .search import dump_report, reverify_report, search_open_problem

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "BiPoly",
    "CheckOutcome",
    "DirectionProfile",
    "ExhaustiveSummary",
    "InequalityAudit",
    "InvariantViolation",
    "LacunaryShapeError",
    "OutOfTheoremRange",
    "PlaneStats",
    "PointSet",
    "PointSetFormatError",
    "Poly",
    "Prime",
    "RSBundle",
    "SmallSetVerdict",
    "TheoremVerdict",
    "classify_direction",
    "construct_extremal",
    "construct_power_graph",
    "determined_directions",
    "dump_report",
    "exhaustive_verify",
    "full_check",
    "inequality_audit",
    "is_collinear",
    "is_covered_by_n_lines",
    "lacunary_factorize",
    "open_problem_bound",
    "pair_count",
    "plane_stats",
    "pow_mod",
    "product_of_point_factors",
    "recover_rich_lines",
    "redei_polynomial",
    "reverify_report",
    "rs_bundle",
    "search_open_problem",
    "special_direction_bound",
    "verify_blackbox",
    "verify_main_theorem",
    "verify_small_set_directions",
    "xp_minus_x",
]
