"""Exact lattice-polytope toolkit centred on free sums and their normalized volume."""

from .errors import (
    BudgetExceededError,
    DimensionError,
    DomainError,
    FreesumError,
    InternalConsistencyError,
    LowerDimensionalError,
    UnboundedDualError,
)
from .polytope import (
    Face,
    Hyperplane,
    Location,
    Polytope,
    affine_dimension,
    contains,
    convex_hull,
    face_lattice,
    is_reflexive,
    polar_dual,
)
from .volume import euclidean_volume, normalized_volume, relative_normalized_volume, triangulate
from .ehrhart import braun_check, ehrhart_polynomial, h_star_vector, lattice_point_count
from .sums import free_sum, minkowski_sum, mixed_volume, verify_product_formula
from .bkk import (
    SupportSet,
    bkk_bound,
    build_free_sum_system,
    certify_mv_equals_vol,
    check_face_conditions,
    kushnirenko_bound,
    newton_polytope,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "DimensionError",
    "DomainError",
    "Face",
    "FreesumError",
    "Hyperplane",
    "InternalConsistencyError",
    "Location",
    "LowerDimensionalError",
    "Polytope",
    "SupportSet",
    "UnboundedDualError",
    "affine_dimension",
    "bkk_bound",
    "braun_check",
    "build_free_sum_system",
    "certify_mv_equals_vol",
    "check_face_conditions",
    "contains",
    "convex_hull",
    "ehrhart_polynomial",
    "euclidean_volume",
    "face_lattice",
    "free_sum",
    "h_star_vector",
    "is_reflexive",
    "kushnirenko_bound",
    "lattice_point_count",
    "minkowski_sum",
    "mixed_volume",
    "newton_polytope",
    "normalized_volume",
    "polar_dual",
    "relative_normalized_volume",
    "triangulate",
    "verify_product_formula",
]
