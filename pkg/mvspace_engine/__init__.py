"""Exact multi vector space engine."""

from mvspace_engine.dimension_maps import (
    RestrictedMVSpace,
    common_mbasis,
    im_restrict,
    ker_restrict,
    map_image,
    mdim,
    modular_dimension_check,
    rank_nullity_check,
    theta_dominance,
)
from mvspace_engine.errors import (
    BudgetExceeded,
    DimensionMismatch,
    FieldMismatch,
    InvariantViolation,
    MVSpaceError,
    NotAMultiVectorSpace,
    PreconditionError,
    SpaceFileError,
)
from mvspace_engine.exact_linalg import RATIONALS, LinearMap, ScalarField, Subspace
from mvspace_engine.independence_basis import (
    MBasis,
    MultiBasis,
    MultiIndex,
    find_mbasis,
    is_mbasis,
    is_multi_linearly_independent,
    multi_index,
)
from mvspace_engine.mvspace import MVSpace, count, intersect, make_mvspace, sum_spaces

__version__ = "0.1.0"
