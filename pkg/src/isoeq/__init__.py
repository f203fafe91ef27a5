"""Construction, verification, classification and exhaustive audit of
solutions of the isometry equation over finite fields."""

from .gf import FieldSpec, field_make, enumerate_field, enumerate_projective_line
from .linalg import AmbientSpace, Subspace, span
from .core import (
    SolutionPair,
    SpaceTuple,
    common_meet,
    factor_pair,
    is_trivial_solution,
    pairs_equivalent,
    tuples_equivalent,
    verify_equation,
)
from .constructors import (
    TypeASpec,
    TypeBSpec,
    TypeCSpec,
    build_type_a,
    build_type_b,
    build_type_c,
)
from .classify import classify, check_structural_lemmas, dimension_profile, intersection_grid
from .search import (
    Pruning,
    SearchConfig,
    enumerate_coverings,
    find_partners,
    search_nontrivial,
    verify_covering_structure,
)

__version__ = "0.1.0"

__all__ = [
    "FieldSpec",
    "field_make",
    "enumerate_field",
    "enumerate_projective_line",
    "AmbientSpace",
    "Subspace",
    "span",
    "SolutionPair",
    "SpaceTuple",
    "common_meet",
    "factor_pair",
    "is_trivial_solution",
    "pairs_equivalent",
    "tuples_equivalent",
    "verify_equation",
    "TypeASpec",
    "TypeBSpec",
    "TypeCSpec",
    "build_type_a",
    "build_type_b",
    "build_type_c",
    "classify",
    "check_structural_lemmas",
    "dimension_profile",
    "intersection_grid",
    "Pruning",
    "SearchConfig",
    "enumerate_coverings",
    "find_partners",
    "search_nontrivial",
    "verify_covering_structure",
]
