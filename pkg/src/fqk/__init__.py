"""Fusion-ring combinatorics and integer K-theory of free quantum groups.

The package computes with the fusion rings of free orthogonal and free
unitary quantum groups and their free products: tensor decompositions,
coset spaces and divisibility of quantum subgroups, the combinatorial
Bass-Serre tree of a two-factor product, and the exact integer homological
algebra (Smith normal form, boundary maps, the six-term sequence) that
produces their K-groups.
"""

from .fusion import (
    FO,
    FU,
    FormalSum,
    FreeProduct,
    FusionRing,
    Irrep,
    MalformedIrrepError,
    UnsupportedBlockSizeError,
    Z,
    conj,
    dim,
    fuse,
    fu_words_up_to,
    irreps_up_to,
    is_fu_word,
    make_ring,
)
from .intmatrix import (
    IntMatrix,
    KerCokerResult,
    ModuleShapeError,
    SNFResult,
    ker_coker,
    snf,
)
from .ktheory import (
    AbelianGroup,
    CoefficientModule,
    KGroupReport,
    NotStabilizedError,
    TruncatedAction,
    UnresolvedExtension,
    boundary_matrix,
    generator_irreps,
    k_of_tree_algebra,
    presentation_ring,
    pv_k_groups,
    pv_matrices,
    regular_module,
    right_action_matrix,
    trivial_module,
)
from .subgroups import (
    Coset,
    CosetBudgetError,
    DivisibilityVerdict,
    EvenSubgroup,
    FactorSubgroup,
    FUInFOZSubgroup,
    SubgroupSpec,
    TrivialSubgroup,
    coset_of,
    cosets_up_to,
    embed_fu_generator,
    fu_generated_up_to,
    is_divisible,
    subgroup_from_token,
)
from .tensoralg import (
    GroupPresentation,
    ResolutionVerdict,
    TensorElement,
    augmentation,
    differential,
    homotopy,
    resolution_check,
)
from .tree import BassSerreGraph, TreeVerdict, build_tree, verify_tree

__version__ = "0.1.0"

__all__ = [
    "FO",
    "FU",
    "Z",
    "FreeProduct",
    "FusionRing",
    "FormalSum",
    "Irrep",
    "make_ring",
    "fuse",
    "conj",
    "dim",
    "irreps_up_to",
    "is_fu_word",
    "fu_words_up_to",
    "MalformedIrrepError",
    "UnsupportedBlockSizeError",
    "SubgroupSpec",
    "FactorSubgroup",
    "FUInFOZSubgroup",
    "EvenSubgroup",
    "TrivialSubgroup",
    "Coset",
    "CosetBudgetError",
    "DivisibilityVerdict",
    "coset_of",
    "cosets_up_to",
    "is_divisible",
    "embed_fu_generator",
    "fu_generated_up_to",
    "subgroup_from_token",
    "BassSerreGraph",
    "TreeVerdict",
    "build_tree",
    "verify_tree",
    "IntMatrix",
    "SNFResult",
    "KerCokerResult",
    "ModuleShapeError",
    "snf",
    "ker_coker",
    "AbelianGroup",
    "UnresolvedExtension",
    "KGroupReport",
    "NotStabilizedError",
    "CoefficientModule",
    "TruncatedAction",
    "boundary_matrix",
    "k_of_tree_algebra",
    "pv_matrices",
    "pv_k_groups",
    "trivial_module",
    "regular_module",
    "right_action_matrix",
    "presentation_ring",
    "generator_irreps",
    "GroupPresentation",
    "TensorElement",
    "ResolutionVerdict",
    "augmentation",
    "differential",
    "homotopy",
    "resolution_check",
]
