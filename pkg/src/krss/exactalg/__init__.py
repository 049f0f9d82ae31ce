"""Exact integer linear algebra: Smith form, abelian groups, chain complexes."""

from .chains import (
    ChainComplexError,
    ChainMap,
    ChainMapError,
    Homology,
    IntChainComplex,
    homology,
    homology_at,
    induced_on_homology,
    mapping_cone,
)
from .groups import (
    FGAbelianGroup,
    GroupHom,
    SubQuotient,
    assembles_to,
    canonical_group,
    group_from_presentation,
    homology_of_groups,
    possible_extensions,
    presentation,
    subquotient,
)
from .matrix import IntMatrix, Lattice, kernel_basis, smith_decomposition, smith_normal_form

__all__ = [
    "ChainComplexError",
    "ChainMap",
    "ChainMapError",
    "FGAbelianGroup",
    "GroupHom",
    "Homology",
    "IntChainComplex",
    "IntMatrix",
    "Lattice",
    "SubQuotient",
    "assembles_to",
    "canonical_group",
    "group_from_presentation",
    "homology",
    "homology_at",
    "homology_of_groups",
    "induced_on_homology",
    "kernel_basis",
    "mapping_cone",
    "possible_extensions",
    "presentation",
    "smith_decomposition",
    "smith_normal_form",
    "subquotient",
]
