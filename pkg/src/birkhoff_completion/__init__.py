"""Birkhoff completions of finite lattices and formal contexts."""
from .completion import (
    CompletionReport,
    EmbeddingError,
    NotDistributiveError,
    Verification,
    bc_context,
    bc_context_downset,
    birkhoff_completion_context,
    birkhoff_completion_context_downset,
    birkhoff_down,
    birkhoff_up,
    eta,
    factor_embedding,
    fig6_check,
    iota,
    validate_join_embedding,
    verify_commutation,
    verify_duality,
)
from .context import (
    Concept,
    ConceptLattice,
    FormalContext,
    attribute_geq,
    clarify,
    concept_lattice,
    contraordinal_scale,
    derive_attributes,
    derive_objects,
    is_attribute_reduced,
    meet_irreducible_attributes,
    reduce,
    standard_context,
)
from .implications import (
    Implication,
    ImplicationBasis,
    NotReducedError,
    SizeLimitError,
    canonical_direct_basis,
    closed_sets_lattice,
    closure,
    distributive_part,
    holds,
    proper_premises,
)
from .order import (
    ForbiddenSublattice,
    Lattice,
    NotALatticeError,
    OrderError,
    Poset,
    SetFamilyLattice,
    as_lattice,
    dual,
    find_forbidden_sublattice,
    forbidden_sublattices,
    is_distributive_law,
    is_isomorphic,
    join_irreducibles,
    make_poset,
    meet_irreducibles,
    order_filters,
    order_ideals,
)

__version__ = "0.1.0"
