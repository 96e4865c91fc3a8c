"""Birkhoff completions of lattices and formal contexts.

The up-set completion of a lattice ``L`` is the lattice of order filters of its
meet-irreducibles ordered by reverse inclusion; ``x ↦ ↑x ∩ M(L)`` embeds ``L``
into it as a join-semilattice.  The down-set completion is the dual
construction on join-irreducibles.  On contexts the up-set completion adds one
negated object per meet-irreducible attribute.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Mapping

from .context import (
    ConceptLattice,
    FormalContext,
    concept_lattice,
    irreducible_attribute_labels,
    irreducible_object_labels,
    negated,
    reduce,
)
from .implications import Implication, canonical_direct_basis, holds
from .order import (
    ForbiddenSublattice,
    Lattice,
    SetFamilyLattice,
    dual,
    find_forbidden_sublattice,
    is_distributive_law,
    is_isomorphic,
    join_irreducibles,
    meet_irreducibles,
    order_filters,
    order_ideals,
)

__all__ = [
    "NotDistributiveError",
    "EmbeddingError",
    "CompletionReport",
    "Verification",
    "birkhoff_up",
    "birkhoff_down",
    "iota",
    "eta",
    "factor_embedding",
    "validate_join_embedding",
    "bc_context",
    "bc_context_downset",
    "birkhoff_completion_context",
    "birkhoff_completion_context_downset",
    "verify_commutation",
    "verify_duality",
    "Fig6Report",
    "fig6_check",
]


class NotDistributiveError(ValueError):
    def __init__(self, message, witness: ForbiddenSublattice | None = None):
        super().__init__(message)
        self.witness = witness


class EmbeddingError(ValueError):
    """A supplied map is not a join-semilattice embedding; ``pair`` is the first offender."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


@dataclass
class CompletionReport:
    """Result of a Birkhoff completion.

    ``embedding`` maps each element of the original lattice to its image in
    ``completed``.  For context completions ``generators`` maps every added
    ``~not:`` label to the concept it generates, ``coincidences`` lists
    ``(generator, existing label)`` pairs whose concepts agree, ``new_concepts``
    holds the generated concepts absent from the original lattice, and
    ``invalidated`` the non-distributive basis implications that no longer hold.
    """

    completed: Lattice
    embedding: dict
    kind: str = "up"
    original: Lattice | None = None
    context: FormalContext | None = None
    generators: dict = field(default_factory=dict)
    coincidences: list = field(default_factory=list)
    new_concepts: list = field(default_factory=list)
    invalidated: list = field(default_factory=list)
    concepts: ConceptLattice | None = None


@dataclass(frozen=True)
class Verification:
    ok: bool
    witness: object = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


# -- lattice level -----------------------------------------------------------


def iota(L: Lattice) -> dict:
    """x ↦ ↑x ∩ M(L) as frozensets of labels."""
    M = set(meet_irreducibles(L))
    return {x: L.up(x) & M for x in L.labels}


def birkhoff_up(L: Lattice) -> CompletionReport:
    """Up-set completion (F(M(L)), ⊇) with the join-embedding ι."""
    completed = order_filters(L.subposet(meet_irreducibles(L)))
    return CompletionReport(completed, iota(L), kind="up", original=L)


def birkhoff_down(L: Lattice) -> CompletionReport:
    """Down-set completion (I(J(L)), ⊆) with x ↦ ↓x ∩ J(L)."""
    J = set(join_irreducibles(L))
    completed = order_ideals(L.subposet(J))
    embedding = {x: L.down(x) & J for x in L.labels}
    return CompletionReport(completed, embedding, kind="down", original=L)


def eta(L: Lattice) -> dict:
    """The isomorphism a ↦ {x ∈ M(L) | x ≥ a} of a distributive lattice onto its up-set completion."""
    if not is_distributive_law(L):
        w = find_forbidden_sublattice(L)
        raise NotDistributiveError(f"lattice is not distributive ({w.kind} sublattice {sorted(map(str, w.elements))})", w)
    target: SetFamilyLattice = birkhoff_up(L).completed
    mapping = iota(L)
    if len(set(mapping.values())) != len(L) or len(target) != len(L):
        raise AssertionError("η is not a bijection")  # pragma: no cover
    for x, y in itertools.product(L.labels, repeat=2):
        if L.le(x, y) != target.le(mapping[x], mapping[y]):  # pragma: no cover
            raise AssertionError(f"η does not reflect the order at ({x!r}, {y!r})")
    return mapping


def validate_join_embedding(L: Lattice, Lhat: Lattice, phi: Mapping) -> None:
    """Raise EmbeddingError unless ``phi`` is injective and preserves binary joins."""
    missing = [x for x in L.labels if x not in phi]
    if missing:
        raise EmbeddingError(f"map undefined at {missing[0]!r}", (missing[0], missing[0]))
    for x in L.labels:
        if phi[x] not in Lhat.index:
            raise EmbeddingError(f"image of {x!r} is not an element of the target", (x, x))
    for x, y in itertools.combinations_with_replacement(L.labels, 2):
        if x != y and phi[x] == phi[y]:
            raise EmbeddingError(f"map is not injective: {x!r} and {y!r} collide", (x, y))
        if phi[L.join(x, y)] != Lhat.join(phi[x], phi[y]):
            raise EmbeddingError(f"map does not preserve the join of {x!r} and {y!r}", (x, y))


def factor_embedding(L: Lattice, Lhat: Lattice, phi: Mapping) -> dict:
    """The join-embedding ε: BC(L) → L̂ with φ = ε ∘ ι.

    ``ε(A) = ⋀ {φ(x) | x ∈ κ(A)}`` where ``κ(A) = {x | ι(x) ⊆ A}``.  Both the
    inputs and the result are validated; violations raise EmbeddingError.
    """
    if not is_distributive_law(Lhat):
        w = find_forbidden_sublattice(Lhat)
        raise NotDistributiveError("target lattice is not distributive", w)
    validate_join_embedding(L, Lhat, phi)
    report = birkhoff_up(L)
    BC, io = report.completed, report.embedding
    eps = {}
    for A in BC.labels:
        kappa = [x for x in L.labels if io[x] <= A]
        eps[A] = Lhat.meet_all(phi[x] for x in kappa)
    for x in L.labels:
        if eps[io[x]] != phi[x]:  # pragma: no cover - guaranteed by the construction
            raise EmbeddingError(f"φ ≠ ε∘ι at {x!r}", (x, x))
    validate_join_embedding(BC, Lhat, eps)
    return eps


# -- context level -----------------------------------------------------------


def bc_context(K: FormalContext) -> FormalContext:
    """K plus one object ``~not:m`` per meet-irreducible attribute m, having n iff m ≱_K n."""
    rows = {}
    cols = K.col_masks
    for m in irreducible_attribute_labels(K):
        cm = cols[K.attribute_index[m]]
        rows[negated(m)] = [n for n, cn in zip(K.attributes, cols) if cn & ~cm]
    _check_fresh(K.objects, rows)
    return K.add_objects(rows)


def bc_context_downset(K: FormalContext) -> FormalContext:
    """K plus one attribute ``~not:g`` per join-irreducible object g, held by h iff h' ⊄ g'."""
    return bc_context(K.transpose()).transpose()


def _check_fresh(existing, new) -> None:
    clash = set(existing) & set(new)
    if clash:
        raise ValueError(f"generated label collides with an existing one: {sorted(map(str, clash))[0]}")


def _invalidated(K: FormalContext, BK: FormalContext) -> list[Implication]:
    R = reduce(K, objects=False)
    basis = canonical_direct_basis(R)
    return [imp for imp in basis if not imp.is_distributive and not holds(imp, BK)]


def birkhoff_completion_context(K: FormalContext) -> tuple[FormalContext, CompletionReport]:
    """Up-set completion of a context, annotated against its concept lattice."""
    BK = bc_context(K)
    before, after = concept_lattice(K), concept_lattice(BK)
    embedding = {
        c: after.concepts[after.by_intent[b]] for c, b in zip(before.concepts, before.intent_masks)
    }
    old_intents = set(before.intent_masks)
    generators, coincidences, new = {}, [], []
    for g in BK.objects[len(K.objects):]:
        c = after.object_concept(g)
        generators[g] = c
        for h in K.objects:
            if after.object_concept(h) == c:
                coincidences.append((g, h))
        if after.intent_masks[after.concepts.index(c)] not in old_intents and c not in new:
            new.append(c)
    report = CompletionReport(
        after.lattice, embedding, kind="up", original=before.lattice, context=BK,
        generators=generators, coincidences=coincidences, new_concepts=new,
        invalidated=_invalidated(K, BK), concepts=after,
    )
    return BK, report


def birkhoff_completion_context_downset(K: FormalContext) -> tuple[FormalContext, CompletionReport]:
    """Down-set completion of a context: negated attributes for join-irreducible objects."""
    BK = bc_context_downset(K)
    before, after = concept_lattice(K), concept_lattice(BK)
    # objects are unchanged, so concepts correspond through their extents
    embedding = {
        c: after.concepts[after.by_extent[a]] for c, a in zip(before.concepts, before.extent_masks)
    }
    old_extents = set(before.extent_masks)
    generators, coincidences, new = {}, [], []
    for m in BK.attributes[len(K.attributes):]:
        c = after.attribute_concept(m)
        generators[m] = c
        for n in K.attributes:
            if after.attribute_concept(n) == c:
                coincidences.append((m, n))
        if after.extent_masks[after.concepts.index(c)] not in old_extents and c not in new:
            new.append(c)
    report = CompletionReport(
        after.lattice, embedding, kind="down", original=before.lattice, context=BK,
        generators=generators, coincidences=coincidences, new_concepts=new,
        invalidated=_invalidated(K, BK), concepts=after,
    )
    return BK, report


def verify_commutation(K: FormalContext) -> Verification:
    """B(BC(K)) ≅ BC(B(K)); the witness is the isomorphism found."""
    left = concept_lattice(bc_context(K)).lattice
    right = birkhoff_up(concept_lattice(K).lattice).completed
    iso = is_isomorphic(left, right)
    if iso is None:
        return Verification(False, None, f"sizes {len(left)} vs {len(right)}, no isomorphism")
    return Verification(True, iso, f"both sides have {len(left)} elements")


def verify_duality(L: Lattice) -> Verification:
    """I(J(L)) ≅ (F(M(L∂)), ⊇)∂."""
    left = birkhoff_down(L).completed
    right = dual(birkhoff_up(dual(L)).completed)
    iso = is_isomorphic(left, right)
    return Verification(iso is not None, iso, f"sizes {len(left)} and {len(right)}")


# -- order embeddings smaller than the completions ----------------------------


@dataclass(frozen=True)
class Fig6Report:
    extension_distributive: bool
    inclusion_is_order_embedding: bool
    up_size: int
    down_size: int
    extension_size: int

    @property
    def passed(self) -> bool:
        return (
            self.extension_distributive
            and self.inclusion_is_order_embedding
            and self.up_size > self.extension_size
            and self.down_size > self.extension_size
        )


def fig6_check(lattice: Lattice | None = None, extension: Lattice | None = None) -> Fig6Report:
    """Check that ``extension`` is a distributive order-extension of ``lattice`` smaller than both completions.

    Defaults to the bundled ``fig6`` pair.
    """
    if lattice is None or extension is None:
        from .datasets import load

        pair = load("fig6").payload
        lattice, extension = pair["lattice"], pair["extension"]
    shared = [x for x in lattice.labels if x in extension.index]
    embeds = len(shared) == len(lattice) and all(
        lattice.le(x, y) == extension.le(x, y) for x, y in itertools.product(shared, repeat=2)
    )
    return Fig6Report(
        extension_distributive=is_distributive_law(extension),
        inclusion_is_order_embedding=embeds,
        up_size=len(birkhoff_up(lattice).completed),
        down_size=len(birkhoff_down(lattice).completed),
        extension_size=len(extension),
    )
