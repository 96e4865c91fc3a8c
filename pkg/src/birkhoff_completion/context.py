"""Formal contexts, derivation operators and concept lattices.

Object and attribute sets travel as frozensets of labels through the public
API; internally they are Python ints used as bitsets over the index order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from .order import Lattice, Poset, join_irreducibles, meet_irreducibles

__all__ = [
    "NEG",
    "negated",
    "FormalContext",
    "Concept",
    "ConceptLattice",
    "derive_attributes",
    "derive_objects",
    "concept_lattice",
    "attribute_geq",
    "meet_irreducible_attributes",
    "irreducible_attribute_labels",
    "irreducible_object_labels",
    "clarify",
    "reduce",
    "is_attribute_reduced",
    "contraordinal_scale",
    "standard_context",
]

# reserved prefix for synthetic (negated) objects and attributes
NEG = "~not:"


def negated(label) -> str:
    return f"{NEG}{label}"


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FormalContext:
    """Objects × attributes with a boolean incidence matrix."""

    def __init__(self, objects: Sequence[Hashable], attributes: Sequence[Hashable], incidence):
        objects, attributes = tuple(objects), tuple(attributes)
        inc = np.array(incidence, dtype=bool).reshape(len(objects), len(attributes))
        for kind, labels in (("object", objects), ("attribute", attributes)):
            if len(set(labels)) != len(labels):
                seen = set()
                dup = next(x for x in labels if x in seen or seen.add(x))
                raise ValueError(f"duplicate {kind} label {dup!r}")
        inc.flags.writeable = False
        self.objects = objects
        self.attributes = attributes
        self.incidence = inc
        self.object_index = {g: i for i, g in enumerate(objects)}
        self.attribute_index = {m: j for j, m in enumerate(attributes)}

    def __repr__(self) -> str:
        return f"FormalContext({len(self.objects)} objects, {len(self.attributes)} attributes)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.attributes == other.attributes
            and np.array_equal(self.incidence, other.incidence)
        )

    __hash__ = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.incidence.shape

    @cached_property
    def row_masks(self) -> tuple[int, ...]:
        """Intent of each object as an attribute bitset."""
        return tuple(sum(1 << int(j) for j in np.flatnonzero(row)) for row in self.incidence)

    @cached_property
    def col_masks(self) -> tuple[int, ...]:
        """Extent of each attribute as an object bitset."""
        return tuple(sum(1 << int(i) for i in np.flatnonzero(col)) for col in self.incidence.T)

    @property
    def all_objects(self) -> int:
        return (1 << len(self.objects)) - 1

    @property
    def all_attributes(self) -> int:
        return (1 << len(self.attributes)) - 1

    def intent_mask(self, objmask: int) -> int:
        r = self.all_attributes
        rows = self.row_masks
        for i in _bits(objmask):
            r &= rows[i]
        return r

    def extent_mask(self, attrmask: int) -> int:
        r = self.all_objects
        cols = self.col_masks
        for j in _bits(attrmask):
            r &= cols[j]
        return r

    def closure_mask(self, attrmask: int) -> int:
        return self.intent_mask(self.extent_mask(attrmask))

    def object_mask(self, objects: Iterable[Hashable]) -> int:
        return sum(1 << self.object_index[g] for g in set(objects))

    def attribute_mask(self, attributes: Iterable[Hashable]) -> int:
        return sum(1 << self.attribute_index[m] for m in set(attributes))

    def objects_of(self, mask: int) -> frozenset:
        return frozenset(self.objects[i] for i in _bits(mask))

    def attributes_of(self, mask: int) -> frozenset:
        return frozenset(self.attributes[j] for j in _bits(mask))

    def intent(self, g) -> frozenset:
        return self.attributes_of(self.row_masks[self.object_index[g]])

    def extent(self, m) -> frozenset:
        return self.objects_of(self.col_masks[self.attribute_index[m]])

    def transpose(self) -> "FormalContext":
        return FormalContext(self.attributes, self.objects, self.incidence.T)

    def select(self, objects: Iterable[Hashable] | None = None,
               attributes: Iterable[Hashable] | None = None) -> "FormalContext":
        """Subcontext on the given labels, keeping the original order."""
        keep_g = set(self.objects if objects is None else objects)
        keep_m = set(self.attributes if attributes is None else attributes)
        gi = [i for i, g in enumerate(self.objects) if g in keep_g]
        mj = [j for j, m in enumerate(self.attributes) if m in keep_m]
        return FormalContext(
            [self.objects[i] for i in gi],
            [self.attributes[j] for j in mj],
            self.incidence[np.ix_(gi, mj)],
        )

    def add_objects(self, rows: dict) -> "FormalContext":
        """Append objects given as ``label -> attribute set``."""
        extra = np.zeros((len(rows), len(self.attributes)), dtype=bool)
        for r, attrs in enumerate(rows.values()):
            for m in attrs:
                extra[r, self.attribute_index[m]] = True
        return FormalContext(
            self.objects + tuple(rows), self.attributes, np.vstack([self.incidence, extra])
        )

    def add_attributes(self, cols: dict) -> "FormalContext":
        """Append attributes given as ``label -> object set``."""
        return self.transpose().add_objects(cols).transpose()


def derive_attributes(K: FormalContext, objects: Iterable[Hashable]) -> frozenset:
    """Attributes common to all given objects (all of M for the empty set)."""
    return K.attributes_of(K.intent_mask(K.object_mask(objects)))


def derive_objects(K: FormalContext, attributes: Iterable[Hashable]) -> frozenset:
    return K.objects_of(K.extent_mask(K.attribute_mask(attributes)))


@dataclass(frozen=True)
class Concept:
    extent: frozenset
    intent: frozenset

    def __repr__(self) -> str:
        ext = ", ".join(sorted(map(str, self.extent)))
        itt = ", ".join(sorted(map(str, self.intent)))
        return f"({{{ext}}}, {{{itt}}})"


@dataclass(frozen=True, eq=False)
class ConceptLattice:
    """Concept lattice of a context with its object and attribute concepts.

    ``lattice`` has the Concept instances as labels, in lectic order of intents.
    """

    context: FormalContext
    lattice: Lattice
    extent_masks: tuple[int, ...]
    intent_masks: tuple[int, ...]

    @property
    def concepts(self) -> tuple[Concept, ...]:
        return self.lattice.labels

    def __len__(self) -> int:
        return len(self.lattice)

    @cached_property
    def by_intent(self) -> dict[int, int]:
        return {b: i for i, b in enumerate(self.intent_masks)}

    @cached_property
    def by_extent(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.extent_masks)}

    def object_concept(self, g) -> Concept:
        """γg, the smallest concept whose extent contains ``g``."""
        K = self.context
        return self.concepts[self.by_intent[K.row_masks[K.object_index[g]]]]

    def attribute_concept(self, m) -> Concept:
        """μm, the largest concept whose intent contains ``m``."""
        K = self.context
        return self.concepts[self.by_extent[K.col_masks[K.attribute_index[m]]]]

    def object_labels(self) -> dict[Concept, list]:
        """Objects attached to each concept (reduced labelling)."""
        out: dict[Concept, list] = {c: [] for c in self.concepts}
        for g in self.context.objects:
            out[self.object_concept(g)].append(g)
        return out

    def attribute_labels(self) -> dict[Concept, list]:
        out: dict[Concept, list] = {c: [] for c in self.concepts}
        for m in self.context.attributes:
            out[self.attribute_concept(m)].append(m)
        return out


def _next_closure_intents(K: FormalContext) -> list[int]:
    """All intents in lectic order, attribute 0 most significant."""
    n = len(K.attributes)
    closure = K.closure_mask
    a = closure(0)
    out = [a]
    full = K.all_attributes
    while a != full:
        for i in range(n - 1, -1, -1):
            bit = 1 << i
            if a & bit:
                continue
            lower = bit - 1  # attributes with index < i
            b = closure((a & lower) | bit)
            if (b & ~a) & lower == 0:
                a = b
                out.append(a)
                break
        else:  # pragma: no cover - the full set is always reached
            break
    return out


def concept_lattice(K: FormalContext) -> ConceptLattice:
    """All concepts via NextClosure, ordered by extent inclusion."""
    intents = _next_closure_intents(K)
    extents = [K.extent_mask(b) for b in intents]
    n = len(intents)
    ext_pos = {a: i for i, a in enumerate(extents)}
    int_pos = {b: i for i, b in enumerate(intents)}
    leq = np.array([[(a & ~c) == 0 for c in extents] for a in extents], dtype=bool).reshape(n, n)
    # extents and intents are both closed under intersection
    meet = np.array([[ext_pos[a & c] for c in extents] for a in extents], dtype=np.intp).reshape(n, n)
    join = np.array([[int_pos[b & d] for d in intents] for b in intents], dtype=np.intp).reshape(n, n)
    concepts = [Concept(K.objects_of(a), K.attributes_of(b)) for a, b in zip(extents, intents)]
    return ConceptLattice(K, Lattice(concepts, leq, meet, join), tuple(extents), tuple(intents))


def attribute_geq(K: FormalContext, m, n) -> bool:
    """m ≥_K n, i.e. the extent of ``m`` contains the extent of ``n``."""
    cm = K.col_masks[K.attribute_index[m]]
    cn = K.col_masks[K.attribute_index[n]]
    return (cn & ~cm) == 0


def _reducible(masks: Sequence[int], full: int) -> list[bool]:
    """Which masks equal the intersection of the strictly larger ones."""
    out = []
    for a in masks:
        r = full
        for b in masks:
            if b != a and (a & ~b) == 0:
                r &= b
        out.append(r == a)
    return out


def irreducible_attribute_labels(K: FormalContext) -> list:
    """Every attribute whose attribute concept is meet-irreducible.

    Duplicate columns are all kept; full columns never qualify.
    """
    red = _reducible(K.col_masks, K.all_objects)
    return [m for m, r in zip(K.attributes, red) if not r]


def irreducible_object_labels(K: FormalContext) -> list:
    """Every object whose object concept is join-irreducible."""
    red = _reducible(K.row_masks, K.all_attributes)
    return [g for g, r in zip(K.objects, red) if not r]


def meet_irreducible_attributes(K: FormalContext) -> list:
    """Meet-irreducible attributes of the clarified context."""
    return irreducible_attribute_labels(clarify(K))


def _first_by_label(labels: Sequence, masks: Sequence[int]) -> list[int]:
    """Indices surviving clarification: the lexicographically first label per mask."""
    best: dict[int, int] = {}
    for i, (x, m) in enumerate(zip(labels, masks)):
        j = best.get(m)
        if j is None or str(x) < str(labels[j]):
            best[m] = i
    return sorted(best.values())


def clarify(K: FormalContext, *, return_merges: bool = False):
    """Merge duplicate rows and columns.

    With ``return_merges`` also returns ``{survivor: [merged labels...]}`` for
    objects and attributes.
    """
    gi = _first_by_label(K.objects, K.row_masks)
    mj = _first_by_label(K.attributes, K.col_masks)
    C = K.select([K.objects[i] for i in gi], [K.attributes[j] for j in mj])
    if not return_merges:
        return C
    obj_merge = {K.objects[i]: [g for g, r in zip(K.objects, K.row_masks) if r == K.row_masks[i]] for i in gi}
    att_merge = {K.attributes[j]: [m for m, c in zip(K.attributes, K.col_masks) if c == K.col_masks[j]] for j in mj}
    return C, obj_merge, att_merge


def reduce(K: FormalContext, *, objects: bool = True, attributes: bool = True) -> FormalContext:
    """Clarify, then drop reducible objects and/or attributes.

    Full rows and full columns count as reducible (they are empty meets/joins).
    """
    C = clarify(K)
    keep_g = irreducible_object_labels(C) if objects else list(C.objects)
    keep_m = irreducible_attribute_labels(C) if attributes else list(C.attributes)
    return C.select(keep_g, keep_m)


def is_attribute_reduced(K: FormalContext) -> bool:
    return len(irreducible_attribute_labels(K)) == len(K.attributes) and \
        len(set(K.col_masks)) == len(K.col_masks)


def contraordinal_scale(p: Poset) -> FormalContext:
    """The context (P̄, P, ≱) with object copies prefixed by ``~not:``."""
    return FormalContext([negated(x) for x in p.labels], p.labels, ~p.leq.T)


def standard_context(L: Lattice) -> FormalContext:
    """(J(L), M(L), ≤); its concept lattice is isomorphic to ``L``."""
    J = join_irreducibles(L)
    M = meet_irreducibles(L)
    ji = [L.index[x] for x in J]
    mi = [L.index[x] for x in M]
    return FormalContext(J, M, L.leq[np.ix_(ji, mi)])
