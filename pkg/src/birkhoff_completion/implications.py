"""Attribute implications, proper premises and the canonical direct basis."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .context import FormalContext, _bits, is_attribute_reduced
from .order import Lattice

__all__ = [
    "NotReducedError",
    "SizeLimitError",
    "Implication",
    "ImplicationBasis",
    "closure",
    "holds",
    "proper_premises",
    "canonical_direct_basis",
    "distributive_part",
    "closed_sets_lattice",
]


class NotReducedError(ValueError):
    """The context still has reducible or duplicate attributes."""


class SizeLimitError(RuntimeError):
    pass


def _sorted_labels(xs: Iterable) -> list:
    return sorted(xs, key=str)


@dataclass(frozen=True)
class Implication:
    premise: frozenset
    conclusion: frozenset

    def __init__(self, premise: Iterable[Hashable], conclusion: Iterable[Hashable]):
        object.__setattr__(self, "premise", frozenset(premise))
        object.__setattr__(self, "conclusion", frozenset(conclusion))

    @property
    def is_distributive(self) -> bool:
        """Singleton premise."""
        return len(self.premise) == 1

    def __str__(self) -> str:
        lhs = ", ".join(map(str, _sorted_labels(self.premise)))
        rhs = ", ".join(map(str, _sorted_labels(self.conclusion)))
        return f"{lhs} -> {rhs}"


@dataclass(frozen=True)
class ImplicationBasis:
    universe: tuple
    implications: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "implications", tuple(self.implications))
        premises = [imp.premise for imp in self.implications]
        if len(set(premises)) != len(premises):
            raise ValueError("duplicate premise in implication basis")
        known = set(self.universe)
        for imp in self.implications:
            if not (imp.premise | imp.conclusion) <= known:
                extra = (imp.premise | imp.conclusion) - known
                raise ValueError(f"implication uses unknown attributes {sorted(map(str, extra))}")

    def __len__(self) -> int:
        return len(self.implications)

    def __iter__(self):
        return iter(self.implications)

    def __str__(self) -> str:
        return "".join(f"{imp}\n" for imp in self.implications)

    def _masks(self) -> tuple[dict, list[tuple[int, int]]]:
        pos = {m: 1 << j for j, m in enumerate(self.universe)}
        pairs = [
            (sum(pos[m] for m in imp.premise), sum(pos[m] for m in imp.conclusion))
            for imp in self.implications
        ]
        return pos, pairs


def _closure_mask(pairs: Sequence[tuple[int, int]], s: int) -> int:
    changed = True
    while changed:
        changed = False
        for prem, concl in pairs:
            if prem & ~s == 0 and concl & ~s:
                s |= concl
                changed = True
    return s


def closure(B: ImplicationBasis, S: Iterable[Hashable]) -> frozenset:
    """Least superset of ``S`` respecting every implication of ``B``."""
    pos, pairs = B._masks()
    s = sum(pos[m] for m in set(S))
    s = _closure_mask(pairs, s)
    return frozenset(m for m, bit in pos.items() if s & bit)


def holds(imp: Implication, K: FormalContext) -> bool:
    """premise′ ⊆ conclusion′ in ``K``."""
    ext_p = K.extent_mask(K.attribute_mask(imp.premise))
    ext_c = K.extent_mask(K.attribute_mask(imp.conclusion))
    return ext_p & ~ext_c == 0


def _lectic(mask: int, n: int) -> int:
    return int(format(mask, f"0{n}b")[::-1], 2) if n else 0


def _proper_premise_masks(K: FormalContext) -> list[tuple[int, int]]:
    n = len(K.attributes)
    cache: dict[int, int] = {}

    def cl(a: int) -> int:
        r = cache.get(a)
        if r is None:
            r = cache[a] = K.closure_mask(a)
        return r

    out = []
    for a in sorted(range(1 << n), key=lambda m: (bin(m).count("1"), _lectic(m, n))):
        full = cl(a)
        rest = full & ~a
        if not rest:
            continue
        for j in _bits(a):
            rest &= ~cl(a & ~(1 << j))
            if not rest:
                break
        if rest:
            out.append((a, rest))
    return out


def proper_premises(K: FormalContext) -> list[tuple[frozenset, frozenset]]:
    """Every ``(A, A•)`` with non-empty ``A• = A'' ∖ (A ∪ ⋃ (A∖{n})'')``.

    Ordered by premise size, then lectically.
    """
    return [(K.attributes_of(a), K.attributes_of(b)) for a, b in _proper_premise_masks(K)]


def canonical_direct_basis(K: FormalContext, *, full_conclusions: bool = False) -> ImplicationBasis:
    """All ``A → A•`` for proper premises ``A``; the context must be attribute-reduced.

    With ``full_conclusions`` each conclusion is widened to ``A'' ∖ A``.
    """
    if not is_attribute_reduced(K):
        raise NotReducedError(
            "canonical_direct_basis needs an attribute-reduced context; "
            "call reduce(K) first (reducible attributes can be re-added afterwards)"
        )
    imps = []
    for a, b in _proper_premise_masks(K):
        if full_conclusions:
            b = K.closure_mask(a) & ~a
        imps.append(Implication(K.attributes_of(a), K.attributes_of(b)))
    return ImplicationBasis(K.attributes, imps)


def distributive_part(B: ImplicationBasis) -> ImplicationBasis:
    return ImplicationBasis(B.universe, [imp for imp in B if imp.is_distributive])


def closed_sets_lattice(B: ImplicationBasis, *, limit: int = 1 << 16) -> Lattice:
    """Lattice of all ``B``-closed attribute sets ordered by inclusion.

    Raises SizeLimitError once more than ``limit`` closed sets are found.
    """
    n = len(B.universe)
    _, pairs = B._masks()
    full = (1 << n) - 1
    a = _closure_mask(pairs, 0)
    closed = [a]
    while a != full:
        for i in range(n - 1, -1, -1):
            bit = 1 << i
            if a & bit:
                continue
            lower = bit - 1
            b = _closure_mask(pairs, (a & lower) | bit)
            if (b & ~a) & lower == 0:
                a = b
                closed.append(a)
                break
        if len(closed) > limit:
            raise SizeLimitError(f"more than {limit} closed sets")
    k = len(closed)
    pos = {c: i for i, c in enumerate(closed)}
    leq = np.array([[(x & ~y) == 0 for y in closed] for x in closed], dtype=bool).reshape(k, k)
    meet = np.array([[pos[x & y] for y in closed] for x in closed], dtype=np.intp).reshape(k, k)
    join = np.array([[pos[_closure_mask(pairs, x | y)] for y in closed] for x in closed],
                    dtype=np.intp).reshape(k, k)
    labels = [frozenset(B.universe[j] for j in _bits(c)) for c in closed]
    return Lattice(labels, leq, meet, join)
