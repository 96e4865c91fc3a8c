"""Enumeration and random sampling of small lattices and contexts."""
from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from .context import FormalContext, concept_lattice
from .order import Lattice, Poset, as_lattice, is_isomorphic, NotALatticeError

__all__ = [
    "naturally_labelled_posets",
    "all_lattices",
    "random_context",
    "random_lattice",
    "clarified_contexts",
]


def naturally_labelled_posets(n: int) -> Iterator[np.ndarray]:
    """Order matrices on ``range(n)`` where ``i <= j`` implies ``i <= j`` as integers.

    Every poset appears (up to isomorphism) at least once.
    """
    def grow(leq: np.ndarray, k: int) -> Iterator[np.ndarray]:
        if k == n:
            yield leq
            return
        # the new element's strict down-set must be an order ideal of the first k elements
        for mask in range(1 << k):
            below = [i for i in range(k) if mask >> i & 1]
            if any(not (mask >> j & 1) for i in below for j in np.flatnonzero(leq[:k, i])):
                continue
            nxt = leq.copy()
            nxt[below, k] = True
            nxt[k, k] = True
            yield from grow(nxt, k + 1)

    yield from grow(np.zeros((n, n), dtype=bool), 0)


def _bounded(middle: np.ndarray) -> np.ndarray:
    m = middle.shape[0]
    leq = np.zeros((m + 2, m + 2), dtype=bool)
    leq[0, :] = True
    leq[:, m + 1] = True
    leq[1:m + 1, 1:m + 1] = middle
    return leq


def _invariant(L: Lattice) -> tuple:
    return (
        tuple(sorted(zip(L.leq.sum(axis=0).tolist(), L.n_lower_covers.tolist(), L.n_upper_covers.tolist()))),
    )


def all_lattices(n: int) -> list[Lattice]:
    """One representative of every isomorphism class of lattices with ``n`` elements."""
    if n < 1:
        return []
    if n == 1:
        return [as_lattice(Poset([0], np.ones((1, 1), dtype=bool)))]
    if n == 2:
        return [as_lattice(Poset([0, 1], np.array([[1, 1], [0, 1]], dtype=bool)))]
    found: dict[tuple, list[Lattice]] = {}
    for middle in naturally_labelled_posets(n - 2):
        leq = _bounded(middle)
        try:
            L = as_lattice(Poset(range(n), leq, check=False))
        except NotALatticeError:
            continue
        bucket = found.setdefault(_invariant(L), [])
        if not any(is_isomorphic(L, other) for other in bucket):
            bucket.append(L)
    return [L for bucket in found.values() for L in bucket]


def random_context(rng: np.random.Generator, n_objects: int, n_attributes: int,
                   density: float = 0.5) -> FormalContext:
    inc = rng.random((n_objects, n_attributes)) < density
    return FormalContext([f"g{i}" for i in range(n_objects)], [f"m{j}" for j in range(n_attributes)], inc)


def random_lattice(rng: np.random.Generator, max_size: int = 20) -> Lattice:
    """Concept lattice of a random small context, resampled until it has at most ``max_size`` elements.

    Labels are replaced by integers in the lattice's element order.
    """
    while True:
        g = int(rng.integers(1, 8))
        m = int(rng.integers(1, 7))
        K = random_context(rng, g, m, float(rng.uniform(0.2, 0.8)))
        L = concept_lattice(K).lattice
        if len(L) <= max_size:
            return Lattice(range(len(L)), L.leq, L.meet_table, L.join_table)


def clarified_contexts(max_objects: int, max_attributes: int) -> Iterator[FormalContext]:
    """Every clarified context up to the given size, one per set of rows.

    Rows are taken as a strictly increasing sequence of attribute bitsets, so
    contexts differing only by the order of objects are generated once.
    """
    for m in range(0, max_attributes + 1):
        for g in range(0, max_objects + 1):
            for rows in itertools.combinations(range(1 << m), g):
                inc = np.array([[r >> j & 1 for j in range(m)] for r in rows], dtype=bool).reshape(g, m)
                cols = [tuple(inc[:, j]) for j in range(m)]
                if len(set(cols)) != m:
                    continue
                yield FormalContext([f"g{i}" for i in range(g)], [f"m{j}" for j in range(m)], inc)
