"""Shared fixtures and brute-force oracles.

The oracles below deliberately avoid the package's algorithms: they work on
plain Python sets and enumerate subsets directly from the definitions.
"""
from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from birkhoff_completion import FormalContext, Lattice, make_poset, as_lattice
from birkhoff_completion.datasets import load

UK_OBJECTS = [
    "England", "Scotland", "Wales", "Northern Ireland",
    "Ireland (State)", "Isle of Man", "Jersey", "Guernsey",
]
BIS, IRIS, GB, BISL, UK, CI = (
    "British Isles", "Ireland (Island)", "GB", "British Islands", "UK", "Channel Islands",
)

# Published UK basis, as printed: premise -> conclusion (the printed conclusion is A'' minus A)
FIG8 = [
    ({UK}, {BISL}),
    ({GB}, {UK, BISL}),
    ({CI}, {BISL}),
    ({UK, CI}, {IRIS, BISL, GB}),
    ({GB, CI}, {IRIS, BISL, UK}),
    ({IRIS, CI}, {BISL, UK, GB}),
    ({IRIS, BISL}, {UK}),
    ({IRIS, GB}, {BISL, UK, CI}),
]


def powerset(xs):
    xs = list(xs)
    return itertools.chain.from_iterable(itertools.combinations(xs, r) for r in range(len(xs) + 1))


# -- lattice oracles -----------------------------------------------------------


def brute_join(L: Lattice, xs):
    ubs = [u for u in L.labels if all(L.le(x, u) for x in xs)]
    return next(u for u in ubs if all(L.le(u, v) for v in ubs))


def brute_meet(L: Lattice, xs):
    lbs = [u for u in L.labels if all(L.le(u, x) for x in xs)]
    return next(u for u in lbs if all(L.le(v, u) for v in lbs))


def brute_join_irreducibles(L: Lattice) -> set:
    """x with x ≠ ⋁X for every X ⊆ L∖{x} (X = ∅ gives bottom)."""
    out = set()
    for x in L.labels:
        below = [y for y in L.labels if y != x and L.le(y, x)]
        if all(brute_join(L, X) != x for X in powerset(below)):
            out.add(x)
    return out


def brute_meet_irreducibles(L: Lattice) -> set:
    out = set()
    for x in L.labels:
        above = [y for y in L.labels if y != x and L.le(x, y)]
        if all(brute_meet(L, X) != x for X in powerset(above)):
            out.add(x)
    return out


def brute_distributive(L: Lattice) -> bool:
    return all(
        L.meet(x, L.join(y, z)) == L.join(L.meet(x, y), L.meet(x, z))
        for x, y, z in itertools.product(L.labels, repeat=3)
    )


def brute_down_sets(labels, le) -> list[frozenset]:
    return [
        frozenset(S) for S in powerset(labels)
        if all(y in S for x in S for y in labels if le(y, x))
    ]


def brute_up_sets(labels, le) -> list[frozenset]:
    return [
        frozenset(S) for S in powerset(labels)
        if all(y in S for x in S for y in labels if le(x, y))
    ]


# -- context oracles -------------------------------------------------------------


def ctx_sets(K: FormalContext):
    """Incidence as {object: set of attributes}."""
    return {g: {m for j, m in enumerate(K.attributes) if K.incidence[i, j]} for i, g in enumerate(K.objects)}


def brute_prime_objects(K, A) -> frozenset:
    rows = ctx_sets(K)
    return frozenset(m for m in K.attributes if all(m in rows[g] for g in A))


def brute_prime_attributes(K, B) -> frozenset:
    rows = ctx_sets(K)
    return frozenset(g for g in K.objects if set(B) <= rows[g])


def brute_closure(K, B) -> frozenset:
    return brute_prime_objects(K, brute_prime_attributes(K, B))


def brute_concepts(K) -> set:
    out = set()
    for A in powerset(K.objects):
        B = brute_prime_objects(K, A)
        out.add((brute_prime_attributes(K, B), B))
    return out


def brute_proper_premises(K) -> dict:
    """{A: A•} for every A with non-empty A• = A'' ∖ (A ∪ ⋃_{n∈A} (A∖{n})'')."""
    out = {}
    for A in map(frozenset, powerset(K.attributes)):
        rest = set(brute_closure(K, A)) - A
        for n in A:
            rest -= brute_closure(K, A - {n})
        if rest:
            out[A] = frozenset(rest)
    return out


# -- strategies -------------------------------------------------------------------


@st.composite
def contexts(draw, max_objects=6, max_attributes=6):
    g = draw(st.integers(0, max_objects))
    m = draw(st.integers(0, max_attributes))
    cells = draw(st.lists(st.booleans(), min_size=g * m, max_size=g * m))
    return FormalContext([f"g{i}" for i in range(g)], [f"m{j}" for j in range(m)],
                         np.array(cells, dtype=bool).reshape(g, m))


@st.composite
def posets(draw, max_size=7):
    n = draw(st.integers(0, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    return make_poset(range(n), pairs)


@st.composite
def lattices(draw, max_objects=6, max_attributes=5):
    from birkhoff_completion import concept_lattice

    K = draw(contexts(max_objects, max_attributes))
    L = concept_lattice(K).lattice
    return Lattice(range(len(L)), L.leq, L.meet_table, L.join_table)


# -- fixtures -----------------------------------------------------------------------


@pytest.fixture(scope="session")
def uk():
    return load("uk").payload


@pytest.fixture(scope="session")
def m3():
    return load("m3").payload


@pytest.fixture(scope="session")
def n5():
    return load("n5").payload


@pytest.fixture(scope="session")
def b3():
    return load("b3").payload


@pytest.fixture(scope="session")
def fig4():
    return load("fig4").payload


@pytest.fixture(scope="session")
def fig4dual():
    return load("fig4dual").payload


def chain(n: int) -> Lattice:
    return as_lattice(make_poset(range(n), [(i, i + 1) for i in range(n - 1)]))


def antichain_poset(n: int):
    return make_poset(range(n))
