import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from birkhoff_completion import (
    EmbeddingError,
    FormalContext,
    Implication,
    NotDistributiveError,
    SetFamilyLattice,
    bc_context,
    bc_context_downset,
    birkhoff_completion_context,
    birkhoff_completion_context_downset,
    birkhoff_down,
    birkhoff_up,
    canonical_direct_basis,
    concept_lattice,
    dual,
    eta,
    factor_embedding,
    fig6_check,
    holds,
    iota,
    is_distributive_law,
    is_isomorphic,
    make_poset,
    meet_irreducibles,
    meet_irreducible_attributes,
    reduce,
    standard_context,
    validate_join_embedding,
    verify_commutation,
    verify_duality,
)
from birkhoff_completion.generate import all_lattices, random_context, random_lattice

from conftest import BISL, CI, FIG8, GB, IRIS, UK, chain, contexts, lattices


def boolean_lattice(labels) -> SetFamilyLattice:
    """(P(labels), ⊇)."""
    base = make_poset(labels)
    members = [frozenset(s) for r in range(len(labels) + 1) for s in itertools.combinations(labels, r)]
    return SetFamilyLattice(base, members, "superset")


# -- lattice level -----------------------------------------------------------------


def test_m3_completions_are_b3(m3, b3):
    for rep in (birkhoff_up(m3), birkhoff_down(m3)):
        assert len(rep.completed) == 8
        assert is_isomorphic(rep.completed, b3) is not None


def test_n5_completions(n5):
    up, down = birkhoff_up(n5).completed, birkhoff_down(n5).completed
    assert len(up) == len(down) == 6
    assert is_isomorphic(up, down) is not None


def test_fig4_completions(fig4, fig4dual, b3):
    assert len(birkhoff_up(fig4).completed) == 9
    down = birkhoff_down(fig4).completed
    assert len(down) == 8 and is_isomorphic(down, b3) is not None
    assert len(birkhoff_up(fig4dual).completed) == 8
    assert len(birkhoff_down(fig4dual).completed) == 9


def test_up_completion_elements_are_filters_of_meet_irreducibles(fig4):
    rep = birkhoff_up(fig4)
    M = set(meet_irreducibles(fig4))
    P = fig4.subposet(M)
    for A in rep.completed.labels:
        assert A <= M and P.is_up_set(A)
    assert rep.embedding["j1"] == {"j1", "m1"}
    assert rep.embedding["top"] == frozenset()


def test_distributive_lattices_are_their_own_completions(b3):
    for L in [b3, chain(4)]:
        assert is_isomorphic(L, birkhoff_up(L).completed) is not None
        assert is_isomorphic(L, birkhoff_down(L).completed) is not None


def test_self_dual_lattices_have_isomorphic_completions(m3, n5):
    for L in (m3, n5):
        assert is_isomorphic(L, dual(L)) is not None
        assert is_isomorphic(birkhoff_up(L).completed, birkhoff_down(L).completed) is not None


def _check_join_embedding(L):
    rep = birkhoff_up(L)
    BC = rep.completed
    assert is_distributive_law(BC)
    io = rep.embedding
    assert len(set(io.values())) == len(L)
    for x, y in itertools.product(L.labels, repeat=2):
        assert io[L.join(x, y)] == io[x] & io[y] == BC.join(io[x], io[y])


@pytest.mark.parametrize("n", range(1, 8))
def test_completion_is_distributive_join_embedding_exhaustive(n):
    for L in all_lattices(n):
        _check_join_embedding(L)


@settings(max_examples=60, deadline=None)
@given(lattices())
def test_completion_is_distributive_join_embedding_random(L):
    _check_join_embedding(L)


@pytest.mark.parametrize("n", range(1, 8))
def test_distributive_iff_own_completion_exhaustive(n):
    for L in all_lattices(n):
        d = is_distributive_law(L)
        assert d == (is_isomorphic(L, birkhoff_up(L).completed) is not None)
        assert d == (is_isomorphic(L, birkhoff_down(L).completed) is not None)


# -- eta ------------------------------------------------------------------------------


def test_eta_on_b3(b3):
    e = eta(b3)
    assert len(set(e.values())) == 8
    assert e["0"] == {"ab", "ac", "bc"}
    assert e["abc"] == frozenset()


@pytest.mark.parametrize("n", range(1, 6))
def test_eta_on_chain(n):
    L = chain(n)
    e = eta(L)
    assert sorted(len(v) for v in e.values()) == list(range(n))


def test_eta_rejects_m3_with_witness(m3):
    with pytest.raises(NotDistributiveError) as exc:
        eta(m3)
    assert exc.value.witness.kind == "M3"


# -- factor_embedding -------------------------------------------------------------------


def test_factor_through_the_completion_is_identity(fig4):
    rep = birkhoff_up(fig4)
    eps = factor_embedding(fig4, rep.completed, rep.embedding)
    assert all(eps[A] == A for A in rep.completed.labels)


def test_factor_m3_into_b3_is_the_isomorphism(m3, b3):
    rep = birkhoff_up(m3)
    iso = is_isomorphic(rep.completed, b3)
    phi = {x: iso[rep.embedding[x]] for x in m3.labels}
    eps = factor_embedding(m3, b3, phi)
    assert eps == iso


def test_factor_n5_into_b3_for_every_valid_phi(n5, b3):
    found = 0
    for images in itertools.product(b3.labels, repeat=len(n5)):
        phi = dict(zip(n5.labels, images))
        try:
            validate_join_embedding(n5, b3, phi)
        except EmbeddingError:
            continue
        found += 1
        eps = factor_embedding(n5, b3, phi)
        io = iota(n5)
        assert all(eps[io[x]] == phi[x] for x in n5.labels)
        validate_join_embedding(birkhoff_up(n5).completed, b3, eps)
    assert found > 0


def test_factor_rejects_non_embedding(m3, b3):
    phi = {x: "0" for x in m3.labels}
    with pytest.raises(EmbeddingError) as exc:
        factor_embedding(m3, b3, phi)
    assert exc.value.pair is not None


def test_factor_rejects_non_distributive_target(m3):
    with pytest.raises(NotDistributiveError):
        factor_embedding(m3, m3, {x: x for x in m3.labels})


def test_factor_rejects_partial_map(m3, b3):
    with pytest.raises(EmbeddingError):
        factor_embedding(m3, b3, {"0": "0"})


@settings(max_examples=40, deadline=None)
@given(lattices(max_objects=5, max_attributes=4))
def test_factor_through_boolean_lattice(L):
    M = meet_irreducibles(L)
    target = boolean_lattice(M)
    phi = iota(L)
    eps = factor_embedding(L, target, phi)
    io = iota(L)
    assert all(eps[io[x]] == phi[x] for x in L.labels)


# -- duality ---------------------------------------------------------------------------------


def test_duality_examples(n5, fig4, fig4dual, b3):
    assert verify_duality(n5)
    assert verify_duality(fig4) and verify_duality(fig4dual)
    assert verify_duality(b3)


@pytest.mark.parametrize("n", range(1, 8))
def test_duality_exhaustive(n):
    for L in all_lattices(n):
        assert verify_duality(L)


# -- context level ------------------------------------------------------------------------------


def test_bc_context_rows(uk):
    BK = bc_context(uk)
    assert len(BK.objects) == len(uk.objects) + 5
    # n is held iff n' is not inside UK' = {England, Scotland, Wales, Northern Ireland}
    assert BK.intent("~not:UK") == {"British Isles", IRIS, BISL, CI}


def test_uk_up_completion_report(uk):
    BK, rep = birkhoff_completion_context(uk)
    assert sorted(rep.generators) == sorted(f"~not:{m}" for m in meet_irreducible_attributes(uk))
    assert ("~not:British Islands", "Ireland (State)") in rep.coincidences
    assert len(rep.coincidences) == 1
    assert len(rep.new_concepts) == 4
    assert is_distributive_law(rep.completed)
    invalid = {(i.premise, i.conclusion) for i in rep.invalidated}
    assert {a for a, _ in invalid} == {frozenset(a) for a, _ in FIG8[3:]}


def test_uk_down_completion_report(uk):
    BK, rep = birkhoff_completion_context_downset(uk)
    assert len(rep.generators) == 7
    assert "~not:Isle of Man" not in rep.generators
    assert rep.coincidences == [("~not:Ireland (State)", "British Islands")]
    assert len(rep.new_concepts) == 3
    assert rep.invalidated == []
    for imp in canonical_direct_basis(reduce(uk, objects=False)):
        assert holds(imp, BK)
    assert is_distributive_law(rep.completed)


@settings(max_examples=60, deadline=None)
@given(contexts(max_objects=5, max_attributes=5))
def test_distributive_contexts_gain_nothing(K):
    L = concept_lattice(K).lattice
    if not is_distributive_law(L):
        return
    for build in (birkhoff_completion_context, birkhoff_completion_context_downset):
        _, rep = build(K)
        assert rep.new_concepts == []
        assert is_isomorphic(rep.completed, L) is not None


@settings(max_examples=100, deadline=None)
@given(contexts(max_objects=5, max_attributes=5))
def test_context_completions_match_lattice_completions(K):
    L = concept_lattice(K).lattice
    _, up = birkhoff_completion_context(K)
    _, down = birkhoff_completion_context_downset(K)
    assert is_isomorphic(up.completed, birkhoff_up(L).completed) is not None
    assert is_isomorphic(down.completed, birkhoff_down(L).completed) is not None
    for c, d in itertools.combinations(up.embedding, 2):
        joined = up.original.join(c, d)
        assert up.embedding[joined] == up.completed.join(up.embedding[c], up.embedding[d])


def test_downset_is_transpose_of_upset(uk):
    assert bc_context_downset(uk) == bc_context(uk.transpose()).transpose()


def test_generated_label_collision_rejected():
    K = FormalContext(["g", "~not:m"], ["m"], [[1], [0]])
    with pytest.raises(ValueError, match="collides"):
        bc_context(K)


def test_commutation_examples(uk, m3, b3):
    assert verify_commutation(uk)
    v = verify_commutation(standard_context(m3))
    assert v.ok and len(v.witness) == 8
    assert is_isomorphic(concept_lattice(bc_context(standard_context(m3))).lattice, b3) is not None
    assert verify_commutation(FormalContext(["g"], ["m"], [[0]]))


@settings(max_examples=100, deadline=None)
@given(contexts())
def test_commutation_random(K):
    assert verify_commutation(K)


@settings(max_examples=80, deadline=None)
@given(contexts(max_attributes=5))
def test_meet_irreducibles_are_attribute_concepts(K):
    cl = concept_lattice(K)
    M = meet_irreducible_attributes(K)
    mu = {m: cl.attribute_concept(m) for m in M}
    assert set(mu.values()) == set(meet_irreducibles(cl.lattice))
    for m, n in itertools.product(M, repeat=2):
        c_ext = K.extent(m) >= K.extent(n)
        assert cl.lattice.le(mu[n], mu[m]) == c_ext


# -- embeddings smaller than the completions ------------------------------------------------------


def test_fig6_bundled():
    r = fig6_check()
    assert r.extension_distributive
    assert r.inclusion_is_order_embedding
    assert (r.up_size, r.down_size, r.extension_size) == (17, 17, 16)
    assert r.passed


def test_fig6_check_detects_a_failing_pair(m3, n5):
    assert not fig6_check(m3, n5).passed


def test_random_pool_is_reproducible():
    a = [len(random_lattice(np.random.default_rng(5))) for _ in range(3)]
    b = [len(random_lattice(np.random.default_rng(5))) for _ in range(3)]
    assert a == b
    K = random_context(np.random.default_rng(1), 3, 4)
    assert K.shape == (3, 4)
