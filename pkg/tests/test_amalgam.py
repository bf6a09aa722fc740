import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfamalgam.amalgam import (
    Budget,
    TripleSpace,
    build_Gx,
    c6_log_bound,
    commuting_characterization,
    count_tries,
    enumerate_tries,
    j_action,
    make_try,
    stable_amalgam,
    try_family,
    verify_nf_laws,
    within_c6_bound,
)
from lfamalgam.errors import BudgetExceeded, ElementInBase, NotATransversal
from lfamalgam.group import Embedding, enumerate_embeddings, find_isomorphism, identity_embedding, is_isomorphic
from lfamalgam.io import corpus_group


def triv(H):
    return Embedding(corpus_group("Z1"), H, (0,))


def test_tries_over_trivial_base_are_forced(G):
    Z1, Z2, Z3 = G("Z1"), G("Z2"), G("Z3")
    x = make_try(Z1, Z2, Z3, triv(Z2), triv(Z3))
    assert x.I1 == (0, 1) and x.I2 == (0, 1, 2)
    assert count_tries(Z1, Z2, Z3, triv(Z2), triv(Z3)) == 1


def test_identical_groups_give_identity_transversals(G):
    S3 = G("S3")
    e = identity_embedding(S3)
    x = make_try(S3, S3, S3, e, e)
    assert x.I1 == (0,) and x.I2 == (0,)


def test_bad_transversal_is_rejected(G):
    Z2, Z4 = G("Z2"), G("Z4")
    e = Embedding(Z2, Z4, (0, 2))
    with pytest.raises(NotATransversal):
        make_try(Z2, Z4, Z4, e, e, I1=(0, 2), I2=(0, 1))


def test_j_action_on_trivial_base(G):
    Z1, Z2 = G("Z1"), G("Z2")
    x = make_try(Z1, Z2, Z2, triv(Z2), triv(Z2))
    assert j_action(x, 1, 1, (0, 0, 0)) == (0, 1, 0)
    for ell in (0, 1, 2):
        for u in TripleSpace(x).triples:
            assert j_action(x, ell, 0, u) == u


def test_action_agrees_with_direct_formula(G):
    Z2, Z4, D8 = G("Z2"), G("Z4"), G("D8")
    e1 = enumerate_embeddings(Z2, Z4)[0]
    e2 = enumerate_embeddings(Z2, D8)[0]
    for x in enumerate_tries(Z2, Z4, D8, e1, e2):
        U = TripleSpace(x)
        triples = U.triples
        for ell, H in ((1, Z4), (2, D8)):
            for g in range(H.order):
                p = U.action(ell, g)
                for i, u in enumerate(triples):
                    assert triples[p[i]] == j_action(x, ell, g, u)


def test_build_gx_small_cases(G):
    Z1, Z2 = G("Z1"), G("Z2")
    gx = build_Gx(make_try(Z1, Z1, Z1, triv(Z1), triv(Z1)))
    assert gx.carrier.order == 1
    gx = build_Gx(make_try(Z1, Z2, Z2, triv(Z2), triv(Z2)))
    assert gx.carrier.order == 4 and gx.carrier.is_abelian
    assert len(gx.space) == 4


def test_try_counts(G):
    Z2, Z4 = G("Z2"), G("Z4")
    e = Embedding(Z2, Z4, (0, 2))
    assert count_tries(Z2, Z4, Z4, e, e) == 4
    assert len(list(enumerate_tries(Z2, Z4, Z4, e, e))) == 4
    S3 = G("S3")
    # side 1 forced when G0 = G1
    assert count_tries(Z2, Z2, Z4, identity_embedding(Z2), e) == 2
    Z1 = G("Z1")
    assert count_tries(Z1, Z1, S3, triv(Z1), triv(S3)) == 1


def test_stable_amalgam_examples(G):
    Z1, Z2, Z3, Z4, Z6 = G("Z1"), G("Z2"), G("Z3"), G("Z4"), G("Z6")
    A = stable_amalgam(Z1, Z2, Z3, triv(Z2), triv(Z3))
    assert is_isomorphic(A.G3, Z6)
    e = Embedding(Z2, Z4, (0, 2))
    B = stable_amalgam(Z2, Z4, Z4, e, e)
    assert B.order == 8 and B.G3.is_abelian
    assert is_isomorphic(B.G3, G("Z2xZ4"))
    S3 = G("S3")
    f = enumerate_embeddings(Z2, S3)[0]
    C = stable_amalgam(Z2, Z2, S3, identity_embedding(Z2), f)
    assert is_isomorphic(C.G3, S3)


def test_trivial_base_gives_direct_product(G):
    Z1 = G("Z1")
    for a, b in [("Z2", "S3"), ("Z3", "Z2xZ2"), ("S3", "S3")]:
        A = stable_amalgam(Z1, G(a), G(b), triv(G(a)), triv(G(b)))
        assert A.order == G(a).order * G(b).order


def test_laws_on_a_handful(G):
    Z2, Z4, D8, Q8 = G("Z2"), G("Z4"), G("D8"), G("Q8")
    for H1, H2 in [(Z4, D8), (D8, Q8), (Q8, Z4)]:
        A = stable_amalgam(Z2, H1, H2, enumerate_embeddings(Z2, H1)[0], enumerate_embeddings(Z2, H2)[0])
        results = verify_nf_laws(A)
        assert len(results) == 5
        assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_commuting_examples(G):
    Z1, Z2, Z3 = G("Z1"), G("Z2"), G("Z3")
    A = stable_amalgam(Z1, Z2, Z3, triv(Z2), triv(Z3))
    v = commuting_characterization(A, 1, 2)
    assert v.commute and v.predicted
    S3 = G("S3")
    with pytest.raises(ElementInBase):
        commuting_characterization(A, 0, 1)
    # S3 base inside S3 x Z2 twice: the central involutions centralize S3 but S3 is not abelian
    from lfamalgam.group import direct_product

    P, eS, eZ = direct_product(S3, Z2)
    B = stable_amalgam(S3, P, P, eS, eS)
    z = eZ.map[1]
    v = commuting_characterization(B, z, z)
    assert not v.commute and not v.predicted
    assert "not commutative" in v.explanation


def test_non_normalizing_elements_do_not_commute(G):
    Z2, S3 = G("Z2"), G("S3")
    f = enumerate_embeddings(Z2, S3)[0]
    A = stable_amalgam(Z2, S3, S3, f, f)
    r = next(x for x in range(6) if S3.orders[x] == 3)
    v = commuting_characterization(A, r, r)
    assert not v.commute and not v.predicted
    assert "does not normalize" in v.explanation


def test_sampled_family_is_recorded(G):
    Z1, D8, Q8 = G("Z1"), G("D8"), G("Q8")
    fam, tries = try_family(Z1, D8, Q8, triv(D8), triv(Q8))
    assert fam == "full" and len(tries) == 1
    Z2 = G("Z2")
    b = Budget(max_tries=1, side_sample=2)
    e1, e2 = enumerate_embeddings(Z2, D8)[0], enumerate_embeddings(Z2, Q8)[0]
    fam, tries = try_family(Z2, D8, Q8, e1, e2, b)
    assert fam == "sampled" and len(tries) == 4


def test_budget_is_enforced(G):
    Z1, D8, Q8 = G("Z1"), G("D8"), G("Q8")
    with pytest.raises(BudgetExceeded) as info:
        build_Gx(make_try(Z1, D8, Q8, triv(D8), triv(Q8)), Budget(triples=10))
    assert info.value.report["triples"] == 64


def test_c6_bound_is_overflow_safe():
    assert c6_log_bound(1, 1, 1) == float("-inf")
    assert within_c6_bound(1, 1, 1, 1)
    assert not within_c6_bound(2, 1, 1, 1)
    assert within_c6_bound(10**300, 8, 8, 1)
    # the bound itself is far beyond the float range
    assert c6_log_bound(8, 8, 1) > math.log(math.log(1e308))


SIDES = ["Z2", "Z3", "Z4", "Z2xZ2", "S3", "Z6"]


@given(st.sampled_from(SIDES), st.sampled_from(SIDES))
@settings(max_examples=25, deadline=None)
def test_amalgam_over_trivial_base_is_symmetric(a, b):
    Z1, A1, A2 = corpus_group("Z1"), corpus_group(a), corpus_group(b)
    X = stable_amalgam(Z1, A1, A2, triv(A1), triv(A2))
    Y = stable_amalgam(Z1, A2, A1, triv(A2), triv(A1))
    assert find_isomorphism(X.G3, Y.G3) is not None
    assert len(set(X.j1.map) & set(X.j2.map)) == 1


@given(st.sampled_from(["Z4", "Z2xZ2", "S3", "Z6", "D8", "Q8", "Z8"]),
       st.sampled_from(["Z4", "Z2xZ2", "S3", "Z6", "D8", "Q8", "Z8"]), st.data())
@settings(max_examples=25, deadline=None)
def test_embeddings_are_injective_homs_meeting_in_base(a, b, data):
    Z2, A1, A2 = corpus_group("Z2"), corpus_group(a), corpus_group(b)
    e1 = data.draw(st.sampled_from(enumerate_embeddings(Z2, A1)))
    e2 = data.draw(st.sampled_from(enumerate_embeddings(Z2, A2)))
    A = stable_amalgam(Z2, A1, A2, e1, e2)
    assert np.array_equal(A.perm(1, e1.map[1]), A.perm(2, e2.map[1]))
    if not A.is_tabled:
        assert A.order > Budget().max_order
        return
    G3 = A.G3
    for j, H in ((A.j1, A1), (A.j2, A2)):
        assert len(set(j.map)) == H.order
        x, y = data.draw(st.integers(0, H.order - 1)), data.draw(st.integers(0, H.order - 1))
        assert j.map[H.mul(x, y)] == G3.mul(j.map[x], j.map[y])
    assert set(A.j1.map) & set(A.j2.map) == set(A.j0.map)
