import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfamalgam.amalgam import make_try, stable_amalgam
from lfamalgam.errors import InvariantViolation
from lfamalgam.group import (
    Embedding,
    direct_product,
    enumerate_embeddings,
    generated_subgroup,
    identity_embedding,
    is_isomorphic,
    trivial_subgroup,
    whole,
)
from lfamalgam.io import corpus_group
from lfamalgam.nf3 import Nf3Request, build_commuting_transversals, d36_clauses, default_request, nf3_amalgam


def klein_request(H0_whole=False):
    Z2 = corpus_group("Z2")
    V, e_first, e_second = direct_product(Z2, Z2)
    L = generated_subgroup(V, [e_second.map[1]])
    H0 = whole(Z2) if H0_whole else None
    return Nf3Request(Z2, V, V, e_first, e_first, L, H0), V, e_second


def test_trivial_L_gives_default_try(G):
    Z2, Z4 = G("Z2"), G("Z4")
    e = Embedding(Z2, Z4, (0, 2))
    req = Nf3Request(Z2, Z4, Z4, e, e, trivial_subgroup(Z4))
    x = build_commuting_transversals(req)
    y = make_try(Z2, Z4, Z4, e, e)
    assert (x.I1, x.I2) == (y.I1, y.I2)


def test_klein_try_is_closed_under_L():
    req, V, _ = klein_request()
    x = build_commuting_transversals(req)
    L = set(req.L.members)
    I1 = set(x.I1)
    assert L <= I1
    assert all(V.mul(g, b) in I1 for g in I1 for b in L)
    assert all(d36_clauses(req, x).values())


def test_L_meeting_base_is_rejected(G):
    Z2, Z4 = G("Z2"), G("Z4")
    e = Embedding(Z2, Z4, (0, 2))
    with pytest.raises(InvariantViolation, match="d39"):
        build_commuting_transversals(Nf3Request(Z2, Z4, Z4, e, e, generated_subgroup(Z4, [2])))


def test_klein_amalgam_keeps_L_commuting():
    req, V, e_second = klein_request()
    res = nf3_amalgam(req, cross_check=True)
    A = res.amalgam
    assert res.certified and res.cross_check
    G3 = A.G3
    l = A.j1.map[e_second.map[1]]
    assert all(G3.commute(l, A.j2.map[g]) for g in range(V.order))


def test_abelian_base_matches_plain_amalgam():
    req, V, _ = klein_request(H0_whole=True)
    res = nf3_amalgam(req)
    plain = stable_amalgam(req.G0, req.G1, req.G2, req.emb1, req.emb2)
    assert is_isomorphic(plain.G3, res.amalgam.G3)
    assert res.amalgam.G3.is_abelian


def test_degenerate_side_one(G):
    S3 = G("S3")
    Z2 = G("Z2")
    P, eS, _ = direct_product(S3, Z2)
    res = nf3_amalgam(Nf3Request(S3, S3, P, identity_embedding(S3), eS, trivial_subgroup(S3)))
    assert is_isomorphic(res.amalgam.G3, P)


def test_default_request_for_centreless_base(G):
    S3 = G("S3")
    e = identity_embedding(S3)
    req = default_request(S3, S3, S3, e, e)
    assert req.L.members == (0,)
    assert nf3_amalgam(req).amalgam.order == 6


SIDES = ["Z4", "Z2xZ2", "Z6", "D8", "Z2xZ4", "Q8"]


@given(st.sampled_from(SIDES), st.sampled_from(SIDES), st.data())
@settings(max_examples=25, deadline=None)
def test_L_commutes_with_H2_in_the_result(a, b, data):
    Z2, G1, G2 = corpus_group("Z2"), corpus_group(a), corpus_group(b)
    e1 = data.draw(st.sampled_from(enumerate_embeddings(Z2, G1)))
    e2 = data.draw(st.sampled_from(enumerate_embeddings(Z2, G2)))
    from lfamalgam.group import centralizer

    cm = centralizer(G1, e1.map)
    choices = [x for x in cm.members if x not in set(e1.map)]
    if not choices:
        return
    l = data.draw(st.sampled_from(choices))
    L = generated_subgroup(G1, [l])
    if set(L.members) & set(e1.map) != {0}:
        return
    req = Nf3Request(Z2, G1, G2, e1, e2, L)
    res = nf3_amalgam(req)
    A = res.amalgam
    p = A.perm(1, l)
    for h in req.H2.members:
        q = A.perm(2, h)
        assert np.array_equal(p[q], q[p])
