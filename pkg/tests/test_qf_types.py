import random

from hypothesis import given, settings, strategies as st

from lfamalgam.group import GroupTerm, generated_subgroup, random_relabel, reduced_words, eval_term, whole, trivial_subgroup
from lfamalgam.io import CORPUS_NAMES, corpus_group
from lfamalgam.qf_types import SplitWitness, check_extension_definable, does_not_split, tp_bs, types_equal
from lfamalgam.schemes import apply_ab, apply_cg, scheme_ab

ALL = [corpus_group(n) for n in CORPUS_NAMES]


def test_empty_tuple_type_is_type_of_base(G):
    S3 = G("S3")
    r = next(x for x in range(6) if S3.orders[x] == 3)
    p = tp_bs(S3, (), (0, r, S3.mul(r, r)))
    q = tp_bs(S3, (), (0, r, S3.mul(r, r)))
    assert types_equal(p, q)
    assert p.order == 3


def test_transpositions_share_a_type(G):
    S3 = G("S3")
    ts = [x for x in range(6) if S3.orders[x] == 2]
    assert types_equal(tp_bs(S3, (ts[0],)), tp_bs(S3, (ts[1],)))
    r = next(x for x in range(6) if S3.orders[x] == 3)
    assert not types_equal(tp_bs(S3, (ts[0],)), tp_bs(S3, (r,)))


def test_type_sees_parameters(G):
    Z4 = G("Z4")
    # 1 and 3 are conjugate under an automorphism but differ over the parameter 1
    assert tp_bs(Z4, (1,)) == tp_bs(Z4, (3,))
    assert tp_bs(Z4, (1,), (1,)) != tp_bs(Z4, (3,), (1,))


def test_split_over_whole_group_never_happens(G):
    S3 = G("S3")
    for a in range(6):
        assert does_not_split(S3, (a,), whole(S3), whole(S3), 2) is True


def test_klein_split_witness(G):
    V = G("Z2xZ2")
    u = 1
    res = does_not_split(V, (u,), whole(V), trivial_subgroup(V), 1)
    assert isinstance(res, SplitWitness)
    assert not res
    assert res.m == 1
    assert res.b1 != res.b2
    assert set(res.b1) | set(res.b2) <= {1, 2, 3}


def test_cg_type_does_not_split_over_s3(G):
    S3 = G("S3")
    H, a, j0 = apply_cg(S3)
    sub = generated_subgroup(H, j0.map)
    assert does_not_split(H, (a,), sub, trivial_subgroup(H), 2) is True


def test_central_involution_is_definable(G):
    S3 = G("S3")
    H, c, j0 = apply_ab(S3, G("Z2"))
    assert H.order == 12
    assert check_extension_definable(j0, [scheme_ab(2)], 1).verdict


def test_z4_in_z8_is_not_definable_by_central_adjunction(G):
    from lfamalgam.group import enumerate_embeddings

    emb = enumerate_embeddings(G("Z4"), G("Z8"))[0]
    rep = check_extension_definable(emb, [scheme_ab(2), scheme_ab(4), scheme_ab(8)], 1)
    assert not rep.verdict
    assert rep.undefinable


def test_trivial_extension_is_definable(G):
    from lfamalgam.group import identity_embedding

    assert check_extension_definable(identity_embedding(G("S3")), [scheme_ab(2)], 1).verdict


@given(st.sampled_from(ALL), st.data())
@settings(max_examples=50, deadline=None)
def test_types_are_invariant_under_relabelling(H, data):
    K, f = random_relabel(H, random.Random(data.draw(st.integers(0, 10**6))))
    x = data.draw(st.integers(0, H.order - 1))
    y = data.draw(st.integers(0, H.order - 1))
    assert tp_bs(H, (x,), (y,)) == tp_bs(K, (f.map[x],), (f.map[y],))


@given(st.sampled_from(ALL), st.data())
@settings(max_examples=50, deadline=None)
def test_equal_types_agree_on_every_short_term(H, data):
    x = data.draw(st.integers(0, H.order - 1))
    y = data.draw(st.integers(0, H.order - 1))
    b = data.draw(st.integers(0, H.order - 1))
    same = tp_bs(H, (x,), (b,)) == tp_bs(H, (y,), (b,))
    agree = all((eval_term(H, w, (x, b)) == 0) == (eval_term(H, w, (y, b)) == 0) for w in reduced_words(2, 4))
    if same:
        assert agree


@given(st.sampled_from(ALL), st.data())
@settings(max_examples=40, deadline=None)
def test_restriction_forgets_parameters(H, data):
    x = data.draw(st.integers(0, H.order - 1))
    full = tp_bs(H, (x,), tuple(range(H.order)))
    assert full.restrict(base_positions=()) == tp_bs(H, (x,))


def test_holds_matches_evaluation(G):
    S3 = G("S3")
    t = next(x for x in range(6) if S3.orders[x] == 2)
    q = tp_bs(S3, (t,))
    assert q.holds(GroupTerm.parse("x0 x0", 1))
    assert not q.holds(GroupTerm.parse("x0", 1))
