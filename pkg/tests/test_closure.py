import pytest
from hypothesis import given, settings, strategies as st

from lfamalgam.amalgam import Budget
from lfamalgam.closure import (
    ChainProbe,
    StageChain,
    certify_ec,
    chain_limit_probe,
    cross_embeddings,
    extension_pairs,
    hall_chain,
    hall_step,
    one_step_closure,
    z2_diagonal_chain,
)
from lfamalgam.errors import BudgetExceeded, ProbeInvalid
from lfamalgam.group import enumerate_embeddings, is_isomorphic
from lfamalgam.io import corpus_group
from lfamalgam.schemes import apply_cg, get_scheme


@pytest.fixture(scope="module")
def hall3():
    return hall_chain(corpus_group("Z1"), 3, 4)


def test_pairs_up_to_bound():
    labels = [p.label for p in extension_pairs(4)]
    assert labels == ["Z2>0", "Z3>0", "Z4>0", "Z4>0.2", "Z2xZ2>0", "Z2xZ2>0.1"]
    assert [p.label for p in extension_pairs(1)] == []


def test_hall_step_adds_an_involution(G):
    res = hall_step(G("Z1"), 2)
    assert any(res.H.orders[x] == 2 for x in range(res.H.order))


def test_hall_step_extends_z2_into_z4(G):
    Z2, Z4 = G("Z2"), G("Z4")
    res = hall_step(Z2, 4)
    f = res.emb.map
    assert any(phi.map[2] == f[1] for phi in enumerate_embeddings(Z4, res.H))
    assert res.log.check(res.H, res.emb.map, res.adjoined)


def test_hall_step_with_bound_one_is_identity(G):
    S3 = G("S3")
    res = hall_step(S3, 1)
    assert res.H is S3 and res.repaired == []


def test_hall_step_reports_where_it_stopped(G):
    with pytest.raises(BudgetExceeded) as info:
        hall_step(G("S3"), 4, Budget(max_order=50))
    rep = info.value.report
    assert "log" in rep and "pending" in rep


def test_certify_single_stage(G):
    chain = StageChain.start(G("Z2"))
    rep = certify_ec(chain, 4)
    assert not rep.verdict
    assert any(e.pair == "Z4>0.2" for e in rep.failures)
    assert certify_ec(chain, 1).verdict


def test_hall_chain_certifies(hall3):
    rep = certify_ec(hall3, 4)
    assert rep.verdict
    assert hall3.links_compose()


def test_margin_excludes_final_stages(G):
    chain = StageChain.start(G("Z1"))
    res = hall_step(G("Z1"), 4)
    chain.append(res.H, res.emb, "hall", (4,))
    assert not certify_ec(chain, 4).verdict
    assert certify_ec(chain, 4, margin=1).verdict


def test_chain_save_load_replay(hall3, tmp_path):
    hall3.save(tmp_path / "chain")
    assert (tmp_path / "chain" / "manifest.txt").read_text().startswith("0 start Z1\n")
    back = StageChain.load(tmp_path / "chain")
    assert [S.order for S in back.stages] == [S.order for S in hall3.stages]
    assert [l.map for l in back.links] == [l.map for l in hall3.links]
    assert back.provenance == hall3.provenance
    assert back.replay_matches()


def test_one_step_closure_small_cases(G):
    Z1, Z2, Z3 = G("Z1"), G("Z2"), G("Z3")
    r = one_step_closure(Z1, [get_scheme("ab2")])
    assert r.H.order == 2
    # gl needs an involution, which Z3 lacks
    r = one_step_closure(Z3, [get_scheme("gl")])
    assert r.H is Z3 and r.entries == []
    r = one_step_closure(Z2, [get_scheme("cg")])
    assert is_isomorphic(r.H, apply_cg(Z2)[0])
    assert all(ok for _, ok in r.realizes)


def test_one_step_closure_realizes_every_entry(G):
    r = one_step_closure(G("Z2"), [get_scheme(s) for s in ("cg", "ab2", "ab3")])
    assert len(r.entries) == 3
    assert all(ok for _, ok in r.realizes)
    # the two central elements stay independent of each other, but neither
    # commutes with the cg element, so cg and ab types do not survive over
    # each other's tuples
    assert {(i, j): ok for i, j, ok in r.pairwise} == {
        (0, 1): True, (0, 2): False, (1, 0): False, (1, 2): True, (2, 0): False, (2, 1): True,
    }


def test_cross_embeddings_of_hall_chain_into_itself(hall3):
    hits = cross_embeddings(hall3, hall3)
    assert [i for i, _ in hits] == list(range(len(hall3)))
    assert all(j is not None and j <= i for i, j in hits)
    # the last two stages have equal order, so stage 3 already fits in stage 2
    assert hits[3] == (3, 2)


def test_z2_chain_probe_passes():
    chain, probe = z2_diagonal_chain(6)
    rep = chain_limit_probe(chain, probe, 6)
    assert rep.passed
    assert [(n, m) for n, m, _ in rep.checked] == [(0, 1), (1, 2), (2, 3), (3, 4)]


def test_probe_rejects_old_elements():
    chain, probe = z2_diagonal_chain(4)
    old = chain.links[1].map[chain.links[0].map[0]]
    with pytest.raises(ProbeInvalid):
        chain_limit_probe(chain, ChainProbe([probe.a[0], old, probe.a[2]], 2), 4)


def test_single_stage_probe_is_vacuous(G):
    rep = chain_limit_probe(StageChain.start(G("S3")), ChainProbe([], 2), 6)
    assert rep.passed and rep.checked == []


@given(st.integers(2, 7), st.integers(0, 6))
@settings(max_examples=20, deadline=None)
def test_z2_chain_has_expected_orders(length, budget):
    chain, probe = z2_diagonal_chain(length)
    assert [S.order for S in chain.stages] == [2 ** k for k in range(length)]
    assert chain_limit_probe(chain, probe, budget).passed


@given(st.sampled_from(["Z1", "Z2", "Z3", "Z2xZ2"]))
@settings(max_examples=8, deadline=None)
def test_hall_step_repairs_everything_it_visits(name):
    G = corpus_group(name)
    res = hall_step(G, 3)
    H = res.H
    for pair in extension_pairs(3):
        for f in enumerate_embeddings(pair.K, G):
            fH = tuple(res.emb.map[v] for v in f.map)
            assert any(tuple(phi.map[v] for v in pair.inc.map) == fH for phi in enumerate_embeddings(pair.L, H))
