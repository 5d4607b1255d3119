import numpy as np
import pytest

from bncut import Cpt, NodeDef, build_network, find_loop_cutset, is_singly_connected, prune_singly_connected, select_candidate
from bncut.cutset import ReducedGraph, fewest_values_then_most_neighbors, format_trace
from bncut.errors import NoEligibleCandidate
from bncut.fixtures import diamond_network, random_network, random_polytree
from bncut.oracle import minimal_cutset_exhaustive, verify_cutset_condition

TF = ("t", "f")


def names(net, ids):
    return [net.names[i] for i in ids]


def test_prune_walkthrough(walkthrough):
    g = prune_singly_connected(ReducedGraph(walkthrough))
    assert names(walkthrough, g.removed) == ["A", "B", "C"]
    assert sorted(names(walkthrough, g.live_nodes)) == list("DEFGHIJ")
    assert all(g.neighbor_count(x) >= 2 for x in g.live_nodes)
    assert g.live_arcs == {a for a in walkthrough.arcs if a[0] in g.live_nodes and a[1] in g.live_nodes}


def test_prune_chain_empties(chain):
    assert len(prune_singly_connected(ReducedGraph(chain))) == 0


def test_prune_diamond_keeps_loop():
    net = diamond_network(with_evidence_parent=False)
    g = prune_singly_connected(ReducedGraph(net))
    assert g.removed == [] and len(g) == 4


def test_select_walkthrough_first_round(walkthrough):
    g = prune_singly_connected(ReducedGraph(walkthrough))
    assert walkthrough.names[select_candidate(g, walkthrough)] == "E"


def test_select_walkthrough_second_round(walkthrough):
    g = prune_singly_connected(ReducedGraph(walkthrough))
    g.remove(walkthrough.node_id("E"))
    prune_singly_connected(g)
    assert sorted(names(walkthrough, g.live_nodes)) == list("GHIJ")
    assert g.parent_count(walkthrough.node_id("G")) == 0
    assert walkthrough.names[select_candidate(g, walkthrough)] == "G"


def test_select_symmetric_pair():
    # two roots X0, X1 feeding the same two colliders: all candidates tie
    net = build_network(
        [NodeDef(n, TF) for n in ("X0", "X1", "Y0", "Y1")],
        [("X0", "Y0"), ("X1", "Y0"), ("X0", "Y1"), ("X1", "Y1")],
        [Cpt("X0", (), [[0.5, 0.5]]), Cpt("X1", (), [[0.5, 0.5]]),
         Cpt("Y0", ("X0", "X1"), [[0.5, 0.5]] * 4), Cpt("Y1", ("X0", "X1"), [[0.5, 0.5]] * 4)],
    )
    g = prune_singly_connected(ReducedGraph(net))
    assert select_candidate(g, net) == 0


def test_no_eligible_candidate():
    net = diamond_network(with_evidence_parent=False)
    g = ReducedGraph(net)
    # leave a single node that still has two live parents
    g.live_nodes = {3}
    g.live_parents[3] = {1, 2}
    with pytest.raises(NoEligibleCandidate):
        select_candidate(g, net)


def test_find_walkthrough(walkthrough):
    res = find_loop_cutset(walkthrough)
    assert names(walkthrough, res.members) == ["E", "G"]
    assert res.instantiation_count == 4
    assert names(walkthrough, res.trace[0].pruned) == ["A", "B", "C"]
    assert names(walkthrough, res.trace[1].pruned) == ["D", "F"]
    assert names(walkthrough, res.trace[2].pruned) == ["H", "I", "J"]
    assert verify_cutset_condition(walkthrough, res.members)
    assert format_trace(res, walkthrough)[-1] == "step 3: pruned H I J"


def test_find_diamond():
    net = diamond_network(with_evidence_parent=False)
    assert names(net, find_loop_cutset(net).members) == ["A"]


def test_alternative_score_prefers_values():
    # a 3-valued hub with many neighbours versus binary nodes with fewer
    res_default = find_loop_cutset(_hub_network())
    res_values = find_loop_cutset(_hub_network(), score=fewest_values_then_most_neighbors)
    net = _hub_network()
    assert names(net, res_default.members)[0] == "H"
    assert names(net, res_values.members)[0] != "H"


def _hub_network():
    # H (3 values, 4 children) -> P0..P3; P0, P1 -> Q; P1, P2, P3 -> R
    defs = [NodeDef("H", ("a", "b", "c"))] + [NodeDef(n, TF) for n in ("P0", "P1", "P2", "P3", "Q", "R")]
    arcs = [("H", "P0"), ("H", "P1"), ("H", "P2"), ("H", "P3"),
            ("P0", "Q"), ("P1", "Q"), ("P1", "R"), ("P2", "R"), ("P3", "R")]
    cpts = [Cpt("H", (), [[0.2, 0.3, 0.5]])]
    cpts += [Cpt(p, ("H",), [[0.5, 0.5]] * 3) for p in ("P0", "P1", "P2", "P3")]
    cpts += [Cpt("Q", ("P0", "P1"), [[0.5, 0.5]] * 4), Cpt("R", ("P1", "P2", "P3"), [[0.5, 0.5]] * 8)]
    return build_network(defs, arcs, cpts)


@pytest.mark.parametrize("seed", range(30))
def test_polytree_gives_empty_cutset(seed):
    net = random_polytree(np.random.default_rng(seed), 12)
    res = find_loop_cutset(net)
    assert res.members == [] and res.instantiation_count == 1


@pytest.mark.parametrize("seed", range(60))
def test_heuristic_properties(seed):
    rng = np.random.default_rng(1000 + seed)
    net = random_network(rng, int(rng.integers(4, 13)), arc_probability=rng.uniform(0.1, 0.5))
    try:
        res = find_loop_cutset(net)
    except NoEligibleCandidate:
        pytest.skip("no eligible candidate")
    assert verify_cutset_condition(net, res.members)
    assert res.instantiation_count == int(np.prod([net.cardinalities[m] for m in res.members]))
    assert len(res.members) <= len(net)
    for step in res.trace:
        if step.chosen is not None:
            chosen = [c for c in step.candidates if c.node == step.chosen][0]
            assert chosen.parents <= 1
    if is_singly_connected(net):
        assert res.members == []
    # deterministic
    again = find_loop_cutset(net)
    assert again.members == res.members and again.trace == res.trace


def test_quality_ratio_report(capsys):
    rng = np.random.default_rng(7)
    ratios = []
    for _ in range(60):
        net = random_network(rng, int(rng.integers(4, 11)), arc_probability=0.35)
        try:
            res = find_loop_cutset(net)
        except NoEligibleCandidate:
            continue
        best = minimal_cutset_exhaustive(net)
        opt = int(np.prod([net.cardinalities[m] for m in best]))
        assert res.instantiation_count >= opt
        ratios.append(res.instantiation_count / opt)
    with capsys.disabled():
        print(f"\nheuristic/optimal instantiation ratio: mean {np.mean(ratios):.3f}, max {max(ratios):.1f}, "
              f"optimal in {np.mean(np.array(ratios) == 1.0):.0%} of {len(ratios)} networks")
