import numpy as np
import pytest

from bncut import Cpt, NodeDef, build_network, is_singly_connected, undirected_neighbors
from bncut.errors import (
    CptRowNotNormalized,
    CptShapeMismatch,
    CycleDetected,
    DanglingArc,
    DuplicateName,
    InvalidNetwork,
    UnknownNode,
)
from bncut.fixtures import walkthrough_network, random_network, random_polytree
from bncut.network import EvidenceSet
from bncut.oracle import enumerate_loops

TF = ("t", "f")


def two_nodes(arcs=(("A", "B"),), b_table=((0.9, 0.1), (0.2, 0.8)), b_parents=("A",)):
    return build_network(
        [NodeDef("A", TF), NodeDef("B", TF)],
        list(arcs),
        [Cpt("A", (), [[0.3, 0.7]]), Cpt("B", b_parents, b_table)],
    )


def test_minimal_network():
    net = two_nodes()
    assert len(net) == 2
    assert net.arcs == ((0, 1),)
    assert net.parents == ((), (0,))
    assert net.cpt("B").table.shape == (2, 2)


def test_two_cycle_is_rejected():
    with pytest.raises(CycleDetected) as info:
        build_network(
            [NodeDef("A", TF), NodeDef("B", TF)],
            [("A", "B"), ("B", "A")],
            [Cpt("A", ("B",), [[0.5, 0.5]] * 2), Cpt("B", ("A",), [[0.5, 0.5]] * 2)],
        )
    assert set(info.value.cycle) == {"A", "B"}


def test_self_arc_is_a_cycle():
    with pytest.raises(CycleDetected):
        two_nodes(arcs=[("A", "B"), ("B", "B")])


def test_diamond_parent_order(diamond):
    d = diamond.node_id("D")
    assert [diamond.names[p] for p in diamond.parents[d]] == ["B", "C"]
    assert diamond.tables[d].shape == (2, 2, 2)


def test_cpt_shape_mismatch():
    with pytest.raises(CptShapeMismatch):
        two_nodes(b_table=[[0.9, 0.1]])


def test_cpt_parents_must_match_arcs():
    with pytest.raises(CptShapeMismatch):
        two_nodes(b_parents=(), b_table=[[0.5, 0.5]])


def test_row_not_normalized_names_node_and_row():
    with pytest.raises(CptRowNotNormalized) as info:
        two_nodes(b_table=[[0.9, 0.1], [0.2, 0.7]])
    assert info.value.node == "B" and info.value.row == 1


def test_row_tolerance_is_1e9():
    two_nodes(b_table=[[0.9, 0.1 + 5e-10], [0.2, 0.8]])
    with pytest.raises(CptRowNotNormalized):
        two_nodes(b_table=[[0.9, 0.1 + 5e-9], [0.2, 0.8]])


def test_negative_entry_rejected():
    with pytest.raises(CptRowNotNormalized):
        two_nodes(b_table=[[1.1, -0.1], [0.2, 0.8]])


def test_duplicate_name():
    with pytest.raises(DuplicateName):
        build_network([NodeDef("A", TF), NodeDef("A", TF)], [], [])


def test_dangling_arc():
    with pytest.raises(DanglingArc):
        two_nodes(arcs=[("A", "B"), ("A", "Z")])


def test_duplicate_arc():
    with pytest.raises(InvalidNetwork):
        two_nodes(arcs=[("A", "B"), ("A", "B")])


def test_missing_cpt():
    with pytest.raises(CptShapeMismatch):
        build_network([NodeDef("A", TF)], [], [])


def test_network_is_read_only():
    net = two_nodes()
    with pytest.raises(ValueError):
        net.tables[1][0, 0] = 0.5


def test_neighbors(diamond):
    ids = diamond.node_id
    assert undirected_neighbors(diamond, "D") == {ids("B"), ids("C")}
    assert undirected_neighbors(diamond, "A") == {ids("B"), ids("C"), ids("E")}
    lone = build_network([NodeDef("A", TF)], [], [Cpt("A", (), [[0.5, 0.5]])])
    assert undirected_neighbors(lone, "A") == set()
    with pytest.raises(UnknownNode):
        undirected_neighbors(lone, "Q")


def test_neighbors_of_plain_diamond():
    from bncut.fixtures import diamond_network

    net = diamond_network(with_evidence_parent=False)
    assert undirected_neighbors(net, "A") == {1, 2}
    assert undirected_neighbors(net, "D") == {1, 2}


def test_singly_connected(chain, diamond, walkthrough):
    assert is_singly_connected(chain)
    assert not is_singly_connected(diamond)
    assert not is_singly_connected(walkthrough)


@pytest.mark.parametrize("seed", range(40))
def test_singly_connected_agrees_with_loop_enumeration(seed):
    rng = np.random.default_rng(seed)
    net = random_network(rng, int(rng.integers(2, 11)), arc_probability=rng.uniform(0.05, 0.5))
    assert is_singly_connected(net) == (enumerate_loops(net) == [])
    for x in range(len(net)):
        for y in undirected_neighbors(net, x):
            assert x in undirected_neighbors(net, y)


@pytest.mark.parametrize("seed", range(10))
def test_random_network_invariants(seed):
    rng = np.random.default_rng(seed)
    net = random_polytree(rng, 9)
    for x in range(len(net)):
        rows = net.cpt(x).table
        assert rows.shape[0] == int(np.prod([net.cardinalities[p] for p in net.parents[x]]))
        assert np.allclose(rows.sum(axis=1), 1.0, atol=1e-9)
    order = net.topological_order()
    pos = {x: k for k, x in enumerate(order)}
    assert all(pos[u] < pos[x] for u, x in net.arcs)


def test_evidence_set_validation(chain):
    ev = EvidenceSet.from_labels(chain, {"B": "t"})
    assert dict(ev.findings) == {1: 0}
    with pytest.raises(UnknownNode):
        EvidenceSet.from_labels(chain, {"B": "maybe"})
    with pytest.raises(UnknownNode):
        EvidenceSet({1: 5}).validate(chain)


def test_walkthrough_shape():
    net = walkthrough_network()
    assert len(net) == 10 and len(net.arcs) == 11
