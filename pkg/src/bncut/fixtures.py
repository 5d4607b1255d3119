"""Ready-made networks and random generators.

Two fixed networks are provided: the diamond (A -> B, A -> C, B -> D,
C -> D) and an eleven-arc network on which the cutset heuristic needs two
rounds. Their CPT numbers are arbitrary; only topology and cardinalities
carry meaning.
"""

from __future__ import annotations

import numpy as np

from .network import BeliefNetwork, Cpt, NodeDef, build_network

TF = ("t", "f")


def chain_network() -> BeliefNetwork:
    """A -> B with P(a) = 0.5, P(b|a) = 0.9, P(b|~a) = 0.2."""
    return build_network(
        [NodeDef("A", TF), NodeDef("B", TF)],
        [("A", "B")],
        [Cpt("A", (), [[0.5, 0.5]]), Cpt("B", ("A",), [[0.9, 0.1], [0.2, 0.8]])],
    )


# Strongly correlated B and C with D acting as an equality test, so that
# uncut propagation is visibly wrong.
DIAMOND_CPTS = {
    "E": [[0.4, 0.6]],
    "A": [[0.7, 0.3], [0.2, 0.8]],
    "B": [[0.9, 0.1], [0.15, 0.85]],
    "C": [[0.8, 0.2], [0.1, 0.9]],
    "D": [[0.95, 0.05], [0.1, 0.9], [0.2, 0.8], [0.85, 0.15]],
}


def diamond_network(with_evidence_parent: bool = True) -> BeliefNetwork:
    """The four-node diamond, optionally with an evidence parent E of A.

    Node ids: A=0, B=1, C=2, D=3 and, when present, E=4.
    """
    names = ["A", "B", "C", "D"] + (["E"] if with_evidence_parent else [])
    arcs = [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")]
    cpts = [
        Cpt("B", ("A",), DIAMOND_CPTS["B"]),
        Cpt("C", ("A",), DIAMOND_CPTS["C"]),
        Cpt("D", ("B", "C"), DIAMOND_CPTS["D"]),
    ]
    if with_evidence_parent:
        arcs.insert(0, ("E", "A"))
        cpts += [Cpt("E", (), DIAMOND_CPTS["E"]), Cpt("A", ("E",), DIAMOND_CPTS["A"])]
    else:
        cpts.append(Cpt("A", (), [[0.35, 0.65]]))
    return build_network([NodeDef(n, TF) for n in names], arcs, cpts)


WALKTHROUGH_ARCS = [
    ("A", "C"), ("B", "C"), ("C", "D"), ("E", "D"), ("E", "F"),
    ("D", "G"), ("F", "G"), ("G", "H"), ("G", "I"), ("H", "J"), ("I", "J"),
]
# E and G are the binary ones; D, F, H, I have three values each.
WALKTHROUGH_CARDINALITY = {"A": 2, "B": 2, "C": 2, "D": 3, "E": 2, "F": 3, "G": 2, "H": 3, "I": 3, "J": 2}


def walkthrough_network(seed: int = 4) -> BeliefNetwork:
    """Ten-node network A..J on which the greedy cutset search takes two rounds."""
    rng = np.random.default_rng(seed)
    names = list("ABCDEFGHIJ")
    defs = [NodeDef(n, tuple(f"{n.lower()}{k}" for k in range(WALKTHROUGH_CARDINALITY[n]))) for n in names]
    return _random_cpts(defs, WALKTHROUGH_ARCS, rng)


def _random_cpts(defs, arcs, rng, alpha: float = 1.0) -> BeliefNetwork:
    card = {d.name: d.cardinality for d in defs}
    parents = {d.name: [u for u, x in arcs if x == d.name] for d in defs}
    cpts = []
    for d in defs:
        rows = int(np.prod([card[p] for p in parents[d.name]], dtype=int))
        table = rng.dirichlet([alpha] * card[d.name], size=rows)
        # keep every entry comfortably away from 0 and renormalise exactly
        table = 0.02 + table
        table /= table.sum(axis=1, keepdims=True)
        cpts.append(Cpt(d.name, parents[d.name], table))
    return build_network(defs, arcs, cpts)


def random_network(
    rng: np.random.Generator,
    n_nodes: int,
    arc_probability: float = 0.3,
    max_parents: int = 3,
    cardinalities: tuple[int, int] = (2, 3),
    shuffle_ids: bool = True,
) -> BeliefNetwork:
    """A random DAG with Dirichlet CPTs.

    Arcs go from earlier to later nodes of a hidden order; node ids are a
    random permutation of that order when ``shuffle_ids`` is set, so ids are
    not necessarily topological.
    """
    order = list(range(n_nodes))
    arcs = []
    for j in range(1, n_nodes):
        cands = [i for i in range(j) if rng.random() < arc_probability]
        if len(cands) > max_parents:
            cands = sorted(rng.choice(cands, size=max_parents, replace=False).tolist())
        arcs += [(i, j) for i in cands]
    perm = rng.permutation(n_nodes) if shuffle_ids else np.arange(n_nodes)
    names = [f"X{k}" for k in range(n_nodes)]
    label = {order[k]: names[perm[k]] for k in range(n_nodes)}
    lo, hi = cardinalities
    card = {names[k]: int(rng.integers(lo, hi + 1)) for k in range(n_nodes)}
    defs = [NodeDef(nm, tuple(f"v{v}" for v in range(card[nm]))) for nm in names]
    return _random_cpts(defs, [(label[u], label[x]) for u, x in arcs], rng)


def random_polytree(
    rng: np.random.Generator, n_nodes: int, cardinalities: tuple[int, int] = (2, 4)
) -> BeliefNetwork:
    """A random singly-connected network (random tree skeleton, random arc directions)."""
    names = [f"X{k}" for k in range(n_nodes)]
    arcs = []
    for j in range(1, n_nodes):
        i = int(rng.integers(0, j))
        arcs.append((names[i], names[j]) if rng.random() < 0.5 else (names[j], names[i]))
    lo, hi = cardinalities
    defs = [NodeDef(nm, tuple(f"v{v}" for v in range(int(rng.integers(lo, hi + 1))))) for nm in names]
    return _random_cpts(defs, arcs, rng)


def random_evidence(rng: np.random.Generator, net: BeliefNetwork, max_findings: int = 3) -> dict[int, int]:
    k = int(rng.integers(0, max_findings + 1))
    nodes = rng.choice(len(net), size=min(k, len(net)), replace=False)
    return {int(x): int(rng.integers(net.cardinalities[x])) for x in sorted(nodes)}
