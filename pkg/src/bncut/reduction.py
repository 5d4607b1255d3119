"""Vertex cover instances turned into loop-cutset instances.

Every edge ``(Vi, Vj)`` becomes two observed binary colliders ``vij`` and
``vij'``, each with parents ``Vi`` and ``Vj``.  That closes one loop
``Vi -> vij <- Vj -> vij' <- Vi`` per edge in which only ``Vi`` and ``Vj``
have at most one parent, so a set of vertex nodes is a valid cutset exactly
when it covers every edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .network import BeliefNetwork, Cpt, EvidenceSet, NodeDef, build_network
from .oracle import (
    _eligible_masks,
    enumerate_loops,
    is_vertex_cover,
    minimal_cutset_exhaustive,
    minimal_vertex_cover_exhaustive,
)

TF = ("T", "F")


@dataclass(frozen=True)
class UndirectedGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex")
        known = set(vertices)
        seen = set()
        edges = []
        for u, v in self.edges:
            if u not in known or v not in known:
                raise ValueError(f"edge {u} -- {v} uses an undeclared vertex")
            if u == v:
                raise ValueError(f"self-edge on {u}")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {u} -- {v}")
            seen.add(key)
            edges.append((u, v))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(edges))


def collider_names(u: str, v: str) -> tuple[str, str]:
    return f"{u}_{v}", f"{u}_{v}'"


def mvc_to_mlc(g: UndirectedGraph) -> tuple[BeliefNetwork, EvidenceSet]:
    """Gadget network and the evidence that observes every collider as T.

    Vertex nodes come first (in vertex order) so their ids equal their
    positions in ``g.vertices``. Vertex priors are (0.5, 0.5) and each
    collider has P(T | parents) = 0.5 throughout; only the structure matters.
    """
    defs = [NodeDef(v, TF) for v in g.vertices]
    arcs = []
    cpts = [Cpt(v, (), [[0.5, 0.5]]) for v in g.vertices]
    colliders = []
    for u, v in g.edges:
        for c in collider_names(u, v):
            defs.append(NodeDef(c, TF))
            arcs += [(u, c), (v, c)]
            cpts.append(Cpt(c, (u, v), [[0.5, 0.5]] * 4))
            colliders.append(c)
    net = build_network(defs, arcs, cpts)
    return net, EvidenceSet({net.node_id(c): 0 for c in colliders})


@dataclass
class ReductionReport:
    min_cover: list[str]
    min_cutset: list[str]
    cover_size: int
    cutset_size: int
    mismatches: list[tuple[str, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cover_size == self.cutset_size and not self.mismatches


def check_reduction(g: UndirectedGraph, max_nodes: int = 64) -> ReductionReport:
    """Compare vertex covers of ``g`` with loop-cutsets of its gadget network.

    Every subset of vertices is tested both ways; any subset that is a cover
    but not a cutset (or vice versa) is listed in ``mismatches``.
    """
    net, _ = mvc_to_mlc(g)
    cover = minimal_vertex_cover_exhaustive(g)
    cutset = [net.names[i] for i in minimal_cutset_exhaustive(net, max_nodes=max_nodes)]

    masks = _eligible_masks(net, enumerate_loops(net, max_nodes=max_nodes))
    mismatches = []
    n = len(g.vertices)
    for r in range(n + 1):
        for subset in itertools.combinations(range(n), r):
            bits = sum(1 << i for i in subset)
            is_cutset = all(bits & m for m in masks)
            names = tuple(g.vertices[i] for i in subset)
            if is_cutset != is_vertex_cover(g.edges, names):
                mismatches.append(names)
    return ReductionReport(cover, cutset, len(cover), len(cutset), mismatches)
