"""Brute-force reference computations.

Everything here is deliberately exhaustive and independent of the message
passing code: posteriors come from the full joint table, loops from a plain
cycle search on the undirected skeleton, and minimal cutsets / vertex covers
from subset enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ImpossibleEvidence, StateSpaceTooLarge
from .network import BeliefNetwork, NodeRef, PosteriorTable, as_evidence

MAX_JOINT_STATES = 2 ** 24
MAX_LOOP_NODES = 16


def joint_table(net: BeliefNetwork, max_states: int = MAX_JOINT_STATES) -> np.ndarray:
    """The full joint distribution as an array with one axis per node."""
    states = int(np.prod(net.cardinalities, dtype=object))
    if states > max_states:
        raise StateSpaceTooLarge(f"{states} joint states exceed the cap of {max_states}")
    if len(net) > 52:
        raise StateSpaceTooLarge("too many nodes for joint enumeration")
    operands = []
    for x in range(len(net)):
        operands.append(net.tables[x])
        operands.append([*net.parents[x], x])
    joint = np.einsum(*operands, list(range(len(net))))
    return np.asarray(joint, dtype=float)


def joint_enumeration_posterior(
    net: BeliefNetwork,
    evidence=None,
    queries: Iterable[NodeRef] | None = None,
    max_states: int = MAX_JOINT_STATES,
) -> PosteriorTable:
    """``P(x | E)`` for every query node by summing the full joint table."""
    evidence = as_evidence(net, evidence)
    joint = joint_table(net, max_states)
    index = [slice(None)] * len(net)
    for x, v in evidence:
        index[x] = slice(v, v + 1)
    restricted = joint[tuple(index)]
    p_e = float(restricted.sum())
    if p_e <= 0.0:
        raise ImpossibleEvidence("evidence has probability 0")
    ids = range(len(net)) if queries is None else sorted({net.node_id(q) for q in queries})
    marginals = {}
    for q in ids:
        axes = tuple(a for a in range(len(net)) if a != q)
        m = restricted.sum(axis=axes).reshape(-1)
        if q in evidence:
            full = np.zeros(net.cardinalities[q])
            full[evidence.findings[q]] = m[0]
            m = full
        marginals[q] = m / p_e
    return PosteriorTable(marginals, p_e)


# -- loops --------------------------------------------------------------------


@dataclass(frozen=True)
class Loop:
    """A simple undirected cycle, presented as two pathways from X to Y.

    ``cycle`` lists the nodes in cyclic order starting at X, a node whose two
    cycle neighbours are both its children (every loop in a DAG has one).
    """

    cycle: tuple[int, ...]
    nodes: frozenset[int] = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.cycle))

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.cycle[0], self.cycle[len(self.cycle) // 2]

    @property
    def pathways(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        k = len(self.cycle) // 2
        first = self.cycle[: k + 1]
        second = (self.cycle[0],) + tuple(reversed(self.cycle[k:]))
        return first, second

    def in_loop_parents(self, net: BeliefNetwork, node: int) -> int:
        return sum(1 for p in net.parents[node] if p in self.nodes)


def _skeleton(net: BeliefNetwork) -> list[set[int]]:
    adj = [set() for _ in range(len(net))]
    for u, x in net.arcs:
        adj[u].add(x)
        adj[x].add(u)
    return adj


def simple_cycles(adj: Sequence[set[int]]) -> list[tuple[int, ...]]:
    """All simple cycles (length >= 3) of an undirected graph.

    Each cycle starts at its smallest vertex and is oriented so that the
    second vertex is smaller than the last one.
    """
    cycles = []
    n = len(adj)
    for s in range(n):
        path = [s]
        on_path = {s}
        stack = [iter(sorted(v for v in adj[s] if v > s))]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if nxt in on_path:
                continue
            path.append(nxt)
            on_path.add(nxt)
            if len(path) >= 3 and s in adj[nxt] and path[1] < nxt:
                cycles.append(tuple(path))
            stack.append(iter(sorted(v for v in adj[nxt] if v > s)))
    return cycles


def _as_loop(net: BeliefNetwork, cyc: tuple[int, ...]) -> Loop:
    k = len(cyc)
    sources = []
    for i, v in enumerate(cyc):
        a, b = cyc[i - 1], cyc[(i + 1) % k]
        if v in net.parents[a] and v in net.parents[b]:
            sources.append(i)
    start = min(sources, key=lambda i: cyc[i])
    rotated = cyc[start:] + cyc[:start]
    # orient so that the pathway through the smaller neighbour comes first
    if rotated[1] > rotated[-1]:
        rotated = (rotated[0],) + tuple(reversed(rotated[1:]))
    return Loop(rotated)


def enumerate_loops(net: BeliefNetwork, max_nodes: int = MAX_LOOP_NODES) -> list[Loop]:
    if len(net) > max_nodes:
        raise StateSpaceTooLarge(f"{len(net)} nodes exceed the loop enumeration cap of {max_nodes}")
    return [_as_loop(net, c) for c in simple_cycles(_skeleton(net))]


@dataclass(frozen=True)
class CutsetCheck:
    """Outcome of :func:`verify_cutset_condition`; truthy when the set is valid."""

    ok: bool
    loop: Loop | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_loops(net: BeliefNetwork, loops: Iterable[Loop], cutset: set[int]) -> CutsetCheck:
    for loop in loops:
        members = [c for c in sorted(cutset) if c in loop.nodes]
        if not members:
            return CutsetCheck(False, loop, "no cutset member on the loop")
        if all(loop.in_loop_parents(net, c) >= 2 for c in members):
            return CutsetCheck(False, loop, "every cutset member on the loop has two or more parents in it")
    return CutsetCheck(True)


def verify_cutset_condition(
    net: BeliefNetwork, cutset: Iterable[NodeRef], max_nodes: int = MAX_LOOP_NODES
) -> CutsetCheck:
    """Does every loop hold a cutset member with at most one parent in that loop?"""
    ids = {net.node_id(c) for c in cutset}
    return _check_loops(net, enumerate_loops(net, max_nodes), ids)


def _eligible_masks(net: BeliefNetwork, loops: Sequence[Loop]) -> list[int]:
    masks = []
    for loop in loops:
        m = 0
        for v in loop.nodes:
            if loop.in_loop_parents(net, v) <= 1:
                m |= 1 << v
        masks.append(m)
    return masks


def minimal_cutset_exhaustive(net: BeliefNetwork, max_nodes: int = MAX_LOOP_NODES) -> list[int]:
    """A valid cutset minimising the product of cardinalities.

    Ties go to the lexicographically smallest sorted id list. Only nodes that
    are eligible on some loop are considered, since any other member only
    multiplies the product.
    """
    loops = enumerate_loops(net, max_nodes)
    masks = _eligible_masks(net, loops)
    candidates = sorted({v for m in masks for v in range(len(net)) if m >> v & 1})
    best: tuple | None = None
    for r in range(len(candidates) + 1):
        for subset in itertools.combinations(candidates, r):
            bits = sum(1 << v for v in subset)
            if all(bits & m for m in masks):
                key = (int(np.prod([net.cardinalities[v] for v in subset], dtype=object)), subset)
                if best is None or key < best:
                    best = key
    return list(best[1])


def is_vertex_cover(edges: Iterable[tuple], cover: Iterable) -> bool:
    cover = set(cover)
    return all(u in cover or v in cover for u, v in edges)


def minimal_vertex_cover_exhaustive(graph, max_vertices: int = 16) -> list:
    """Smallest vertex cover of an undirected graph, ties lexicographic.

    ``graph`` is anything with ``vertices`` (ordered) and ``edges``.
    Lexicographic order is over positions in ``graph.vertices``.
    """
    vertices = list(graph.vertices)
    if len(vertices) > max_vertices:
        raise StateSpaceTooLarge(f"{len(vertices)} vertices exceed the cap of {max_vertices}")
    edges = list(graph.edges)
    for r in range(len(vertices) + 1):
        for subset in itertools.combinations(vertices, r):
            if is_vertex_cover(edges, subset):
                return list(subset)
    return vertices
