"""Greedy loop-cutset selection.

The search alternates two steps on a shrinking copy of the network:

1. prune every node with at most one remaining neighbour, following each
   deletion to the neighbour it exposes;
2. among the remaining nodes with at most one remaining parent, take the
   one with the most remaining neighbours (fewest values on ties, then the
   smallest id), add it to the cutset and delete it.

Parent and neighbour counts always refer to the reduced graph. Each step
removes at least one node and a selection scans the live nodes once, so the
whole search is quadratic in the number of nodes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import NoEligibleCandidate
from .network import BeliefNetwork

#: ``score(neighbours, cardinality)``; the smallest score wins
ScoreFn = Callable[[int, int], object]


def most_neighbors_then_fewest_values(neighbors: int, cardinality: int):
    return (-neighbors, cardinality)


def fewest_values_then_most_neighbors(neighbors: int, cardinality: int):
    return (cardinality, -neighbors)


class ReducedGraph:
    """Mutable working copy of a network's structure."""

    def __init__(self, net: BeliefNetwork):
        self.network = net
        self.live_nodes: set[int] = set(range(len(net)))
        self.live_parents: list[set[int]] = [set(p) for p in net.parents]
        self.live_children: list[set[int]] = [set(c) for c in net.children]
        self.removed: list[int] = []
        #: elementary operations performed so far (node visits + arc updates)
        self.work = 0

    def __len__(self) -> int:
        return len(self.live_nodes)

    @property
    def live_arcs(self) -> set[tuple[int, int]]:
        return {(u, x) for x in self.live_nodes for u in self.live_parents[x]}

    def neighbor_count(self, x: int) -> int:
        return len(self.live_parents[x]) + len(self.live_children[x])

    def parent_count(self, x: int) -> int:
        return len(self.live_parents[x])

    def neighbors(self, x: int) -> set[int]:
        return self.live_parents[x] | self.live_children[x]

    def remove(self, x: int) -> list[int]:
        """Delete ``x`` and its arcs; return its former neighbours in id order."""
        nbrs = sorted(self.neighbors(x))
        for u in self.live_parents[x]:
            self.live_children[u].discard(x)
        for c in self.live_children[x]:
            self.live_parents[c].discard(x)
        self.work += 1 + len(nbrs)
        self.live_parents[x] = set()
        self.live_children[x] = set()
        self.live_nodes.discard(x)
        self.removed.append(x)
        return nbrs


def prune_singly_connected(g: ReducedGraph) -> ReducedGraph:
    """Delete every node that cannot lie on a loop.

    The worklist is FIFO, seeded in id order; after each deletion the
    exposed neighbour is re-examined.
    """
    queue = deque(x for x in sorted(g.live_nodes) if g.neighbor_count(x) <= 1)
    g.work += len(g.live_nodes)
    while queue:
        x = queue.popleft()
        g.work += 1
        if x not in g.live_nodes or g.neighbor_count(x) > 1:
            continue
        for y in g.remove(x):
            if g.neighbor_count(y) <= 1:
                queue.append(y)
    return g


@dataclass(frozen=True)
class Candidate:
    node: int
    neighbors: int
    parents: int
    cardinality: int


@dataclass(frozen=True)
class TraceStep:
    pruned: tuple[int, ...]
    candidates: tuple[Candidate, ...] = ()
    chosen: Optional[int] = None


@dataclass
class CutsetResult:
    members: list[int]
    instantiation_count: int
    trace: list[TraceStep] = field(default_factory=list)
    work: int = 0

    def names(self, net: BeliefNetwork) -> list[str]:
        return [net.names[m] for m in self.members]


def select_candidate(g: ReducedGraph, net: BeliefNetwork, score: ScoreFn | None = None) -> int:
    return _select(g, net, score)[0]


def _select(g: ReducedGraph, net: BeliefNetwork, score: ScoreFn | None):
    score = score or most_neighbors_then_fewest_values
    eligible = []
    for x in sorted(g.live_nodes):
        g.work += 1
        if g.parent_count(x) <= 1:
            eligible.append(Candidate(x, g.neighbor_count(x), g.parent_count(x), net.cardinalities[x]))
    if not eligible:
        raise NoEligibleCandidate(
            "every remaining node has two or more remaining parents: "
            + " ".join(net.names[x] for x in sorted(g.live_nodes))
        )
    best = min(eligible, key=lambda c: (score(c.neighbors, c.cardinality), c.node))
    return best.node, tuple(eligible)


def find_loop_cutset(net: BeliefNetwork, score: ScoreFn | None = None) -> CutsetResult:
    """Run prune/select rounds until the reduced graph is empty."""
    g = ReducedGraph(net)
    members: list[int] = []
    trace: list[TraceStep] = []
    while True:
        mark = len(g.removed)
        prune_singly_connected(g)
        pruned = tuple(g.removed[mark:])
        if not g.live_nodes:
            trace.append(TraceStep(pruned))
            break
        chosen, candidates = _select(g, net, score)
        trace.append(TraceStep(pruned, candidates, chosen))
        members.append(chosen)
        g.remove(chosen)
    count = 1
    for m in members:
        count *= net.cardinalities[m]
    return CutsetResult(members, count, trace, g.work)


def format_trace(result: CutsetResult, net: BeliefNetwork) -> list[str]:
    """Human-readable trace lines, one per prune/select round."""
    lines = []
    for k, step in enumerate(result.trace, 1):
        pruned = " ".join(net.names[x] for x in step.pruned) or "-"
        lines.append(f"step {k}: pruned {pruned}")
        if step.chosen is not None:
            cands = " ".join(
                f"{net.names[c.node]}(nb={c.neighbors},val={c.cardinality})" for c in step.candidates
            )
            lines.append(f"step {k}: candidates {cands}")
            lines.append(f"step {k}: chose {net.names[step.chosen]}")
    return lines
