"""Local lambda/pi message passing with blocking.

Each arc ``U -> X`` carries two vectors over the values of ``U``: the causal
message ``pi_X(u)`` sent down by ``U`` and the diagnostic message
``lambda_X(u)`` sent up by ``X``.  Messages are recomputed from an
event-driven worklist until nothing changes.

Blocking is applied exactly rather than left to arithmetic:

* an instantiated node sends its indicator vector to every child, so
  nothing passes through it from parents to children or between children;
* an instantiated node's upward message depends only on its observed value
  and its other parents, so nothing passes from children to parents;
* a node that is neither instantiated nor has an instantiated descendant
  sends an all-ones (uniform) message to every parent.

On a singly-connected network this is Pearl's exact propagation.  On a
multiply-connected network it is exact once every loop contains an
instantiated node with at most one parent on that loop; otherwise messages
either circulate (raising :class:`NonConvergence`) or settle on locally
computed but wrong beliefs, which :func:`propagate_unconditioned` exposes on
purpose.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AlreadyInstantiated, ImpossibleEvidence, NonConvergence, ZeroProbabilityEvidence
from .network import BeliefNetwork, EvidenceSet, NodeRef, as_evidence

#: a message is re-sent only when some component moves by more than this
CHANGE_TOLERANCE = 1e-12

_PI, _LAMBDA = 0, 1


def _normalize(v: np.ndarray) -> np.ndarray:
    s = v.sum()
    if s > 0:
        return v / s
    return v


@dataclass
class MessageState:
    """Stored messages of one run, indexed by arc position in ``net.arcs``."""

    pi_msgs: list[np.ndarray]
    lambda_msgs: list[np.ndarray]

    def copy(self) -> "MessageState":
        # message arrays are never mutated in place, so sharing them is safe
        return MessageState(list(self.pi_msgs), list(self.lambda_msgs))


class PropagationRun:
    """Messages, findings and accumulated likelihood for one propagation.

    A run is owned by a single caller. ``copy()`` gives an independent run
    that shares the (immutable) network.
    """

    def __init__(self, network: BeliefNetwork):
        self.network = network
        self.instantiated: dict[int, int] = {}
        self.log_likelihood = 0.0
        self.dead = False
        self.emissions = 0
        net = network
        self._parent_arcs = [tuple(net.arc_index[(u, x)] for u in net.parents[x]) for x in range(len(net))]
        self._child_arcs = [tuple(net.arc_index[(x, c)] for c in net.children[x]) for x in range(len(net))]
        self._uniform = [np.full(k, 1.0 / k) for k in net.cardinalities]
        self.state = MessageState(
            [self._uniform[u] for u, _ in net.arcs],
            [self._uniform[u] for u, _ in net.arcs],
        )
        # nodes with at least one instantiated strict descendant
        self._active = [False] * len(net)
        self._node_pi: list = [None] * len(net)
        self._queue: deque = deque()
        self._queued: set = set()

    # -- public views -----------------------------------------------------

    @property
    def blocked(self) -> frozenset[int]:
        return frozenset(self.instantiated)

    @property
    def likelihood(self) -> float:
        return math.exp(self.log_likelihood)

    @property
    def node_pi(self) -> list[np.ndarray]:
        return [self._pi(x) for x in range(len(self.network))]

    @property
    def node_lambda(self) -> list[np.ndarray]:
        return [self._lambda(x) for x in range(len(self.network))]

    @property
    def beliefs(self) -> list[np.ndarray]:
        return [self.belief(x) for x in range(len(self.network))]

    def belief(self, node: NodeRef) -> np.ndarray:
        x = self.network.node_id(node)
        return _normalize(self._pi(x) * self._lambda(x))

    def copy(self) -> "PropagationRun":
        other = object.__new__(PropagationRun)
        other.__dict__.update(self.__dict__)
        other.instantiated = dict(self.instantiated)
        other.state = self.state.copy()
        other._active = list(self._active)
        other._node_pi = list(self._node_pi)
        other._queue = deque(self._queue)
        other._queued = set(self._queued)
        return other

    # -- local quantities -------------------------------------------------

    def _indicator(self, x: int) -> np.ndarray:
        v = np.zeros(self.network.cardinalities[x])
        v[self.instantiated[x]] = 1.0
        return v

    def _pi(self, x: int) -> np.ndarray:
        cached = self._node_pi[x]
        if cached is not None:
            return cached
        t = self.network.tables[x]
        pis = self.state.pi_msgs
        for a in self._parent_arcs[x]:
            t = np.tensordot(pis[a], t, axes=(0, 0))
        self._node_pi[x] = t
        return t

    def _lambda(self, x: int, skip: int = -1) -> np.ndarray:
        lam = np.ones(self.network.cardinalities[x])
        for a in self._child_arcs[x]:
            if a != skip:
                lam = lam * self.state.lambda_msgs[a]
        if x in self.instantiated:
            lam = lam * self._indicator(x)
        return lam

    def _compute(self, kind: int, a: int) -> np.ndarray:
        u, x = self.network.arcs[a]
        if kind == _PI:
            # message from u down to its child x
            if u in self.instantiated:
                return self._indicator(u)
            return _normalize(self._pi(u) * self._lambda(u, skip=a))
        # message from x up to its parent u
        if x not in self.instantiated and not self._active[x]:
            return self._uniform[u]
        lam = self._indicator(x) if x in self.instantiated else self._lambda(x)
        t = np.tensordot(self.network.tables[x], lam, axes=(-1, 0))
        arcs = self._parent_arcs[x]
        pis = self.state.pi_msgs
        for k in range(len(arcs) - 1, -1, -1):
            if arcs[k] != a:
                t = np.tensordot(t, pis[arcs[k]], axes=(k, 0))
        return _normalize(t)

    # -- scheduling -------------------------------------------------------

    def _enqueue(self, kind: int, a: int) -> None:
        key = (kind, a)
        if key not in self._queued:
            self._queued.add(key)
            self._queue.append(key)

    def _dependents(self, kind: int, a: int) -> None:
        u, x = self.network.arcs[a]
        if kind == _PI:
            self._node_pi[x] = None
            for b in self._child_arcs[x]:
                self._enqueue(_PI, b)
            for b in self._parent_arcs[x]:
                if b != a:
                    self._enqueue(_LAMBDA, b)
        else:
            for b in self._parent_arcs[u]:
                self._enqueue(_LAMBDA, b)
            for b in self._child_arcs[u]:
                if b != a:
                    self._enqueue(_PI, b)

    def _seed_all(self) -> None:
        net = self.network
        order = net.topological_order()
        for u in order:
            for a in self._child_arcs[u]:
                self._enqueue(_PI, a)
        for x in reversed(order):
            for a in self._parent_arcs[x]:
                self._enqueue(_LAMBDA, a)

    def propagate(self) -> "PropagationRun":
        """Process the worklist until no message changes.

        Raises :class:`NonConvergence` after ``2 * arcs * nodes`` message
        emissions, which only happens when some loop is not cut.
        """
        bound = 2 * len(self.network.arcs) * len(self.network)
        emitted = 0
        stored = (self.state.pi_msgs, self.state.lambda_msgs)
        while self._queue:
            kind, a = self._queue.popleft()
            self._queued.discard((kind, a))
            new = self._compute(kind, a)
            old = stored[kind][a]
            if new is old or np.max(np.abs(new - old)) <= CHANGE_TOLERANCE:
                continue
            stored[kind][a] = new
            emitted += 1
            self.emissions += 1
            if emitted > bound:
                self._queue.clear()
                self._queued.clear()
                raise NonConvergence(
                    f"messages still changing after {bound} emissions; some loop is not cut"
                )
            self._dependents(kind, a)
        return self

    def absorb(self, node: NodeRef, value) -> "PropagationRun":
        """Instantiate ``node`` to ``value`` and re-propagate.

        The belief in ``value`` just before clamping is the conditional
        probability of the finding given everything absorbed so far; its log
        is added to ``log_likelihood``.
        """
        net = self.network
        x = net.node_id(node)
        v = net.value_index(x, value)
        if x in self.instantiated:
            raise AlreadyInstantiated(f"node {net.names[x]!r} is already instantiated")
        if self.dead:
            raise ZeroProbabilityEvidence("run already holds an impossible finding")
        f = float(self.belief(x)[v])
        if f <= 0.0:
            self.dead = True
            self.log_likelihood = -math.inf
            raise ZeroProbabilityEvidence(
                f"{net.names[x]}={net.nodes[x].values[v]} has probability 0 given the current findings"
            )
        self.log_likelihood += math.log(f)
        self.instantiated[x] = v

        stack = list(net.parents[x])
        while stack:
            p = stack.pop()
            if not self._active[p]:
                self._active[p] = True
                for b in self._parent_arcs[p]:
                    self._enqueue(_LAMBDA, b)
                stack.extend(net.parents[p])
        for b in self._child_arcs[x]:
            self._enqueue(_PI, b)
        for b in self._parent_arcs[x]:
            self._enqueue(_LAMBDA, b)
        return self.propagate()


def init_run(net: BeliefNetwork) -> PropagationRun:
    """A run with no findings, propagated to its fixed point."""
    run = PropagationRun(net)
    run._seed_all()
    return run.propagate()


def absorb_evidence(run: PropagationRun, node: NodeRef, value) -> PropagationRun:
    return run.absorb(node, value)


def propagate(run: PropagationRun) -> PropagationRun:
    return run.propagate()


def propagate_unconditioned(net: BeliefNetwork, evidence, query: NodeRef) -> np.ndarray:
    """Belief of ``query`` from plain local propagation, without conditioning.

    Diagnostic only: on a multiply-connected network whose loops close at
    uninstantiated colliders this converges, but the beliefs below such a
    loop mix incompatible cases and are generally wrong.
    """
    evidence = as_evidence(net, evidence)
    run = init_run(net)
    for x, v in evidence:
        try:
            run.absorb(x, v)
        except ZeroProbabilityEvidence as exc:
            raise ImpossibleEvidence(str(exc)) from None
    return run.belief(query)


def joint_probability(net: BeliefNetwork, findings: Iterable[tuple[NodeRef, object]]) -> float:
    """Probability of all ``findings`` by sequential absorption.

    Every intermediate state must be exactly computable by propagation (true
    on singly-connected networks; on cut networks, absorb the cutset first).
    An impossible finding gives 0.0.
    """
    run = init_run(net)
    for node, value in findings:
        try:
            run.absorb(node, value)
        except ZeroProbabilityEvidence:
            return 0.0
    return run.likelihood


def posteriors(net: BeliefNetwork, evidence: EvidenceSet | dict | None = None,
               queries: Sequence[NodeRef] | None = None) -> dict[int, np.ndarray]:
    """Posterior beliefs on a singly-connected network.

    Raises :class:`ImpossibleEvidence` when the evidence has probability 0.
    """
    evidence = as_evidence(net, evidence)
    run = init_run(net)
    for x, v in evidence:
        try:
            run.absorb(x, v)
        except ZeroProbabilityEvidence as exc:
            raise ImpossibleEvidence(str(exc)) from None
    ids = range(len(net)) if queries is None else [net.node_id(q) for q in queries]
    return {i: run.belief(i) for i in ids}
