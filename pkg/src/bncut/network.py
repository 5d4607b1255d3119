"""Validated discrete belief networks.

A :class:`BeliefNetwork` is built once through :func:`build_network` and is
read-only afterwards, so a single instance can back any number of
propagation runs.

Node ids are dense integers assigned in declaration order. Value order and
CPT parent order are the declared ones; a CPT with parents ``(U1, ..., Uk)``
is stored as an array of shape ``(|U1|, ..., |Uk|, |X|)``, which is the same
as the row-major row enumeration over the parent list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    CptRowNotNormalized,
    CptShapeMismatch,
    CycleDetected,
    DanglingArc,
    DuplicateName,
    InvalidNetwork,
    UnknownNode,
)

NodeRef = Union[int, str]

#: absolute tolerance on the sum of each CPT row
ROW_TOLERANCE = 1e-9


@dataclass(frozen=True)
class NodeDef:
    name: str
    values: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def cardinality(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class Cpt:
    """Conditional probability table for ``child`` given ``parents``.

    ``table`` holds one row per parent configuration in row-major order over
    ``parents`` (the last parent varies fastest); a root has a single row.
    Child and parents may be given by name or by node id.
    """

    child: NodeRef
    parents: tuple = ()
    table: Sequence = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))


class BeliefNetwork:
    """An immutable, validated belief network. Use :func:`build_network`."""

    def __init__(self, nodes, arcs, parents, tables):
        self.nodes: tuple[NodeDef, ...] = tuple(nodes)
        self.arcs: tuple[tuple[int, int], ...] = tuple(arcs)
        self.parents: tuple[tuple[int, ...], ...] = tuple(tuple(p) for p in parents)
        children = [[] for _ in self.nodes]
        for u, x in sorted(self.arcs):
            children[u].append(x)
        self.children: tuple[tuple[int, ...], ...] = tuple(tuple(c) for c in children)
        self.cardinalities: tuple[int, ...] = tuple(n.cardinality for n in self.nodes)
        self.names: tuple[str, ...] = tuple(n.name for n in self.nodes)
        self._index = MappingProxyType({n: i for i, n in enumerate(self.names)})
        self.arc_index = MappingProxyType({a: k for k, a in enumerate(self.arcs)})
        frozen = []
        for t in tables:
            t = np.array(t, dtype=float)
            t.setflags(write=False)
            frozen.append(t)
        self.tables: tuple[np.ndarray, ...] = tuple(frozen)
        self._topo = _topological_order(len(self.nodes), self.arcs)

    def __reduce__(self):
        return BeliefNetwork, (self.nodes, self.arcs, self.parents, self.tables)

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"BeliefNetwork({len(self)} nodes, {len(self.arcs)} arcs)"

    def node_id(self, ref: NodeRef) -> int:
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            if 0 <= ref < len(self.nodes):
                return int(ref)
            raise UnknownNode(f"no node with id {ref}")
        try:
            return self._index[ref]
        except KeyError:
            raise UnknownNode(f"no node named {ref!r}") from None

    def value_index(self, node: NodeRef, value: Union[int, str]) -> int:
        i = self.node_id(node)
        values = self.nodes[i].values
        if isinstance(value, str):
            try:
                return values.index(value)
            except ValueError:
                raise UnknownNode(f"node {self.names[i]!r} has no value {value!r}") from None
        if not 0 <= value < len(values):
            raise UnknownNode(f"node {self.names[i]!r} has no value index {value}")
        return int(value)

    def cpt(self, node: NodeRef) -> Cpt:
        """The CPT of ``node`` in its two-dimensional row form."""
        i = self.node_id(node)
        table = self.tables[i].reshape(-1, self.cardinalities[i])
        return Cpt(i, self.parents[i], table)

    def neighbors(self, node: NodeRef) -> frozenset[int]:
        i = self.node_id(node)
        return frozenset(self.parents[i]) | frozenset(self.children[i])

    def topological_order(self) -> tuple[int, ...]:
        """Topological order, smallest id first among ready nodes."""
        return self._topo

    def ancestors(self, node: NodeRef) -> set[int]:
        seen: set[int] = set()
        stack = list(self.parents[self.node_id(node)])
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(self.parents[u])
        return seen


@dataclass(frozen=True)
class EvidenceSet:
    """Hard findings: node id -> observed value index."""

    findings: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "findings", MappingProxyType(dict(self.findings)))

    @classmethod
    def from_labels(cls, net: BeliefNetwork, findings: Mapping) -> "EvidenceSet":
        """Build from ``{node name or id: value label or index}``, validating both."""
        out: dict[int, int] = {}
        for ref, value in findings.items():
            i = net.node_id(ref)
            if i in out:
                raise InvalidNetwork(f"node {net.names[i]!r} observed twice")
            out[i] = net.value_index(i, value)
        return cls(out)

    def __reduce__(self):
        return EvidenceSet, (dict(self.findings),)

    def validate(self, net: BeliefNetwork) -> "EvidenceSet":
        for i, v in self.findings.items():
            net.value_index(net.node_id(i), v)
        return self

    def __len__(self) -> int:
        return len(self.findings)

    def __iter__(self):
        return iter(sorted(self.findings.items()))

    def __contains__(self, node) -> bool:
        return node in self.findings


@dataclass(frozen=True)
class PosteriorTable:
    """Posterior vector per queried node, plus the probability of the evidence."""

    marginals: dict[int, np.ndarray]
    evidence_probability: float = 1.0

    def __getitem__(self, node: int) -> np.ndarray:
        return self.marginals[node]

    def __iter__(self):
        return iter(sorted(self.marginals))

    def max_abs_difference(self, other: "PosteriorTable") -> float:
        diffs = [np.max(np.abs(self.marginals[k] - other.marginals[k])) for k in self.marginals]
        return float(max(diffs, default=0.0))


def as_evidence(net: BeliefNetwork, evidence) -> EvidenceSet:
    """Accept ``None``, an :class:`EvidenceSet` or a plain mapping."""
    if evidence is None:
        return EvidenceSet()
    if isinstance(evidence, EvidenceSet):
        return evidence.validate(net)
    return EvidenceSet.from_labels(net, evidence)


def build_network(
    defs: Sequence[NodeDef],
    arcs: Iterable[tuple[NodeRef, NodeRef]],
    cpts: Iterable[Cpt],
) -> BeliefNetwork:
    """Validate the pieces of a network and assemble a :class:`BeliefNetwork`.

    Raises one of the :class:`~bncut.errors.InvalidNetwork` subclasses on the
    first violation found; nothing partially built is ever returned.
    """
    defs = [d if isinstance(d, NodeDef) else NodeDef(*d) for d in defs]
    index: dict[str, int] = {}
    for i, d in enumerate(defs):
        if d.name in index:
            raise DuplicateName(f"node {d.name!r} declared twice")
        if d.cardinality < 2:
            raise InvalidNetwork(f"node {d.name!r} needs at least two values")
        if len(set(d.values)) != d.cardinality:
            raise DuplicateName(f"node {d.name!r} has repeated value labels")
        index[d.name] = i
    n = len(defs)

    def resolve(ref, what):
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            if 0 <= ref < n:
                return int(ref)
        elif ref in index:
            return index[ref]
        raise DanglingArc(f"{what} refers to unknown node {ref!r}")

    arc_list: list[tuple[int, int]] = []
    seen_arcs: set[tuple[int, int]] = set()
    for u, x in arcs:
        a = (resolve(u, "arc"), resolve(x, "arc"))
        if a[0] == a[1]:
            raise CycleDetected([defs[a[0]].name])
        if a in seen_arcs:
            raise InvalidNetwork(f"duplicate arc {defs[a[0]].name} -> {defs[a[1]].name}")
        seen_arcs.add(a)
        arc_list.append(a)

    cycle = _find_cycle(n, arc_list)
    if cycle:
        raise CycleDetected([defs[i].name for i in cycle])

    in_arcs: list[set[int]] = [set() for _ in range(n)]
    for u, x in arc_list:
        in_arcs[x].add(u)

    by_child: dict[int, Cpt] = {}
    for c in cpts:
        try:
            x = resolve(c.child, "cpt")
        except DanglingArc as exc:
            raise CptShapeMismatch(str(exc)) from None
        if x in by_child:
            raise CptShapeMismatch(f"node {defs[x].name!r} has two cpts")
        by_child[x] = c

    parents: list[tuple[int, ...]] = []
    tables: list[np.ndarray] = []
    for x in range(n):
        name = defs[x].name
        if x not in by_child:
            raise CptShapeMismatch(f"node {name!r} has no cpt")
        c = by_child[x]
        try:
            plist = tuple(resolve(p, "cpt") for p in c.parents)
        except DanglingArc as exc:
            raise CptShapeMismatch(str(exc)) from None
        if len(set(plist)) != len(plist) or set(plist) != in_arcs[x]:
            raise CptShapeMismatch(
                f"cpt parents of {name!r} ({', '.join(defs[p].name for p in plist)}) "
                f"do not match its in-arcs ({', '.join(defs[p].name for p in sorted(in_arcs[x]))})"
            )
        card = defs[x].cardinality
        shape = tuple(defs[p].cardinality for p in plist)
        rows = int(np.prod(shape, dtype=int))
        try:
            table = np.asarray(c.table, dtype=float)
        except (TypeError, ValueError):
            raise CptShapeMismatch(f"cpt of {name!r} is not a numeric table") from None
        if table.ndim == 1 and rows == 1:
            table = table.reshape(1, -1)
        elif table.ndim == len(shape) + 1 and table.shape == shape + (card,):
            table = table.reshape(rows, card)
        if table.shape != (rows, card):
            raise CptShapeMismatch(
                f"cpt of {name!r} has shape {table.shape}, expected ({rows}, {card})"
            )
        for r, row in enumerate(table):
            total = float(row.sum())
            if not np.all(np.isfinite(row)) or np.any(row < 0) or abs(total - 1.0) > ROW_TOLERANCE:
                raise CptRowNotNormalized(name, r, total)
        parents.append(plist)
        tables.append(table.reshape(shape + (card,)))

    return BeliefNetwork(defs, arc_list, parents, tables)


def undirected_neighbors(net: BeliefNetwork, node: NodeRef) -> frozenset[int]:
    """Parents and children of ``node``."""
    return net.neighbors(node)


def is_singly_connected(net: BeliefNetwork) -> bool:
    """True when the undirected skeleton is a forest."""
    parent = list(range(len(net)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    components = len(net)
    for u, x in net.arcs:
        ru, rx = find(u), find(x)
        if ru != rx:
            parent[ru] = rx
            components -= 1
    return len(net.arcs) == len(net) - components


def _topological_order(n, arcs):
    import heapq

    indeg = [0] * n
    out = [[] for _ in range(n)]
    for u, x in arcs:
        indeg[x] += 1
        out[u].append(x)
    ready = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for x in out[u]:
            indeg[x] -= 1
            if indeg[x] == 0:
                heapq.heappush(ready, x)
    return tuple(order)


def _find_cycle(n, arcs):
    """Return one directed cycle as a node list, or ``None``."""
    out = [[] for _ in range(n)]
    for u, x in arcs:
        out[u].append(x)
    color = [0] * n  # 0 new, 1 on stack, 2 done
    for start in range(n):
        if color[start]:
            continue
        path = [start]
        iters = [iter(out[start])]
        color[start] = 1
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                color[path.pop()] = 2
                iters.pop()
            elif color[nxt] == 1:
                return path[path.index(nxt):]
            elif color[nxt] == 0:
                color[nxt] = 1
                path.append(nxt)
                iters.append(iter(out[nxt]))
    return None

