"""Exact inference on multiply-connected networks by conditioning.

For every joint assignment ``c`` of the cutset a fresh propagation run
absorbs ``c`` and then the evidence ``E``.  Sequential absorption yields both
``P(c, E)`` (the product of the absorption factors) and the beliefs
``P(x | c, E)``; the answer is the mixture

    P(x | E) = sum_c P(x | c, E) P(c | E),  P(c | E) = P(c, E) / sum_c' P(c', E).

Cutset members are absorbed in topological order, not selection order: the
absorption factor of a member is only exact once every loop among its
ancestors is already cut, and topological order guarantees that.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ImpossibleEvidence,
    InstantiationBudgetExceeded,
    InvalidCutset,
    NonConvergence,
    ZeroProbabilityEvidence,
)
from .network import BeliefNetwork, EvidenceSet, NodeRef, PosteriorTable, as_evidence
from .propagation import PropagationRun, init_run

DEFAULT_MAX_INSTANTIATIONS = 2 ** 20


@dataclass(frozen=True)
class Instantiation:
    assignment: tuple[int, ...]
    joint_with_evidence: float
    weight: float
    log_joint: float = field(default=-math.inf, repr=False)


@dataclass(frozen=True)
class InferenceResult(PosteriorTable):
    """Posteriors plus the per-instantiation bookkeeping of the sweep."""

    cutset: tuple[int, ...] = ()
    instantiations: tuple[Instantiation, ...] = ()
    runs: int = 0
    conditionals: tuple[dict, ...] = field(default=(), repr=False)


def _members(cutset) -> list[int]:
    return list(getattr(cutset, "members", cutset))


def enumerate_instantiations(
    cutset, net: BeliefNetwork | None = None, max_instantiations: int = DEFAULT_MAX_INSTANTIATIONS
) -> list[tuple[int, ...]]:
    """All value assignments to the cutset, row-major over the member order.

    ``cutset`` is a :class:`~bncut.cutset.CutsetResult` or a sequence of
    member ids; ``net`` supplies cardinalities (binary is assumed without it).
    """
    members = _members(cutset)
    cards = [net.cardinalities[net.node_id(m)] if net is not None else 2 for m in members]
    count = math.prod(cards)
    if count > max_instantiations:
        raise InstantiationBudgetExceeded(
            f"{count} cutset instantiations exceed the budget of {max_instantiations}"
        )
    return list(itertools.product(*(range(k) for k in cards)))


def _absorption_order(net: BeliefNetwork, members: Sequence[int]) -> list[int]:
    rank = {x: k for k, x in enumerate(net.topological_order())}
    return sorted(members, key=rank.__getitem__)


def _sweep(base: PropagationRun, members, order, evidence_items, queries, assignments):
    """Run each assignment; return (log joint, {query: belief}) per assignment."""
    out = []
    observed = dict(evidence_items)
    for assignment in assignments:
        values = dict(zip(members, assignment))
        if any(observed.get(m, v) != v for m, v in values.items()):
            out.append((-math.inf, None))
            continue
        run = base.copy()
        try:
            for m in order:
                run.absorb(m, values[m])
            for x, v in evidence_items:
                if x not in values:
                    run.absorb(x, v)
        except ZeroProbabilityEvidence:
            out.append((-math.inf, None))
            continue
        except NonConvergence as exc:
            raise InvalidCutset(f"cutset leaves a loop uncut: {exc}") from None
        out.append((run.log_likelihood, {q: run.belief(q) for q in queries}))
    return out


def _chunks(seq, n):
    size = max(1, -(-len(seq) // n))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def infer(
    net: BeliefNetwork,
    evidence=None,
    queries: Iterable[NodeRef] | None = None,
    cutset=(),
    max_instantiations: int = DEFAULT_MAX_INSTANTIATIONS,
    workers: int = 1,
) -> InferenceResult:
    """Posterior of every query node given the evidence, by conditioning on ``cutset``.

    The cutset must satisfy the loop-cutset condition for ``net``; a run that
    fails to converge is reported as :class:`InvalidCutset`. With
    ``workers > 1`` the instantiations are spread over worker processes; the
    results are combined in enumeration order either way, so the answer does
    not depend on the worker count.
    """
    evidence = as_evidence(net, evidence)
    members = [net.node_id(m) for m in _members(cutset)]
    if len(set(members)) != len(members):
        raise InvalidCutset("cutset lists a node twice")
    qids = list(range(len(net))) if queries is None else sorted({net.node_id(q) for q in queries})
    assignments = enumerate_instantiations(members, net, max_instantiations)

    try:
        base = init_run(net)
    except NonConvergence as exc:  # pragma: no cover - loops always close at a collider
        raise InvalidCutset(str(exc)) from None
    order = _absorption_order(net, members)
    items = list(evidence)

    if workers > 1 and len(assignments) > 1:
        parts = _chunks(assignments, workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep, base, members, order, items, qids, p) for p in parts]
            results = [r for f in futures for r in f.result()]
    else:
        results = _sweep(base, members, order, items, qids, assignments)

    logs = np.array([lj for lj, _ in results])
    top = logs.max()
    if not np.isfinite(top):
        raise ImpossibleEvidence("evidence has probability 0")
    scaled = np.exp(logs - top)
    total = scaled.sum()
    weights = scaled / total
    p_e = float(math.exp(top) * total)

    marginals = {q: np.zeros(net.cardinalities[q]) for q in qids}
    for w, (_, beliefs) in zip(weights, results):
        if beliefs is None or w == 0.0:
            continue
        for q in qids:
            marginals[q] = marginals[q] + w * beliefs[q]

    inst = tuple(
        Instantiation(a, float(math.exp(lj)), float(w), float(lj))
        for a, (lj, _), w in zip(assignments, results, weights)
    )
    return InferenceResult(
        marginals,
        p_e,
        cutset=tuple(members),
        instantiations=inst,
        runs=len(assignments),
        conditionals=tuple(b for _, b in results),
    )


@dataclass(frozen=True)
class MixingRow:
    assignment: tuple[int, ...]
    conditional: np.ndarray  # P(x | c, E)
    weight: float  # P(c | E)
    partial: np.ndarray  # conditional * weight


@dataclass(frozen=True)
class MixingReport:
    query: int
    rows: tuple[MixingRow, ...]
    weight_sum: float
    recomposed: np.ndarray
    posterior: np.ndarray

    @property
    def ok(self) -> bool:
        return abs(self.weight_sum - 1.0) <= 1e-9 and bool(
            np.allclose(self.recomposed, self.posterior, rtol=0, atol=1e-12)
        )


def mixing_identity_check(net: BeliefNetwork, evidence, query: NodeRef, cutset) -> MixingReport:
    """Per-instantiation decomposition of one query's posterior.

    Rows with zero weight are left out; the report checks that the weights
    sum to one and that the weighted conditionals add back up to the
    posterior.
    """
    q = net.node_id(query)
    res = infer(net, evidence, [q], cutset)
    rows = []
    for inst, beliefs in zip(res.instantiations, res.conditionals):
        if beliefs is None or inst.weight == 0.0:
            continue
        cond = beliefs[q]
        rows.append(MixingRow(inst.assignment, cond, inst.weight, cond * inst.weight))
    recomposed = np.zeros(net.cardinalities[q])
    for r in rows:
        recomposed = recomposed + r.partial
    return MixingReport(q, tuple(rows), float(sum(r.weight for r in rows)), recomposed, res.marginals[q])


def conditioning_posteriors(
    net: BeliefNetwork,
    evidence=None,
    queries: Iterable[NodeRef] | None = None,
    max_instantiations: int | None = None,
) -> InferenceResult:
    """Find a cutset with the greedy heuristic, then condition on it."""
    from .cutset import find_loop_cutset

    if max_instantiations is None:
        max_instantiations = int(os.environ.get("BNCUT_MAX_INST", DEFAULT_MAX_INSTANTIATIONS))
    return infer(net, evidence, queries, find_loop_cutset(net), max_instantiations)
