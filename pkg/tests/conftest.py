import itertools

import numpy as np
import pytest

from bncut.fixtures import chain_network, diamond_network, walkthrough_network


@pytest.fixture
def chain():
    return chain_network()


@pytest.fixture
def diamond():
    return diamond_network()


@pytest.fixture
def walkthrough():
    return walkthrough_network()


def brute_force_marginals(net, evidence=None):
    """Pure-Python joint enumeration, summing in a different order than the oracle."""
    evidence = dict(evidence or {})
    sums = [np.zeros(k) for k in net.cardinalities]
    total = 0.0
    for assignment in itertools.product(*(range(k) for k in net.cardinalities)):
        if any(assignment[x] != v for x, v in evidence.items()):
            continue
        p = 1.0
        for x in reversed(range(len(net))):
            idx = tuple(assignment[u] for u in net.parents[x]) + (assignment[x],)
            p *= net.tables[x][idx]
        total += p
        for x, v in enumerate(assignment):
            sums[x][v] += p
    return [s / total for s in sums], total
