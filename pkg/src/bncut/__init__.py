"""Exact inference in discrete belief networks by loop-cutset conditioning."""

__version__ = "0.1.0"

from .conditioning import enumerate_instantiations, infer, mixing_identity_check
from .cutset import find_loop_cutset, prune_singly_connected, select_candidate
from .network import (
    BeliefNetwork,
    Cpt,
    EvidenceSet,
    NodeDef,
    PosteriorTable,
    build_network,
    is_singly_connected,
    undirected_neighbors,
)
from .propagation import init_run, joint_probability, propagate_unconditioned

__all__ = [
    "BeliefNetwork",
    "Cpt",
    "EvidenceSet",
    "NodeDef",
    "PosteriorTable",
    "build_network",
    "enumerate_instantiations",
    "find_loop_cutset",
    "infer",
    "init_run",
    "is_singly_connected",
    "joint_probability",
    "mixing_identity_check",
    "propagate_unconditioned",
    "prune_singly_connected",
    "select_candidate",
    "undirected_neighbors",
]
