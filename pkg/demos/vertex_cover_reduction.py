"""
Vertex cover as a loop-cutset problem
=====================================

Each edge u -- v of an undirected graph becomes two observed colliders, both
children of u and v. That closes a loop in which only u and v can serve as
cutset members, so the loop cutsets made of vertex nodes are exactly the
vertex covers. A fast exact cutset finder would therefore solve vertex cover.
"""

from bncut.oracle import enumerate_loops, verify_cutset_condition
from bncut.reduction import UndirectedGraph, check_reduction, mvc_to_mlc

square = UndirectedGraph(("V1", "V2", "V3", "V4"), (("V1", "V2"), ("V2", "V3"), ("V3", "V4"), ("V4", "V1")))
net, evidence = mvc_to_mlc(square)
print(f"{len(square.vertices)} vertices, {len(square.edges)} edges -> "
      f"{len(net)} nodes, {len(net.arcs)} arcs, {len(evidence)} observed colliders")
print("loops in the gadget:", len(enumerate_loops(net, max_nodes=64)))

for candidate in (["V1", "V3"], ["V1", "V2"], ["V1_V2"]):
    check = verify_cutset_condition(net, candidate, max_nodes=64)
    why = "" if check else f"  ({check.reason})"
    print(f"{candidate}: {'cutset' if check else 'not a cutset'}{why}")

rep = check_reduction(square)
print("\nminimum vertex cover:", rep.min_cover)
print("minimum loop cutset: ", rep.min_cutset)
print("covers and cutsets agree on every subset:", rep.ok)
