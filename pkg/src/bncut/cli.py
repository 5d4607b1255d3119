"""Command line front end (``bncut``).

Exit codes: 0 success, 1 usage, 2 invalid input, 3 inference failure.
Errors are printed to stderr as a single ``error: CODE message`` line.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .conditioning import DEFAULT_MAX_INSTANTIATIONS, infer
from .cutset import find_loop_cutset, format_trace
from .errors import BncutError, InferenceError, ParseError
from .errors import InvalidNetwork, UnknownNode
from .io import from_network, load_network, parse_graph, print_network
from .network import EvidenceSet, is_singly_connected
from .oracle import joint_enumeration_posterior
from .reduction import check_reduction, mvc_to_mlc

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INFERENCE = 0, 1, 2, 3
COMPARE_TOLERANCE = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bncut", description="Exact belief-network inference by loop-cutset conditioning.")
    p.add_argument("--version", action="version", version=f"bncut {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a network file")
    s.add_argument("file")

    s = sub.add_parser("cutset", help="select a loop cutset")
    s.add_argument("file")
    s.add_argument("--trace", action="store_true")

    for name, helptext in (("infer", "posteriors by conditioning"), ("oracle", "posteriors by brute force")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("file")
        s.add_argument("--query", required=True, help="comma separated node names")
        s.add_argument("--evidence", nargs="*", default=[], metavar="N=v")
        if name == "infer":
            s.add_argument("--max-instantiations", type=int, default=None)

    s = sub.add_parser("compare", help="conditioning against brute force on every node")
    s.add_argument("file")
    s.add_argument("--evidence", nargs="*", default=[], metavar="N=v")
    s.add_argument("--max-instantiations", type=int, default=None)

    s = sub.add_parser("reduce-mvc", help="turn a vertex cover instance into a network")
    s.add_argument("graph")
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("check-reduction", help="compare minimal covers and minimal cutsets")
    s.add_argument("graph")
    return p


def _evidence(net, inline: EvidenceSet, items) -> EvidenceSet:
    findings = dict(inline.findings)
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name or not value:
            raise UsageError(f"evidence must look like NODE=value, got {item!r}")
        x = net.node_id(name)
        findings[x] = net.value_index(x, value)
    return EvidenceSet(findings)


def _budget(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("BNCUT_MAX_INST")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"BNCUT_MAX_INST must be an integer, got {env!r}") from None
    return DEFAULT_MAX_INSTANTIATIONS


def _print_posteriors(net, table, out) -> None:
    for q in sorted(table.marginals):
        for v, label in enumerate(net.nodes[q].values):
            out.write(f"P({net.names[q]}={label}) = {table.marginals[q][v]:.9f}\n")


def _read(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def run(argv, out) -> int:
    args = _parser().parse_args(argv)
    cmd = args.command

    if cmd in ("reduce-mvc", "check-reduction"):
        g = parse_graph(_read(args.graph))
        if cmd == "reduce-mvc":
            net, ev = mvc_to_mlc(g)
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(print_network(from_network(net, ev)))
            out.write(f"wrote {args.output}: {len(net)} nodes, {len(net.arcs)} arcs, {len(ev)} evidence\n")
            return EXIT_OK
        rep = check_reduction(g)
        out.write(f"min_vertex_cover: {' '.join(rep.min_cover)}\n")
        out.write(f"min_loop_cutset: {' '.join(rep.min_cutset)}\n")
        out.write(f"sizes: {rep.cover_size} {rep.cutset_size}\n")
        out.write(f"equivalent: {'yes' if rep.ok else 'no'}\n")
        return EXIT_OK if rep.ok else EXIT_INFERENCE

    net, inline = load_network(args.file)

    if cmd == "validate":
        out.write(f"valid: {len(net)} nodes, {len(net.arcs)} arcs\n")
        out.write(f"singly_connected: {'yes' if is_singly_connected(net) else 'no'}\n")
        return EXIT_OK

    if cmd == "cutset":
        res = find_loop_cutset(net)
        if args.trace:
            for line in format_trace(res, net):
                out.write(line + "\n")
        out.write(f"cutset: {' '.join(res.names(net))}".rstrip() + "\n")
        out.write(f"instantiations: {res.instantiation_count}\n")
        return EXIT_OK

    evidence = _evidence(net, inline, args.evidence)

    if cmd in ("infer", "oracle"):
        queries = [net.node_id(q) for q in args.query.split(",") if q]
        if not queries:
            raise UsageError("--query needs at least one node")
        if cmd == "oracle":
            table = joint_enumeration_posterior(net, evidence, queries)
        else:
            cs = find_loop_cutset(net)
            table = infer(net, evidence, queries, cs, max_instantiations=_budget(args.max_instantiations))
            out.write(f"cutset: {' '.join(cs.names(net))}".rstrip() + "\n")
            out.write(f"instantiations: {table.runs}\n")
        _print_posteriors(net, table, out)
        return EXIT_OK

    # compare
    cs = find_loop_cutset(net)
    got = infer(net, evidence, None, cs, max_instantiations=_budget(args.max_instantiations))
    ref = joint_enumeration_posterior(net, evidence)
    dev = max(float(np.max(np.abs(got.marginals[q] - ref.marginals[q]))) for q in ref.marginals)
    out.write(f"cutset: {' '.join(cs.names(net))}".rstrip() + "\n")
    out.write(f"instantiations: {got.runs}\n")
    out.write(f"max_abs_deviation: {dev:.1e}\n")
    out.write(f"within_tolerance: {'yes' if dev <= COMPARE_TOLERANCE else 'no'}\n")
    return EXIT_OK if dev <= COMPARE_TOLERANCE else EXIT_INFERENCE


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return run(sys.argv[1:] if argv is None else list(argv), out)
    except UsageError as exc:
        err.write(f"error: Usage {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"error: FileError {exc.strerror or exc}: {exc.filename}\n")
        return EXIT_INPUT
    except (ParseError, InvalidNetwork, UnknownNode, ValueError) as exc:
        code = exc.code if isinstance(exc, BncutError) else "InvalidInput"
        err.write(f"error: {code} {_one_line(exc)}\n")
        return EXIT_INPUT
    except InferenceError as exc:
        err.write(f"error: {exc.code} {_one_line(exc)}\n")
        return EXIT_INFERENCE


def _one_line(exc) -> str:
    return " ".join(str(exc).split())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
