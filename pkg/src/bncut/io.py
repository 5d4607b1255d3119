"""Text formats for networks and undirected graphs.

Network files are line oriented with ``#`` comments::

    node A { t, f }
    node B { t, f }
    arc A -> B
    cpt A { 0.3, 0.7 }
    cpt B | A { t: 0.9, 0.1
                f: 0.2, 0.8 }
    evidence B = t

A CPT row is labelled by one value per parent, in the parent order given
after ``|``. Graph files hold ``vertex V1`` and ``edge V1 -- V2`` lines.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .errors import DuplicateDeclaration, NetworkSyntaxError, UnknownNodeReference
from .network import BeliefNetwork, Cpt, EvidenceSet, NodeDef, build_network
from .reduction import UndirectedGraph

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>\#[^\n]*)|(?P<arrow>->)|(?P<dash>--)"
    r"|(?P<punct>[{},:|=])|(?P<word>[A-Za-z0-9_.'+](?:[A-Za-z0-9_.'+]|-(?![->]))*)"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise NetworkSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rfind("\n") + 1
        pos = m.end()
    return tokens


class _Cursor:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, expect: str | None = None, what: str = "") -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", "", 1, 1)
            raise NetworkSyntaxError(f"unexpected end of input, expected {what or expect}", last.line, last.column)
        if expect is not None and tok.text != expect and tok.kind != expect:
            raise NetworkSyntaxError(f"expected {what or expect!r}, found {tok.text!r}", tok.line, tok.column)
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text:
            self.i += 1
            return True
        return False


def _number(tok: Token) -> float:
    try:
        return float(tok.text)
    except ValueError:
        raise NetworkSyntaxError(f"expected a probability, found {tok.text!r}", tok.line, tok.column) from None


@dataclass
class CptDecl:
    child: str
    parents: tuple[str, ...]
    rows: list[tuple[tuple[str, ...], tuple[float, ...]]]


@dataclass
class NetworkDocument:
    nodes: list[NodeDef] = field(default_factory=list)
    arcs: list[tuple[str, str]] = field(default_factory=list)
    cpts: list[CptDecl] = field(default_factory=list)
    evidence: list[tuple[str, str]] = field(default_factory=list)


def parse_network(text: str) -> NetworkDocument:
    """Parse a network document; errors carry line and column."""
    cur = _Cursor(tokenize(text))
    doc = NetworkDocument()
    refs: list[tuple[str, Token]] = []  # (name, where) to resolve after parsing
    declared: dict[str, NodeDef] = {}
    cpt_seen: set[str] = set()
    ev_seen: set[str] = set()
    arc_seen: set[tuple[str, str]] = set()
    cpt_where: dict[str, Token] = {}
    ev_where: dict[tuple[str, str], Token] = {}
    row_where: dict[tuple[str, int], Token] = {}

    while cur.peek() is not None:
        kw = cur.next("word", "a declaration")
        if kw.text == "node":
            name = cur.next("word", "node name")
            if name.text in declared:
                raise DuplicateDeclaration(f"node {name.text!r} declared twice", name.line, name.column)
            cur.next("{")
            values = [cur.next("word", "value label").text]
            while cur.accept(","):
                values.append(cur.next("word", "value label").text)
            cur.next("}")
            if len(values) < 2 or len(set(values)) != len(values):
                raise NetworkSyntaxError(f"node {name.text!r} needs two or more distinct values", name.line, name.column)
            nd = NodeDef(name.text, tuple(values))
            declared[name.text] = nd
            doc.nodes.append(nd)
        elif kw.text == "arc":
            u = cur.next("word", "parent name")
            cur.next("arrow", "->")
            x = cur.next("word", "child name")
            refs += [(u.text, u), (x.text, x)]
            if (u.text, x.text) in arc_seen:
                raise DuplicateDeclaration(f"arc {u.text} -> {x.text} declared twice", kw.line, kw.column)
            arc_seen.add((u.text, x.text))
            doc.arcs.append((u.text, x.text))
        elif kw.text == "cpt":
            child = cur.next("word", "node name")
            refs.append((child.text, child))
            if child.text in cpt_seen:
                raise DuplicateDeclaration(f"cpt of {child.text!r} declared twice", child.line, child.column)
            cpt_seen.add(child.text)
            cpt_where[child.text] = child
            parents: list[Token] = []
            if cur.accept("|"):
                parents.append(cur.next("word", "parent name"))
                while cur.accept(","):
                    parents.append(cur.next("word", "parent name"))
            refs += [(p.text, p) for p in parents]
            cur.next("{")
            rows = []
            if not parents:
                probs = [_number(cur.next("word", "probability"))]
                while cur.accept(","):
                    probs.append(_number(cur.next("word", "probability")))
                rows.append(((), tuple(probs)))
                cur.next("}")
            else:
                while not cur.accept("}"):
                    start = cur.peek()
                    labels = []
                    while cur.peek() is not None and cur.peek().text != ":":
                        labels.append(cur.next("word", "row label").text)
                    cur.next(":")
                    if len(labels) != len(parents):
                        raise NetworkSyntaxError(
                            f"cpt {child.text!r} row {' '.join(labels) or '(empty)'}: "
                            f"{len(labels)} labels for {len(parents)} parents",
                            start.line, start.column,
                        )
                    probs = [_number(cur.next("word", "probability"))]
                    while cur.accept(","):
                        probs.append(_number(cur.next("word", "probability")))
                    rows.append((tuple(labels), tuple(probs)))
                    row_where[(child.text, len(rows) - 1)] = start
            doc.cpts.append(CptDecl(child.text, tuple(p.text for p in parents), rows))
        elif kw.text == "evidence":
            name = cur.next("word", "node name")
            cur.next("=")
            value = cur.next("word", "value label")
            refs.append((name.text, name))
            if name.text in ev_seen:
                raise DuplicateDeclaration(f"evidence on {name.text!r} declared twice", name.line, name.column)
            ev_seen.add(name.text)
            ev_where[(name.text, value.text)] = value
            doc.evidence.append((name.text, value.text))
        else:
            raise NetworkSyntaxError(f"unknown declaration {kw.text!r}", kw.line, kw.column)

    for name, tok in refs:
        if name not in declared:
            raise UnknownNodeReference(f"undeclared node {name!r}", tok.line, tok.column)

    for decl in doc.cpts:
        tok = cpt_where[decl.child]
        card = declared[decl.child].cardinality
        wanted = set(itertools.product(*(declared[p].values for p in decl.parents)))
        seen = set()
        for k, (labels, probs) in enumerate(decl.rows):
            tok = row_where.get((decl.child, k), cpt_where[decl.child])
            shown = " ".join(labels) or "(prior)"
            if len(probs) != card:
                raise NetworkSyntaxError(
                    f"cpt {decl.child!r} row {shown}: {len(probs)} entries for {card} values", tok.line, tok.column
                )
            if labels not in wanted:
                raise NetworkSyntaxError(f"cpt {decl.child!r} row {shown}: unknown parent values", tok.line, tok.column)
            if labels in seen:
                raise DuplicateDeclaration(f"cpt {decl.child!r} row {shown} given twice", tok.line, tok.column)
            seen.add(labels)
        tok = cpt_where[decl.child]
        if seen != wanted:
            missing = sorted(wanted - seen)
            raise NetworkSyntaxError(
                f"cpt {decl.child!r} is missing row {' '.join(missing[0])}", tok.line, tok.column
            )

    for (name, value), tok in ev_where.items():
        if value not in declared[name].values:
            raise NetworkSyntaxError(f"node {name!r} has no value {value!r}", tok.line, tok.column)
    return doc


def _fmt(p: float) -> str:
    return repr(float(p))


def print_network(doc: NetworkDocument) -> str:
    out = []
    for nd in doc.nodes:
        out.append(f"node {nd.name} {{ {', '.join(nd.values)} }}")
    for u, x in doc.arcs:
        out.append(f"arc {u} -> {x}")
    for decl in doc.cpts:
        if not decl.parents:
            (_, probs), = decl.rows
            out.append(f"cpt {decl.child} {{ {', '.join(map(_fmt, probs))} }}")
            continue
        head = f"cpt {decl.child} | {', '.join(decl.parents)} {{ "
        pad = " " * len(head)
        for k, (labels, probs) in enumerate(decl.rows):
            row = f"{' '.join(labels)}: {', '.join(map(_fmt, probs))}"
            out.append((head if k == 0 else pad) + row)
        out[-1] += " }"
    for name, value in doc.evidence:
        out.append(f"evidence {name} = {value}")
    return "\n".join(out) + "\n"


def to_network(doc: NetworkDocument) -> tuple[BeliefNetwork, EvidenceSet]:
    """Build and validate the network a document describes."""
    values = {nd.name: nd.values for nd in doc.nodes}
    cpts = []
    for decl in doc.cpts:
        lookup = dict(decl.rows)
        configs = itertools.product(*(values[p] for p in decl.parents))
        cpts.append(Cpt(decl.child, decl.parents, [lookup[c] for c in configs]))
    net = build_network(doc.nodes, doc.arcs, cpts)
    return net, EvidenceSet.from_labels(net, dict(doc.evidence))


def from_network(net: BeliefNetwork, evidence: EvidenceSet | None = None) -> NetworkDocument:
    """Canonical document for a network: declaration order, row-major rows."""
    doc = NetworkDocument(nodes=list(net.nodes))
    doc.arcs = [(net.names[u], net.names[x]) for u, x in net.arcs]
    for x in range(len(net)):
        ps = net.parents[x]
        table = net.tables[x].reshape(-1, net.cardinalities[x])
        configs = itertools.product(*(net.nodes[p].values for p in ps))
        rows = [(tuple(c), tuple(float(v) for v in row)) for c, row in zip(configs, table)]
        doc.cpts.append(CptDecl(net.names[x], tuple(net.names[p] for p in ps), rows))
    for x, v in (evidence or EvidenceSet()):
        doc.evidence.append((net.names[x], net.nodes[x].values[v]))
    return doc


def load_network(path) -> tuple[BeliefNetwork, EvidenceSet]:
    with open(path, encoding="utf-8") as fh:
        return to_network(parse_network(fh.read()))


def parse_graph(text: str) -> UndirectedGraph:
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    where: dict[str, Token] = {}
    cur = _Cursor(tokenize(text))
    edge_toks = []
    while cur.peek() is not None:
        kw = cur.next("word", "a declaration")
        if kw.text == "vertex":
            v = cur.next("word", "vertex name")
            if v.text in where:
                raise DuplicateDeclaration(f"vertex {v.text!r} declared twice", v.line, v.column)
            where[v.text] = v
            vertices.append(v.text)
        elif kw.text == "edge":
            a = cur.next("word", "vertex name")
            cur.next("dash", "--")
            b = cur.next("word", "vertex name")
            edge_toks.append((a, b, kw))
        else:
            raise NetworkSyntaxError(f"unknown declaration {kw.text!r}", kw.line, kw.column)
    seen = set()
    for a, b, kw in edge_toks:
        for t in (a, b):
            if t.text not in where:
                raise UnknownNodeReference(f"undeclared vertex {t.text!r}", t.line, t.column)
        if a.text == b.text:
            raise NetworkSyntaxError(f"self-edge on {a.text!r}", kw.line, kw.column)
        key = frozenset((a.text, b.text))
        if key in seen:
            raise DuplicateDeclaration(f"edge {a.text} -- {b.text} declared twice", kw.line, kw.column)
        seen.add(key)
        edges.append((a.text, b.text))
    return UndirectedGraph(tuple(vertices), tuple(edges))


def print_graph(g: UndirectedGraph) -> str:
    lines = [f"vertex {v}" for v in g.vertices] + [f"edge {u} -- {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"
