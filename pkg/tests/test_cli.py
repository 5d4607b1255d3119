import io
import subprocess
import sys
from importlib.resources import files

import pytest

from bncut.cli import main
from bncut.io import load_network

CORPUS = files("bncut") / "corpus"


def path(name):
    return str(CORPUS / name)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_validate():
    code, out, _ = call("validate", path("diamond.net"))
    assert code == 0 and out == "valid: 5 nodes, 5 arcs\nsingly_connected: no\n"
    assert call("validate", path("polytree.net"))[1].endswith("singly_connected: yes\n")


def test_cutset_walkthrough():
    code, out, _ = call("cutset", path("walkthrough.net"))
    assert code == 0 and out == "cutset: E G\ninstantiations: 4\n"


def test_cutset_trace():
    code, out, _ = call("cutset", path("walkthrough.net"), "--trace")
    lines = out.splitlines()
    assert lines[0] == "step 1: pruned A B C"
    assert lines[-2:] == ["cutset: E G", "instantiations: 4"]
    assert any(line.endswith("chose E") for line in lines)


def test_cutset_of_polytree_is_empty():
    code, out, _ = call("cutset", path("polytree.net"))
    assert out == "cutset:\ninstantiations: 1\n"


def test_infer_diamond_with_evidence():
    code, out, _ = call("infer", path("diamond.net"), "--query", "D,A", "--evidence", "A=t")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "cutset: A" and lines[1] == "instantiations: 2"
    # NodeId order: A before D, then value index
    assert lines[2:4] == ["P(A=t) = 1.000000000", "P(A=f) = 0.000000000"]
    assert lines[4].startswith("P(D=t) = ")


def test_infer_matches_oracle_text():
    a = call("infer", path("walkthrough.net"), "--query", "J,A", "--evidence", "J=j1")[1].splitlines()[2:]
    b = call("oracle", path("walkthrough.net"), "--query", "J,A", "--evidence", "J=j1")[1].splitlines()
    assert a == b and len(a) == 4


def test_infer_polytree_prior():
    net, _ = load_network(path("polytree.net"))
    root = next(x for x in range(len(net)) if not net.parents[x])
    _, out, _ = call("infer", path("polytree.net"), "--query", net.names[root])
    probs = [float(line.split("= ")[1]) for line in out.splitlines()[2:]]
    assert probs == pytest.approx(net.tables[root].tolist(), abs=5e-10)


@pytest.mark.parametrize("name", ["diamond.net", "chain.net", "walkthrough.net", "polytree.net", "random1.net", "random2.net", "random3.net"])
def test_compare_corpus(name):
    code, out, _ = call("compare", path(name))
    assert code == 0 and out.endswith("within_tolerance: yes\n")
    dev = float(out.splitlines()[2].split(": ")[1])
    assert dev <= 1e-9


def test_reduce_mvc_writes_network(tmp_path):
    target = tmp_path / "square.net"
    code, out, _ = call("reduce-mvc", path("square.graph"), "-o", str(target))
    assert code == 0 and out == f"wrote {target}: 12 nodes, 16 arcs, 8 evidence\n"
    net, ev = load_network(str(target))
    assert len(net) == 12 and len(ev) == 8
    code, out, _ = call("validate", str(target))
    assert code == 0


def test_check_reduction():
    code, out, _ = call("check-reduction", path("square.graph"))
    assert code == 0
    assert out == "min_vertex_cover: V1 V3\nmin_loop_cutset: V1 V3\nsizes: 2 2\nequivalent: yes\n"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["infer", "x.net"],  # missing --query
        ["cutset"],
    ],
)
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    assert err.startswith("error: Usage ") and err.count("\n") == 1


def test_malformed_evidence_is_usage():
    code, _, err = call("infer", path("diamond.net"), "--query", "D", "--evidence", "A")
    assert code == 1 and err.startswith("error: Usage")


def test_input_errors(tmp_path):
    code, _, err = call("validate", str(tmp_path / "missing.net"))
    assert code == 2 and err.startswith("error: FileError")

    bad = tmp_path / "bad.net"
    bad.write_text("node A { t, f }\narc A -> B\n")
    code, _, err = call("validate", str(bad))
    assert code == 2 and err.startswith("error: UnknownNodeReference")

    bad.write_text("node A { t, f }\ncpt A { 0.5, 0.6 }\n")
    code, _, err = call("validate", str(bad))
    assert code == 2 and err.startswith("error: CptRowNotNormalized")

    code, _, err = call("infer", path("diamond.net"), "--query", "Z")
    assert code == 2 and err.startswith("error: UnknownNode")

    code, _, err = call("infer", path("diamond.net"), "--query", "D", "--evidence", "A=maybe")
    assert code == 2


def test_inference_errors(tmp_path, monkeypatch):
    net = tmp_path / "impossible.net"
    net.write_text(
        "node A { t, f }\nnode B { t, f }\narc A -> B\n"
        "cpt A { 1.0, 0.0 }\ncpt B | A { t: 1.0, 0.0  f: 0.5, 0.5 }\n"
    )
    code, _, err = call("infer", str(net), "--query", "A", "--evidence", "B=f")
    assert code == 3 and err.startswith("error: ImpossibleEvidence")

    code, _, err = call("infer", path("walkthrough.net"), "--query", "A", "--max-instantiations", "3")
    assert code == 3 and err.startswith("error: InstantiationBudgetExceeded")

    monkeypatch.setenv("BNCUT_MAX_INST", "3")
    code, _, err = call("compare", path("walkthrough.net"))
    assert code == 3 and err.startswith("error: InstantiationBudgetExceeded")
    code, _, _ = call("infer", path("walkthrough.net"), "--query", "A", "--max-instantiations", "4")
    assert code == 0

    monkeypatch.setenv("BNCUT_MAX_INST", "lots")
    assert call("infer", path("walkthrough.net"), "--query", "A")[0] == 1


def test_console_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "bncut.cli", "infer", path("walkthrough.net"), "--query", "A,J", "--evidence", "D=d1"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first
