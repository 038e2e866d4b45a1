import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plumbdga import cli
from plumbdga.cli import GraphSyntaxError, format_graph, parse_graph, read_graph, run
from plumbdga.plumbing import PlumbingGraph
from plumbdga.report import Report

TRIANGLE = """\
# a triangle with one chord outside the tree
vertices 3
edge 1 2
edge 2 3
edge 3 1
tree 1 2
tree 2 3
"""


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def triangle(tmp_path):
    path = tmp_path / "c3.graph"
    path.write_text(TRIANGLE)
    return str(path)


# -- graph files -------------------------------------------------------------------

def test_parse_triangle():
    g = parse_graph(TRIANGLE)
    assert g == PlumbingGraph(3, [(1, 2), (2, 3), (3, 1)], {0, 1})


def test_parse_genus_and_reversed_tree_edge():
    g = parse_graph("vertices 2\ngenus 1 0\nedge 1 2\ntree 2 1\n")
    assert g.genus == (1, 0) and g.tree == frozenset({0})


def test_parse_reorders_with_warning():
    g, warns = read_graph("vertices 3\nedge 3 1\nedge 1 2\nedge 2 3\ntree 1 2\ntree 2 3\n")
    assert g.edges == ((1, 2), (2, 3), (3, 1))
    assert warns


@pytest.mark.parametrize("text,line,column,fragment", [
    ("vertices 2\nedge 1 7\n", 2, 8, "out of range"),
    ("vertices 2\nedge 1 x\n", 2, 8, "integer"),
    ("vertices 2\nloop 1\n", 2, 1, "unknown directive"),
    ("edge 1 2\n", 1, 1, "before vertices"),
    ("vertices 2\nedge 1 2\ntree 1 2\ntree 1 2\n", 4, 1, "duplicate tree edge"),
    ("vertices 3\nedge 1 2\ntree 2 3\n", 3, 1, "not a listed edge"),
    ("# nothing\n", 1, 1, "missing vertices"),
    ("vertices 2\ngenus 1\nedge 1 2\ntree 1 2\n", 2, 1, "genus lists 1 values"),
    ("vertices 2\n  edge 1 2 3\n", 2, 3, "SRC DST"),
])
def test_positioned_errors(text, line, column, fragment):
    with pytest.raises(GraphSyntaxError) as err:
        read_graph(text)
    assert (err.value.line, err.value.column) == (line, column)
    assert fragment in str(err.value)


def test_graph_level_errors_are_syntax_errors():
    with pytest.raises(GraphSyntaxError, match="not connected"):
        read_graph("vertices 2\n")


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 4))
    tree = [(draw(st.integers(1, v - 1)), v) for v in range(2, n + 1)]
    tree = [e if draw(st.booleans()) else e[::-1] for e in tree]
    extra = draw(st.lists(st.tuples(st.integers(1, n), st.integers(1, n)), max_size=3))
    genus = tuple(draw(st.lists(st.integers(0, 3), min_size=n, max_size=n)))
    return PlumbingGraph(n, tree + extra, set(range(len(tree))), genus)


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_format_parse_round_trip(g):
    assert parse_graph(format_graph(g)) == g


# -- commands ------------------------------------------------------------------------

def test_present(triangle):
    code, out, _ = invoke("present", "--graph", triangle)
    assert code == 0
    assert "d tau1 = e1 - t1 + c3 c3* - t1 c1* c1" in out


def test_present_models(tmp_path, triangle):
    code, out, _ = invoke("present", "--graph", triangle, "--model", "mpp", "--field", "3")
    assert code == 0 and "d tau1" in out
    a2 = tmp_path / "a2.graph"
    a2.write_text("vertices 2\nedge 1 2\ntree 1 2\n")
    code, out, _ = invoke("present", "--graph", str(a2), "--model", "ginzburg")
    assert code == 0 and "d tau1 = - c1* c1" in out
    code, _, err = invoke("present", "--graph", triangle, "--model", "ginzburg")
    assert code == 2 and "trees only" in err


def test_verify(triangle):
    code, out, _ = invoke("verify", "--graph", triangle)
    assert code == 0
    assert out.strip().endswith("checks passed")


def test_verify_failure_exit_code(triangle, monkeypatch):
    def broken(g, field):
        r = Report("verify")
        r.add("tau1", False, "e1")
        return r
    monkeypatch.setattr(cli, "verify_graph", broken)
    code, out, _ = invoke("verify", "--graph", triangle)
    assert code == 1
    assert "tau1" in out


def test_input_errors(tmp_path, triangle):
    bad = tmp_path / "bad.graph"
    bad.write_text("vertices 2\nedge 1 9\n")
    code, _, err = invoke("verify", "--graph", str(bad))
    assert code == 2 and "line 2, column 8" in err
    assert invoke("verify", "--graph", str(tmp_path / "absent"))[0] == 2
    assert invoke("verify", "--graph", triangle, "--field", "4")[0] == 2
    assert invoke("internal", "--n", "0")[0] == 2
    assert invoke("reduce-genus", "--g", "0")[0] == 2
    assert invoke("count-reps", "--graph", triangle, "--field", "3", "--t", "3")[0] == 2
    assert invoke("nonsense")[0] == 2


def test_internal_command():
    code, out, _ = invoke("internal", "--n", "2", "--max-p", "2", "--potentials", "0,1")
    assert code == 0
    assert "d c1_1_1" in out


def test_reduce_genus_two():
    code, out, _ = invoke("--json", "reduce-genus", "--g", "2")
    data = json.loads(out)
    assert code == 0 and data["status"] == "pass"
    assert data["automorphisms"] >= 8
    assert data["destabilizations"] == 8
    assert len(data["log"]) == data["automorphisms"] + data["destabilizations"]


def test_reduce_genus_text_log():
    code, out, _ = invoke("reduce-genus", "--g", "1", "--log")
    assert code == 0
    assert "automorphism" in out and "destabilize" in out


@pytest.mark.parametrize("case", ["1", "2", "3"])
def test_destab_demo(case):
    assert invoke("destab-demo", "--case", case)[0] == 0


def test_count_reps(triangle):
    code, out, _ = invoke("count-reps", "--graph", triangle, "--field", "3")
    assert code == 0 and out.strip() == "133"
    code, out, _ = invoke("--json", "count-reps", "--graph", triangle, "--field", "2")
    data = json.loads(out)
    assert data["count"] == 27
    assert data["dimension_vector"] == [1, 1, 1]
    assert data["t"] == [1, 1, 1]


def test_json_is_stable_apart_from_timing(triangle):
    runs = []
    for _ in range(2):
        code, out, _ = invoke("--json", "verify", "--graph", triangle)
        data = json.loads(out)
        assert code == 0
        assert set(data) >= {"command", "inputs", "warnings", "status", "checks", "elapsed_ms"}
        data.pop("elapsed_ms")
        runs.append(data)
    assert runs[0] == runs[1]
    assert all(set(c) >= {"name", "status"} for c in runs[0]["checks"])


def test_json_error_report(tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("vertices x\n")
    code, out, _ = invoke("--json", "verify", "--graph", str(bad))
    data = json.loads(out)
    assert code == 2
    assert data["status"] == "error"
    assert "line 1, column 10" in data["error"]
