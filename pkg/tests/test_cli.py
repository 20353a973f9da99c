import json
import subprocess
import sys

import pytest

from gsforge.cli import family_graph, main
from gsforge.graphs import Graph, format_graph, make_family, parse_graph
from gsforge.synthesis import Circuit, verify_circuit


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_graph(tmp_path, g: Graph, name: str = "g.txt") -> str:
    path = tmp_path / name
    path.write_text(format_graph(g))
    return str(path)


# ---------------------------------------------------------------- synthesize

def test_synthesize_rgs_ordering(capsys):
    code, out, _ = run(capsys, "synthesize", "--family", "rgs_ordering", "--n", "10")
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["emitter_cnots"] == 8
    assert data["summary"]["n_emitters"] == 2 and data["summary"]["verified"]
    circuit = Circuit.from_dict(data["circuit"])
    assert verify_circuit(circuit, family_graph("rgs_ordering", 10))


@pytest.mark.parametrize("opt", ["naive", "h1", "h2", "brute"])
def test_synthesize_file_each_optimizer(capsys, tmp_path, opt):
    g = make_family("cycle", 6)
    code, out, _ = run(capsys, "synthesize", write_graph(tmp_path, g), "--optimizer", opt)
    assert code == 0
    data = json.loads(out)
    assert verify_circuit(Circuit.from_dict(data["circuit"]), g)
    assert data["summary"]["optimizer"] == opt


def test_synthesize_with_ordering(capsys, tmp_path):
    g = make_family("path", 4)
    code, out, _ = run(capsys, "synthesize", write_graph(tmp_path, g), "--ordering", "2,4,1,3")
    assert code == 0
    c = Circuit.from_dict(json.loads(out)["circuit"])
    assert c.ordering == [2, 4, 1, 3]
    assert verify_circuit(c, g, [2, 4, 1, 3])


def test_synthesize_disconnected_per_component(capsys, tmp_path):
    g = Graph(7, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 7), (4, 7)])
    code, out, _ = run(capsys, "synthesize", write_graph(tmp_path, g))
    assert code == 0
    data = json.loads(out)
    parts = data["circuit"]["components"]
    assert data["summary"]["components"] == 2
    assert sorted(v for p in parts for v in p["vertices"]) == list(range(1, 8))
    total = 0
    for p in parts:
        sub, _ = g.induced(p["vertices"])
        c = Circuit.from_dict({k: v for k, v in p.items() if k != "vertices"})
        assert verify_circuit(c, sub)
        code, one, _ = run(capsys, "synthesize", write_graph(tmp_path, sub, "sub.txt"))
        total += json.loads(one)["summary"]["emitter_cnots"]
    assert data["summary"]["emitter_cnots"] == total


def test_synthesize_text_and_out(capsys, tmp_path):
    target = tmp_path / "circ.txt"
    code, out, _ = run(capsys, "synthesize", "--family", "path", "--n", "3",
                       "--format", "text", "--out", str(target))
    assert code == 0
    assert json.loads(out)["emitter_cnots"] == 0
    assert target.read_text().strip()


def test_synthesize_from_stdin():
    proc = subprocess.run([sys.executable, "-m", "gsforge.cli", "synthesize", "-"],
                          input="3\n1 2\n2 3\n", capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["verified"]


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n1 9\n")
    assert run(capsys, "synthesize", str(bad))[0] == 2
    assert run(capsys, "synthesize", "--family", "path", "--n", "3", "--ordering", "1,x")[0] == 2
    assert run(capsys, "synthesize", "--family", "path", "--n", "3", "--ordering", "1,1,2")[0] == 2
    assert run(capsys, "synthesize")[0] == 2
    assert run(capsys, "benchmark", "--samples", "0")[0] == 2


def test_budget_exit_code(capsys, monkeypatch):
    import gsforge.cli as cli
    from gsforge.orbits import OrbitBudgetExceeded

    def exhausted(*_a, **_k):
        raise OrbitBudgetExceeded("too many members")

    monkeypatch.setattr(cli, "orbit_report", exhausted)
    code, _, err = run(capsys, "orbit", "--family", "rgs", "--n", "4")
    assert code == 3 and "budget" in err


# ---------------------------------------------------------------- orbit / recognize / families

def test_orbit_rgs_non_isomorphic(capsys):
    code, out, _ = run(capsys, "orbit", "--family", "rgs", "--n", "5", "--non-isomorphic")
    assert code == 0
    blocks = [b for b in out.split("# member ") if b.strip()]
    summary = json.loads(out.strip().splitlines()[-1])
    assert summary["n_members"] == 8 and summary["iso_policy"] == "discard"
    assert len(blocks) == 8
    first = blocks[0].split("\n", 1)[1]
    assert parse_graph(first.split("\n\n")[0]) == make_family("rgs", 5)


def test_orbit_counts(capsys):
    code, out, _ = run(capsys, "orbit", "--count", "--family", "complete", "--n", "8")
    assert code == 0 and json.loads(out)["l"] == 9
    code, out, _ = run(capsys, "orbit", "--count", "--family", "path", "--n", "4")
    assert json.loads(out)["e"] == 44


def test_orbit_json(capsys):
    code, out, _ = run(capsys, "orbit", "--family", "star", "--n", "4", "--format", "json")
    data = json.loads(out)
    assert data["summary"]["n_members"] == 5 == len(data["members"]) == data["summary"]["l"]


def test_recognize(capsys):
    for fam, n, expect in [("complete", 6, True), ("wheel", 5, False), ("path", 2, True)]:
        code, out, _ = run(capsys, "recognize", "--family", fam, "--n", str(n))
        assert code == 0 and json.loads(out)["is_circle"] is expect


def test_families(capsys):
    code, out, _ = run(capsys, "families", "--family", "rgs", "--n", "3")
    assert code == 0 and parse_graph(out) == make_family("rgs", 3)
    code, out, _ = run(capsys, "families", "--family", "rgs_many_leaves_ordering",
                       "--n", "3", "--leaves", "2")
    assert parse_graph(out).n == 9


# ---------------------------------------------------------------- benchmark

def test_benchmark_csv_is_deterministic(capsys, tmp_path, monkeypatch):
    args = ["benchmark", "--n-p", "6:7", "--samples", "3", "--seed", "5",
            "--optimizers", "h1,h2"]
    texts = []
    for threads in ("1", "2"):
        monkeypatch.setenv("GSF_THREADS", threads)
        target = tmp_path / f"b{threads}.csv"
        assert run(capsys, *args, "--out", str(target))[0] == 0
        texts.append(target.read_bytes())
    assert texts[0] == texts[1]
    lines = texts[0].decode().splitlines()
    assert lines[0] == "# gsforge-benchmark v1"
    assert lines[1] == ("graph_id,n_p,n_e,n_edges,naive_cnots,naive_reduction,"
                        "h1_cnots,h1_reduction,h2_cnots,h2_reduction")
    assert len(lines) == 2 + 6


def test_benchmark_json_summary(capsys, tmp_path):
    summary = tmp_path / "s.json"
    code, out, _ = run(capsys, "benchmark", "--n-p", "7", "--samples", "4",
                       "--format", "json", "--summary", str(summary))
    assert code == 0
    data = json.loads(out)
    assert data["7"]["samples"] == 4 and "h1" in data["7"]
    assert json.loads(summary.read_text()) == data
