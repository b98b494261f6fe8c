import io
import json
import re
import subprocess
import sys

import pytest

from toeplitz_claw import theorems as th
from toeplitz_claw.cli import main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, json.loads(text.strip().splitlines()[-1])


def test_classify_figure_cocoonery():
    code, env = run_json("classify", "--n", "30", "--offsets", "5,10,15")
    assert code == 0 and env["schema_version"] == "1" and env["command"] == "classify"
    assert env["params"] == {"n": 30, "offsets": [5, 10, 15]}
    r = env["result"]
    assert r["claw_free"] is True and r["rule"] == "Cocoonery" and r["line_graph"] is False


def test_classify_witness_human():
    code, text = run("classify", "--n", "14", "--offsets", "1,2,3,5,8,13", "--witness")
    assert code == 0 and "(3;1,5,11)" in text and "claw-free:  no" in text


def test_classify_all_fields():
    code, env = run_json("classify", "--n", "10", "--offsets", "3,6", "--all")
    r = env["result"]
    assert code == 0 and r["chordal"] is True and r["interval"] is True and r["clique_number"] == 3
    assert r["line_graph_detail"]["component_multiset"] == [["Diamond", 1], ["K3", 2]]


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--n", "5", "--offsets", "5"],
        ["classify", "--n", "9", "--offsets", "3,2"],
        ["classify", "--n", "9", "--offsets", "2,2"],
        ["components", "--n", "5", "--offsets", "0,2"],
        ["export", "--n", "4", "--offsets", ""],
        ["sweep", "--check", "claw", "--n-max", "import os"],
    ],
)
def test_invalid_params_exit_2(argv, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_bad_offset_syntax_exits_2():
    with pytest.raises(SystemExit) as exc:
        run("classify", "--n", "9", "--offsets", "a,b")
    assert exc.value.code == 2


def test_oracle_bound_exit_3(monkeypatch):
    monkeypatch.setenv("TOEPLITZ_ORACLE_MAX_N", "10")
    code, _ = run("classify", "--n", "14", "--offsets", "1,2,3,5,8,13")
    assert code == 3
    code, _ = run("explain", "--n", "14", "--offsets", "1,2,3,5,8,13")
    assert code == 3


def test_sweep_discrepancy_exit_4(monkeypatch):
    monkeypatch.setattr(th, "classify_claw_free", lambda p, witness=False, bound=None: th.ClawFreeVerdict(
        True, th.ClawRule.ORACLE))
    code, text = run("sweep", "--k", "2", "--t-max", "4", "--n-max", "10", "--check", "claw", "--json")
    assert code == 4
    records = [json.loads(line) for line in text.splitlines()]
    assert any(r.get("record") == "discrepancy" for r in records)
    assert records[-1]["result"]["ok"] is False


def test_sweep_ok():
    code, text = run("sweep", "--k", "2", "--t-max", "10", "--check", "claw")
    assert code == 0 and text.strip().endswith("ok")
    code, _ = run("sweep", "--k", "3", "--check", "catalogue37", "--t-max", "12",
                  "--n-min", "2*tk-3", "--n-max", "2*tk-1")
    assert code == 0


def test_sweep_json_records():
    code, text = run("sweep", "--suite", "fibonacci", "--json", "--cells")
    lines = [json.loads(line) for line in text.splitlines()]
    assert code == 0
    assert [r["record"] for r in lines[:-1]].count("cell") == 8
    assert lines[-2]["record"] == "summary" and lines[-1]["command"] == "sweep"
    assert all(line == json.dumps(json.loads(line), sort_keys=True) for line in text.splitlines())


def test_components_commands():
    code, env = run_json("components", "--n", "30", "--offsets", "5,10,15")
    r = env["result"]
    assert r["method"] == "cocoonery" and r["component_count"] == 5
    assert all(c["target"] == {"n": 6, "offsets": [1, 2, 3]} for c in r["components"])
    _, env = run_json("components", "--n", "10", "--offsets", "4,6")
    assert env["result"]["component_count"] == 2
    assert all(c["target"] == {"n": 5, "offsets": [2, 3]} for c in env["result"]["components"])
    _, env = run_json("components", "--n", "5", "--offsets", "1,3")
    assert env["result"]["component_count"] == 1


def test_export_dot():
    code, text = run("export", "--n", "3", "--offsets", "1,2", "--format", "dot")
    assert code == 0 and text.startswith("graph ")
    nodes = re.findall(r"^\s+(\d+);$", text, re.M)
    edges = re.findall(r"^\s+(\d+) -- (\d+);$", text, re.M)
    assert nodes == ["1", "2", "3"] and edges == [("1", "2"), ("1", "3"), ("2", "3")]


def test_export_dot_parses_with_networkx():
    nx = pytest.importorskip("networkx")
    _, text = run("export", "--n", "10", "--offsets", "4,6")
    edges = [tuple(map(int, m)) for m in re.findall(r"(\d+) -- (\d+);", text)]
    g = nx.Graph(edges)
    assert g.number_of_nodes() == 10 and g.number_of_edges() == 10


def test_export_adjlist_and_json(tmp_path):
    _, text = run("export", "--n", "30", "--offsets", "5,10,15", "--format", "adjlist")
    assert text.splitlines()[0] == "1: 6 11 16"
    _, text = run("export", "--n", "5", "--offsets", "2,3", "--format", "json")
    env = json.loads(text)
    assert env["result"]["order"] == 5 and len(env["result"]["edges"]) == 5
    target = tmp_path / "g.dot"
    code, text = run("export", "--n", "5", "--offsets", "2,3", "--output", str(target))
    assert code == 0 and text == "" and "1 -- 3;" in target.read_text()


def test_export_unknown_format():
    with pytest.raises(SystemExit) as exc:
        run("export", "--n", "5", "--offsets", "2,3", "--format", "gml")
    assert exc.value.code == 2


def test_explain_human():
    code, text = run("explain", "--n", "8", "--offsets", "1,2,3,5")
    assert code == 0 and "SumBoundaryK4" in text and "claw-free=True" in text


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "toeplitz_claw", "classify", "--n", "5", "--offsets", "5"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2 and "invalid parameters" in proc.stderr
    proc = subprocess.run(
        [sys.executable, "-m", "toeplitz_claw", "--json", "classify", "--n", "12", "--offsets", "2,5,7"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["certificate"]["clause"] == "(i)"
