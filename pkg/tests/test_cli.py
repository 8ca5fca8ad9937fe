import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from markovtfp.cli import main, parse_range, stabilize
from markovtfp.errors import ValidationError
from markovtfp.graphs import load_glue_spec

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_ideal_markov_prints_one_binomial(capsys):
    code, out, _ = run(capsys, "ideal", "markov", DATA / "independence.json")
    assert code == 0
    assert out.strip() == "x[(1,2)]*x[(2,1)] - x[(1,1)]*x[(2,2)]"
    code, out, _ = run(capsys, "ideal", "markov", DATA / "independence.json", "--format", "json")
    data = json.loads(out)
    assert data["degree_histogram"] == {"2": 1} and data["truncated"] is False


def test_verify_glue_path(capsys):
    code, out, _ = run(capsys, "tfp", "verify-glue", DATA / "path_glue.json")
    assert code == 0 and out.startswith("EQUAL")
    code, out, _ = run(capsys, "tfp", "verify-glue", DATA / "star_glue.json", "--format", "json")
    assert json.loads(out)["status"] == "EQUAL"


def test_malformed_json_exit_code(capsys):
    code, _, err = run(capsys, "ideal", "markov", DATA / "bad.json")
    assert code == 2
    assert "bad.json:3:14" in err


def test_resource_exit_code(capsys):
    code, _, err = run(capsys, "ideal", "markov", DATA / "k31.json", "--max-variables", "4")
    assert code == 3 and "limit" in err


def test_model_matrix_text(capsys):
    code, out, _ = run(capsys, "model", "matrix", DATA / "independence.json")
    assert code == 0
    assert out.splitlines() == ["4 4", "1 1 0 0", "0 0 1 1", "1 0 1 0", "0 1 0 1"]


def test_graph_glue(capsys, tmp_path):
    target = tmp_path / "g.json"
    code, _, _ = run(capsys, "graph", "glue", DATA / "path_glue.json", "--format", "json", "-o", target)
    assert code == 0
    g = json.loads(target.read_text())
    assert [v["id"] for v in g["nodes"]] == ["0", "e1#1/1", "e2#1/2"]


def test_tfp_compute_segre(capsys):
    x = DATA / "independence_x.json"
    code, out, _ = run(capsys, "tfp", "compute", x, x)
    assert code == 0
    assert out.strip() == "x[1;1,2]*x[1;2,1] - x[1;1,1]*x[1;2,2]"


def test_fiber_commands(capsys):
    g = DATA / "independence.json"
    code, out, _ = run(capsys, "fiber", "check", g, "--table", "[1,1,1,1]", "--format", "json")
    assert code == 0 and json.loads(out) == {"margins": [2, 2, 2, 2], "fiber_size": 3,
                                             "components": 1, "connected": True}
    code, out, _ = run(capsys, "fiber", "check", g, "--table", "[1,1,1,1]", "--moves", "[]",
                       "--format", "json")
    assert json.loads(out)["components"] == 3
    code, out, _ = run(capsys, "fiber", "enumerate", g, "--table", '{"1,1": 1, "2,2": 1}',
                       "--format", "json")
    assert json.loads(out)["size"] == 2
    code, out, _ = run(capsys, "fiber", "walk", g, "--table", "[1,1,1,1]", "--steps", "20",
                       "--seed", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 21 and rows[0]["step"] == "0"
    _, again, _ = run(capsys, "fiber", "walk", g, "--table", "[1,1,1,1]", "--steps", "20",
                      "--seed", "4", "--format", "csv")
    assert again == out
    code, _, _ = run(capsys, "fiber", "check", g, "--table", "[1,1]")
    assert code == 2


def test_monoid_commands(capsys):
    code, out, _ = run(capsys, "monoid", "divides", DATA / "u2.json", DATA / "u3.json", "--format", "json")
    assert code == 0 and json.loads(out)["pi"] == [1, 1, 2]
    code, out, _ = run(capsys, "monoid", "wqo-search", DATA / "sequence.json", "--format", "json")
    res = json.loads(out)
    assert (res["i"], res["j"]) == (1, 2)
    code, out, _ = run(capsys, "monoid", "rank-one", "--n", "2", "--s", "3", "--format", "json")
    assert len(json.loads(out)["generators"]) == 12
    code, out, _ = run(capsys, "monoid", "rank-one", "--n", "2", "--s", "3", "--check-bound",
                       "--format", "json")
    assert code == 0 and json.loads(out)["generation_bound_check"]["equal"] is True


def test_stabilize_star(capsys):
    code, out, _ = run(capsys, "stabilize", DATA / "star_glue.json", "--copies", "1..4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.strip())))
    assert [r["max_degree"] for r in rows] == ["0", "2", "2", "2"]
    assert [r["n_generators"] for r in rows] == ["0", "2", "18", "110"]
    assert all(r["status"] == "ok" for r in rows)


def test_stabilize_isolated_node_is_zero():
    report = stabilize(load_glue_spec(DATA / "isolated_glue.json"), [1, 2, 3])
    assert [r["n_generators"] for r in report["instances"]] == [0, 0, 0]
    assert all(r["degree_histogram"] == {} for r in report["instances"])
    assert "not proven" in report["plateau"]["note"]


def test_stabilize_records_skips():
    report = stabilize(load_glue_spec(DATA / "star_glue.json"), [1, 5], max_variables=16)
    assert [r["status"] for r in report["instances"]] == ["ok", "skipped"]


def test_parse_range():
    assert parse_range("1..3") == [1, 2, 3]
    assert parse_range("1,2,5") == [1, 2, 5]
    with pytest.raises(ValidationError):
        parse_range("3..1")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "markovtfp.cli", "monoid", "rank-one", "--n", "2", "--s", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "x[11]*x[22] - x[12]*x[21]"
