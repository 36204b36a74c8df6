import json

import pytest

from vertexforge.cli import EXIT_ERROR, EXIT_INTEGRALITY, EXIT_OK, main
from vertexforge.toric import preset


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_presets(capsys):
    code, out, _ = run(capsys, "presets")
    assert code == EXIT_OK
    for name in ("conifold", "cycle", "flopF1", "localP2"):
        assert name in out


def test_compute_conifold_json(capsys):
    code, out, _ = run(capsys, "compute", "--preset", "conifold:0", "--max-total-degree", "3", "--output", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["gv"]["entries"] == [{"degree": [1], "genus": 0, "n": 1}]
    assert [f["degree"] for f in doc["F"]] == [[1], [2], [3]]


def test_gv_local_p2_with_class_map(capsys):
    code, out, _ = run(capsys, "gv", "--preset", "localP2", "--max-total-degree", "3", "--class-map", "sum")
    assert code == EXIT_OK
    assert "(1)  g=0  n=3" in out
    assert "(3)  g=1  n=-10" in out
    assert "Z_d" not in out


def test_csv_output(capsys):
    code, out, _ = run(
        capsys, "gv", "--preset", "localP2", "--max-total-degree", "2", "--class-map", "sum", "--output", "csv"
    )
    assert code == EXIT_OK
    assert out.splitlines() == ["beta1,genus,n", "1,0,3", "2,0,-6"]


def test_componentwise_bound(capsys):
    code, out, _ = run(capsys, "compute", "--preset", "localP2", "--max-degree", "1,1,0", "--output", "json")
    assert code == EXIT_OK
    degs = [f["degree"] for f in json.loads(out)["F"]]
    assert degs == [[1, 0, 0], [0, 1, 0], [1, 1, 0]]


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--graph", "/nonexistent/graph.json"],
        ["compute", "--preset", "nosuch"],
        ["compute", "--preset", "localP2", "--max-degree", "1,1"],
        ["compute", "--preset", "localP2", "--max-total-degree", "0"],
        ["compute"],
        ["crosscheck", "--weight-bound", "9"],
    ],
)
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_ERROR
    assert err.startswith("error:")


def test_bad_json_reports_position(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text('{"vertices": [\n  1,,\n]}')
    code, _, err = run(capsys, "compute", "--graph", str(p))
    assert code == EXIT_ERROR
    assert f"{p}:2:" in err


def test_graph_file_round_trip(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text(preset("conifold:1").to_json())
    code, out, _ = run(capsys, "gv", "--graph", str(p), "--max-total-degree", "3", "--output", "csv")
    assert code == EXIT_OK
    assert out == "e,genus,n\n1,0,-1\n"


def test_from_fan(capsys, tmp_path):
    fan = {"cones": [[[0, 0, 1], [1, 0, 1], [0, 1, 1]], [[0, 0, 1], [0, 1, 1], [-1, -1, 1]], [[0, 0, 1], [-1, -1, 1], [1, 0, 1]]]}
    p = tmp_path / "fan.json"
    p.write_text(json.dumps(fan))
    code, out, _ = run(capsys, "from-fan", str(p))
    assert code == EXIT_OK
    g = json.loads(out)
    internal = [e for e in g["edges"] if e.get("internal", True) and e["head"].startswith("v")]
    assert len(internal) == 3
    code, out, _ = run(capsys, "gv", "--fan", str(p), "--max-total-degree", "2", "--class-map", "sum", "--output", "csv")
    assert code == EXIT_OK and out.splitlines()[1:] == ["1,0,3", "2,0,-6"]


def test_from_fan_rejects_singular(capsys, tmp_path):
    p = tmp_path / "fan.json"
    p.write_text(json.dumps({"cones": [[[0, 0, 1], [2, 0, 1], [0, 1, 1]]]}))
    code, _, err = run(capsys, "from-fan", str(p))
    assert code == EXIT_ERROR and "NotSmooth" in err


def test_integrality_exit_code(capsys, monkeypatch):
    from vertexforge import amplitude, cli

    def fail(*a, **k):
        raise amplitude.IntegralityViolation((1,), None, "seeded")

    monkeypatch.setattr(cli, "gv_table", fail)
    code, _, err = run(capsys, "gv", "--preset", "conifold:0", "--max-total-degree", "1")
    assert code == EXIT_INTEGRALITY
    assert "integrality violation" in err


@pytest.mark.parametrize("bound,count", [(0, 1), (2, 64)])
def test_crosscheck(capsys, bound, count):
    code, out, _ = run(capsys, "crosscheck", "--weight-bound", str(bound))
    assert code == EXIT_OK
    assert f"{count} triples, 0 mismatches" in out


def test_selftest_json(capsys):
    code, out, _ = run(capsys, "selftest", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["ok"] and len(doc["checks"]) == 12


def test_threads_byte_identical(capsys):
    outs = []
    for n in ("1", "3"):
        code, out, _ = run(capsys, "compute", "--preset", "flopF1", "--max-total-degree", "2", "--output", "json", "--threads", n)
        assert code == EXIT_OK
        outs.append(out)
    assert outs[0] == outs[1]
