import json

import pytest

from dualgalois.cli import EXIT_ERROR, EXIT_FINDING, EXIT_OK, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_two_conics(capsys, curve_dir, tmp_path):
    out_json = tmp_path / "r.json"
    svg = tmp_path / "r.svg"
    code, out, err = run(capsys, "compute", "--curve", curve_dir / "two_conics.json",
                         "--threads", 1, "--out", out_json, "--svg", svg)
    assert code == EXIT_OK
    assert "group order 4" in err
    data = json.loads(out_json.read_text())
    assert data["theorem1_verdict"] and data["group_order"] == 4
    assert svg.read_text().startswith("<?xml")


def test_compute_to_stdout(capsys, curve_dir):
    code, out, err = run(capsys, "compute", "--curve", curve_dir / "conic.json", "--threads", 1)
    assert code == EXIT_OK
    assert json.loads(out)["group_order"] == 2


def test_transpose(capsys, curve_dir):
    code, out, err = run(capsys, "transpose", "--curve", curve_dir / "fermat_cubic.json",
                         "--i", 1, "--j", 3, "--threads", 1)
    assert code == EXIT_OK
    cert = json.loads(out)
    assert cert["validated"] and cert["permutation"] == [3, 2, 1]


def test_transpose_across_components(capsys, curve_dir):
    code, out, err = run(capsys, "transpose", "--curve", curve_dir / "two_conics.json",
                         "--i", 1, "--j", 3, "--threads", 1)
    assert code == EXIT_ERROR
    assert "different components" in err


def test_local_table(capsys, curve_dir):
    code, out, err = run(capsys, "local", "--curve", curve_dir / "cuspidal_cubic.json")
    assert code == EXIT_OK
    rows = json.loads(out)["rows"]
    assert any(r["kind"] == "singular" and (r["r"], r["s"]) == (2, 3) for r in rows)


def test_local_at_point(capsys, curve_dir):
    code, out, err = run(capsys, "local", "--curve", curve_dir / "cuspidal_cubic.json", "--point", "0,0,1")
    assert code == EXIT_OK
    (row,) = json.loads(out)["rows"]
    assert row["local_degree_check"]["count_on_fiber"] == [2] * 8


def test_check_group(capsys, tmp_path):
    gens = tmp_path / "g.json"
    gens.write_text(json.dumps([[2, 1, 3, 4], [1, 2, 4, 3]]))
    code, out, err = run(capsys, "check-group", "--generators", gens)
    assert code == EXIT_OK
    assert json.loads(out)["passed"]


def test_check_group_finding(capsys, tmp_path):
    gens = tmp_path / "g.json"
    gens.write_text(json.dumps({"generators": [[2, 3, 4, 1]]}))
    code, out, err = run(capsys, "check-group", "--generators", gens)
    assert code == EXIT_FINDING
    assert not json.loads(out)["passed"]


def test_non_reduced_input(capsys, curve_dir, tmp_path):
    data = json.loads((curve_dir / "conic.json").read_text())
    data["factors"] = data["factors"] * 2
    data["degree_total"] = 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, err = run(capsys, "compute", "--curve", bad)
    assert code == EXIT_ERROR
    assert "error (non-reduced)" in err


def test_missing_file(capsys, tmp_path):
    code, out, err = run(capsys, "compute", "--curve", tmp_path / "nope.json")
    assert code == EXIT_ERROR


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["compute"])
