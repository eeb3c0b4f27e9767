import json

import pytest

from dehnfill import cli, gluing


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cartan_classify_positive(tmp_path, capsys):
    f = tmp_path / "a2.txt"
    f.write_text("size 2\ndomain rational\n2 -1\n-1 2\n")
    code, out, _ = run(["cartan", "classify", str(f)], capsys)
    assert code == 0
    assert json.loads(out)["checks"][0]["witnesses"]["type"] == "positive"


def test_cartan_classify_malformed(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("size 2\ndomain rational\n2 -1\n-1 q\n")
    code, _, err = run(["cartan", "classify", str(f)], capsys)
    assert code == 64 and "line 4" in err


def test_missing_file(capsys):
    code, _, err = run(["cartan", "classify", "/nonexistent/file"], capsys)
    assert code == 64 and "cannot read" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["coxeter", "relhyp"],
        ["coxeter", "relhyp", "--p", "4", "--bogus"],
        ["nonsense"],
        ["poset", "build", "--t", "1/2", "--compare", "cube"],
        ["poset", "build", "--t", "3/2"],
        ["poset", "build", "--t", "abc"],
        ["coxeter", "relhyp", "--p", "2"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == 64


def test_coxeter_relhyp(capsys):
    code, out, _ = run(["coxeter", "relhyp", "--p", "4"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "pass"
    assert doc["checks"][0]["witnesses"]["collection_size"] == 10


def test_poset_compare(capsys):
    code, out, _ = run(["poset", "build", "--t", "1", "--compare", "rectified"], capsys)
    assert code == 0
    assert json.loads(out)["checks"][0]["witnesses"]["f_vector"] == [10, 30, 30, 10]
    code, out, _ = run(["poset", "build", "--t", "1", "--compare", "bitruncated"], capsys)
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_reflect_verify_t3(capsys):
    code, out, _ = run(["--no-timings", "reflect", "verify", "--t", "t3"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["checks"][1]["witnesses"]["is_identity"] is True
    assert "timings" not in doc


def test_complex_build_with_files(tmp_path, capsys):
    f = tmp_path / "k6.txt"
    g = gluing.default_k6().relabeled({1: 3, 2: 1, 3: 5, 4: 2, 5: 4})
    f.write_text(gluing.format_k6_file(g))
    code, out, _ = run(["complex", "build", "--stage", "x", "--k6", str(f), "--k6-outer", str(f)], capsys)
    doc = json.loads(out)
    assert code == 0
    x = next(c for c in doc["checks"] if c["name"] == "x")
    assert x["witnesses"]["euler"] == 12


def test_complex_block(capsys):
    code, out, _ = run(["complex", "build", "--stage", "block"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["checks"][-1]["witnesses"]["boundary_components"] == 5


def test_bad_k6_file(tmp_path, capsys):
    f = tmp_path / "k6.txt"
    f.write_text("0 1 1\n")
    assert run(["complex", "build", "--stage", "block", "--k6", str(f)], capsys)[0] == 64


def test_determinism(capsys):
    a = run(["family", "verify"], capsys)[1]
    b = run(["family", "verify"], capsys)[1]
    da, db = json.loads(a), json.loads(b)
    assert set(da.pop("timings")) == set(db.pop("timings"))
    assert json.dumps(da, sort_keys=True) == json.dumps(db, sort_keys=True)


def test_report_all(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run(["report", "all", "--p", "3", "--out", str(out)], capsys)
    doc = json.loads(out.read_text())
    assert code == 0 and stdout.startswith("pass")
    checks = {c["name"]: c for c in doc["checks"]}
    assert checks["x"]["witnesses"]["euler"] == 12
    assert [s["classification"] for s in checks["tori"]["witnesses"]["sigma"]] == ["torus"] * 10
    assert checks["relative_hyperbolicity_p3"]["witnesses"]["result"] == {"result": "ok"}
    assert checks["meridian_holonomy"]["witnesses"]["is_identity"] is True
    assert all("claim" in c for c in doc["checks"])
    assert doc["config"] == {"command": "report all", "p": 3}
    assert checks["parameter"]["witnesses"]["point"]["exact"] is True


def test_report_all_p5(tmp_path, capsys):
    out = tmp_path / "r5.json"
    code, _, _ = run(["report", "all", "--p", "5", "--out", str(out)], capsys)
    doc = json.loads(out.read_text())
    assert code == 0
    ridges = next(c for c in doc["checks"] if c["name"] == "ridge_angles")
    assert ridges["witnesses"]["filling"]["cone_angle_over_pi"] == "6/5"


def test_verdict_aggregation():
    rep = cli.Report(cli.RunConfig("test"))
    rep.add("a", True, "x")
    assert rep.verdict == "pass"
    rep.add("b", "undecided", "x")
    assert rep.verdict == "undecided" and cli.EXIT[rep.verdict] == 2
    rep.add("c", False, "x")
    assert rep.verdict == "fail" and cli.EXIT[rep.verdict] == 1


def test_undecided_is_caught():
    from dehnfill.exactnum import UndecidedError

    rep = cli.Report(cli.RunConfig("test"))

    def boom():
        raise UndecidedError("budget")

    c = rep.timed("u", "x", boom)
    assert c.verdict == "undecided" and c.witnesses == {"reason": "budget"}


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "dehnfill", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
