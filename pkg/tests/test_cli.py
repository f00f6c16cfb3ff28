import json

import pytest

from canonlab import corpus, verifier
from canonlab.cli import main
from canonlab.curve import curve_to_dict
from canonlab.verifier import Statement


@pytest.fixture
def spec_file(tmp_path):
    def write(obj, name="spec.json"):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return write


@pytest.fixture
def binary3(spec_file):
    return spec_file(curve_to_dict(corpus.binary(3)))


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_build_genus_connectivity(capsys, binary3, spec_file):
    code, out, _ = run(capsys, ["build", binary3])
    assert code == 0 and len(out["components"]) == 2
    code, out, _ = run(capsys, ["genus", binary3])
    assert code == 0 and out["genus"] == 3
    code, out, _ = run(capsys, ["connectivity", binary3])
    assert out["connectivity"] == 4 and out["three_connected"]
    fam = spec_file({"family": "binary", "genus": "3..5"}, "fam.json")
    code, out, _ = run(capsys, ["build", fam])
    assert code == 0 and len(out) == 3
    code, _, err = run(capsys, ["genus", fam])
    assert code == 1 and "exactly one" in err


def test_sections(capsys, binary3):
    code, out, _ = run(capsys, ["sections", binary3, "--k", "2"])
    assert code == 0 and out["h0"] == 6 and out["h1"] == 0 and out["h1_duality"] == 0
    code, out, _ = run(capsys, ["sections", binary3, "--on", "C1", "--twist", "C1:5:2", "--basis"])
    assert code == 0 and out["degree"] == 4 and len(out["basis"]["sections"]) == out["h0"]


def test_normality_and_secant(capsys, spec_file):
    f = spec_file(curve_to_dict(corpus.binary(4)))
    code, out, _ = run(capsys, ["normality", f, "--max-k", "3"])
    assert code == 0 and out["projectively_normal_through_k_max"]
    code, out, _ = run(capsys, ["secant", f, "--budget", "20"])
    assert code == 0 and out["found"] and len(out["secant"]["points"]) == 2


def test_verify(capsys, tmp_path, spec_file):
    f = spec_file(curve_to_dict(corpus.four_component((1, 0, 0, 0))))
    report = tmp_path / "rep.json"
    code, out, _ = run(capsys, ["verify", "--statement", "THM_MAIN", "--spec", f,
                                "--decomposition", "X1|X2,X3,X4", "--report", str(report)])
    assert code == 0 and out["per_statement"]["THM_MAIN"]["confirmed"] == 1
    data = json.loads(report.read_text())
    assert data["certificates"][0]["instance"]["A"] == ["X1"]
    code, out, _ = run(capsys, ["verify", "--statement", "THM_TEO2", "--spec", f,
                                "--divisor", "X1:5"])
    assert code == 0 and out["per_statement"]["THM_TEO2"]["hypothesis_not_met"] == 1


def test_corpus_command(capsys, tmp_path):
    report = tmp_path / "c.json"
    code, out, _ = run(capsys, ["corpus", "--family", "binary", "--genus", "3..4",
                                "--statements", "LEM_3CONN,THM_MAIN", "--report", str(report)])
    assert code == 0 and out["violations"] == 0 and out["certificates"] > 0
    assert json.loads(report.read_text())["summary"]["certificates"] == out["certificates"]


def test_violation_exit_code(capsys, monkeypatch, binary3):
    def broken(ctx, inst, rec):
        rec.conclude("never", False)

    monkeypatch.setitem(verifier._HANDLERS, Statement.LEM_3CONN, broken)
    code, out, _ = run(capsys, ["verify", "--statement", "LEM_3CONN", "--spec", binary3])
    assert code == 2 and out["violations"] == 1


@pytest.mark.parametrize("argv", [
    ["genus", "/nonexistent.json"],
    ["sections", "SPEC", "--twist", "C1"],
    ["verify", "--statement", "NOPE", "--spec", "SPEC"],
    ["corpus", "--family", "binary", "--genus", "1..2"],
    ["bogus"],
])
def test_errors_exit_one(capsys, binary3, argv):
    argv = [binary3 if a == "SPEC" else a for a in argv]
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == 1


def test_invalid_curve_exit_one(capsys, spec_file):
    d = curve_to_dict(corpus.binary(3))
    d["nodes"].append(dict(d["nodes"][0], id="dup"))
    code, _, err = run(capsys, ["genus", spec_file(d)])
    assert code == 1 and "error" in err


@pytest.mark.parametrize("data", [{"components": [{"x": 1}]}, {"nodes": []}, [1, 2],
                                  {"components": ["A", "B"], "nodes": [{"a": {"comp": "A", "t": "1/0"}}]}])
def test_malformed_spec_exit_one(capsys, spec_file, data):
    code, _, err = run(capsys, ["genus", spec_file(data)])
    assert code == 1 and "error" in err


def test_bare_component_ids(capsys, spec_file):
    f = spec_file({"components": ["C1", "C2"],
                   "nodes": [{"id": "n1", "a": {"comp": "C1", "t": "0"}, "b": {"comp": "C2", "t": "0"}},
                             {"id": "n2", "a": {"comp": "C1", "t": "inf"}, "b": {"comp": "C2", "t": "1/2"}}]})
    code, out, _ = run(capsys, ["genus", f])
    assert code == 0 and out["genus"] == 1
