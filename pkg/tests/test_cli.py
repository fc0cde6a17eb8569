"""End-to-end command line behavior: reports, determinism, exit codes."""

import io
import json

import pytest

from linpres.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_list_report(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0
    obj = json.loads(out)
    assert obj["command"] == "list"
    assert "cubic-disc" in obj["forms"]
    assert "Sp6" in obj["corollaries"]
    assert "cubic-census-f5" in obj["cases"]


def test_eval_inline_vector(capsys):
    code, out, _ = run(capsys, "eval", "--form", "cubic-disc", "--field", "Fp:7",
                       "--vector", '["1","2","3","4"]')
    assert code == 0
    obj = json.loads(out)
    assert obj == {"command": "eval", "field": "Fp:7", "form": "cubic-disc", "value": "3"}


def test_eval_matrix_object_vector(capsys):
    entries = ["0", "1", "0", "0", "-1", "0", "0", "0", "0", "0", "0", "1", "0", "0", "-1", "0"]
    blob = json.dumps({"space": "alt", "params": {"n": 4}, "entries": entries})
    code, out, _ = run(capsys, "eval", "--form", "skew-pf:4", "--field", "Q", "--vector", blob)
    assert code == 0
    assert json.loads(out)["value"] == "1"


def test_eval_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO('["0","1","-1","0"]'))
    code, out, _ = run(capsys, "eval", "--form", "cubic-disc", "--field", "Q")
    assert code == 0
    assert json.loads(out)["value"] == "1"


def test_eval_file_and_out(tmp_path, capsys):
    src = tmp_path / "v.json"
    src.write_text('["1","0","0","1"]')
    dst = tmp_path / "report.json"
    code, out, _ = run(capsys, "eval", "--form", "cubic-disc", "--field", "Q",
                       "--in", str(src), "--out", str(dst))
    assert code == 0
    assert dst.read_text() == out
    assert json.loads(out)["value"] == "-27"


def test_eval_errors(capsys):
    code, _, err = run(capsys, "eval", "--form", "nosuch", "--field", "Q", "--vector", "[]")
    assert code == 2 and "error:" in err
    code, _, err = run(capsys, "eval", "--form", "cubic-disc", "--field", "Fp:4", "--vector", "[]")
    assert code == 2
    code, _, err = run(capsys, "eval", "--form", "cubic-disc", "--field", "Q", "--vector", '["1"]')
    assert code == 2
    code, _, err = run(capsys, "eval", "--form", "cubic-disc", "--field", "Q", "--vector", "not json")
    assert code == 2 and "JSON" in err


def test_eval_sp6_needs_kernel_point(capsys):
    coords = ["1"] + ["0"] * 19
    code, _, err = run(capsys, "eval", "--form", "sp6", "--field", "Fp:7",
                       "--vector", json.dumps(coords))
    assert code == 2 and "contraction" in err


def test_minimal_structure(capsys):
    code, out, _ = run(capsys, "minimal", "--form", "cubic-disc", "--field", "Q",
                       "--oracle", "structure", "--vector", '["1","3","3","1"]')
    assert code == 0
    obj = json.loads(out)
    assert obj["verdict"]["is_minimal"] is True
    assert obj["verdict"]["oracle"] == "structure"


def test_minimal_radical_and_rrs(capsys):
    vec = '["0","1","-1","0"]'
    for oracle in ("radical", "rrs"):
        code, out, _ = run(capsys, "minimal", "--form", "cubic-disc", "--field", "Fp:7",
                           "--oracle", oracle, "--vector", vec)
        assert code == 0
        assert json.loads(out)["verdict"]["is_minimal"] is False


def test_minimal_randomized_rules(capsys):
    vec = '["1","3","3","1"]'
    code, _, err = run(capsys, "minimal", "--form", "cubic-disc", "--field", "Fp:7",
                       "--oracle", "rrs", "--policy", "randomized", "--seed", "3",
                       "--vector", vec)
    assert code == 2 and "finite field" in err
    code, _, err = run(capsys, "minimal", "--form", "cubic-disc", "--field", "Q",
                       "--oracle", "rrs", "--policy", "randomized", "--vector", vec)
    assert code == 2 and "--seed" in err
    code, out, _ = run(capsys, "minimal", "--form", "cubic-disc", "--field", "Q",
                       "--oracle", "rrs", "--policy", "randomized", "--seed", "3",
                       "--vector", vec)
    assert code == 0
    assert json.loads(out)["verdict"]["is_minimal"] is True


def test_verify_deterministic_bytes(capsys):
    args = ("verify", "--corollary", "cubics", "--field", "Fp:7", "--seed", "11",
            "--elements", "4")
    code1, out1, err1 = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "wall time" in err1
    obj = json.loads(out1)
    assert obj["ok"] is True and obj["command"] == "verify"
    code3, out3, _ = run(capsys, "verify", "--corollary", "cubics", "--field", "Fp:7",
                         "--seed", "12", "--elements", "4")
    assert code3 == 0 and out3 != out1


def test_verify_case_insensitive_id(capsys):
    code, out, _ = run(capsys, "verify", "--corollary", "sl6", "--field", "Q",
                       "--seed", "2", "--elements", "1")
    assert code == 0
    assert json.loads(out)["corollary"] == "SL6"


def test_verify_out_of_scope(capsys):
    code, out, err = run(capsys, "verify", "--corollary", "e6", "--field", "Q", "--seed", "1")
    assert code == 2
    assert out == ""
    assert err.strip() == "out of scope: this family is not implemented"
    code, _, err = run(capsys, "verify", "--corollary", "E6", "--field", "Q", "--seed", "1")
    assert code == 2 and "out of scope" in err


def test_verify_unknown_corollary(capsys):
    code, _, err = run(capsys, "verify", "--corollary", "nope", "--field", "Q", "--seed", "1")
    assert code == 2 and "unknown corollary" in err


def test_bruteforce_cases(capsys):
    code, out, err = run(capsys, "bruteforce", "--case", "rk1fix-symm2-f3")
    assert code == 0
    obj = json.loads(out)
    assert obj["command"] == "bruteforce" and obj["ok"] is True
    assert obj["counts"]["line_fixers"] == 2
    assert "wall time" in err
    code, _, err = run(capsys, "bruteforce", "--case", "nope")
    assert code == 2 and "unknown case" in err


def test_polarize_quartic(capsys):
    pt = json.dumps([["1", "0", "0", "0", "0", "0", "0", "1"]] * 4)
    code, out, _ = run(capsys, "polarize", "--form", "hyperdet", "--field", "Q",
                       "--points", pt)
    assert code == 0
    assert json.loads(out)["value"] == "1"


def test_polarize_rejects_non_quartic(capsys):
    pt = json.dumps([["1", "0", "0", "0", "1", "0", "0", "0", "1"]] * 4)
    code, _, err = run(capsys, "polarize", "--form", "square-det:3", "--field", "Q",
                       "--points", pt)
    assert code == 2 and "quartic" in err


def test_polarize_needs_four_points(capsys):
    pt = json.dumps([["1", "0", "0", "0", "0", "0", "0", "1"]] * 3)
    code, _, err = run(capsys, "polarize", "--form", "hyperdet", "--field", "Q",
                       "--points", pt)
    assert code == 2 and "four" in err


def test_polarize_matches_evaluation_on_diagonal(capsys):
    # quadruple repetition of one point recovers the form value
    vec = ["1", "2", "0", "1", "3", "0", "1", "1"]
    code, out, _ = run(capsys, "polarize", "--form", "hyperdet", "--field", "Fp:7",
                       "--points", json.dumps([vec] * 4))
    assert code == 0
    code2, out2, _ = run(capsys, "eval", "--form", "hyperdet", "--field", "Fp:7",
                         "--vector", json.dumps(vec))
    assert json.loads(out)["value"] == json.loads(out2)["value"]
