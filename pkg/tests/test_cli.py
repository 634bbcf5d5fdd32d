import json
from pathlib import Path

import pytest

from rheight.cli import (
    EXIT_FAIL,
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_PASS,
    Outcome,
    RunConfig,
    main,
    read_input,
)
from rheight.io import csv_text, dumps, rational_from_json, rational_to_json
from fractions import Fraction

INPUTS = Path(__file__).resolve().parent.parent / "scripts" / "inputs"


def test_classify_writes_reports(tmp_path, capsys):
    code = main(["classify", str(INPUTS / "cubic_nine.poly"), str(INPUTS / "typeZ.poly"), "--out", str(tmp_path)])
    assert code == EXIT_PASS
    rep = json.loads((tmp_path / "cubic_nine.report.json").read_text())
    assert rep["schema_version"] == 1
    assert rational_from_json(rep["report"]["p_c_prime"]) == 6
    z = json.loads((tmp_path / "typeZ.report.json").read_text())
    assert rational_from_json(z["report"]["hr"]) == Fraction(7, 3)
    assert "p_c' = 6" in capsys.readouterr().out


def test_empty_file_is_input_error(tmp_path):
    bad = tmp_path / "empty.poly"
    bad.write_text("# nothing here\n")
    assert main(["classify", str(bad), "--out", str(tmp_path / "o")]) == EXIT_INPUT
    assert (tmp_path / "o" / "empty.error.json").exists()


def test_syntax_error_and_good_file_together(tmp_path):
    bad = tmp_path / "bad.poly"
    bad.write_text("x1^ + 2\n")
    code = main(["classify", str(bad), str(INPUTS / "cubic_nine.poly"), "--out", str(tmp_path / "o")])
    assert code == EXIT_INPUT
    assert (tmp_path / "o" / "cubic_nine.report.json").exists()


def test_missing_file(tmp_path):
    assert main(["classify", str(tmp_path / "nope.poly"), "--out", str(tmp_path)]) == EXIT_INPUT


def test_read_input_options(tmp_path):
    f = tmp_path / "p.poly"
    f.write_text("# comment\nm: 3\nn1: flat\nx2^3 +\n x1^11  # trailing\n")
    expr, opts = read_input(f)
    assert expr == "x2^3 + x1^11"
    assert opts == {"m": "3", "n1": "flat"}


def test_bad_arguments():
    assert main(["verify", "--suite", "nonsense"]) == EXIT_INPUT
    assert main(["verify", "--lambda-min-exp", "9", "--lambda-max-exp", "8"]) == EXIT_INPUT
    assert main(["verify", "--suite", "lemmas", "--only", "as7"]) == EXIT_INPUT


def test_exit_code_precedence():
    out = Outcome()
    for code in (EXIT_INCONCLUSIVE, EXIT_FAIL, EXIT_PASS):
        out.note(code)
    assert out.code == EXIT_FAIL
    out.note(EXIT_INPUT)
    out.note(EXIT_FAIL)
    assert out.code == EXIT_INPUT


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(lambda_min_exp=5, lambda_max_exp=5)


def test_verify_classify_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verify", "--suite", "classify", "--out", str(a)]) == EXIT_PASS
    assert main(["verify", "--suite", "classify", "--out", str(b)]) == EXIT_PASS
    for name in ("verify_classify.json", "family_grid.csv", "manifest.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    manifest = json.loads((a / "manifest.json").read_text())
    assert {x["path"] for x in manifest["artifacts"]} == {"family_grid.csv", "verify_classify.json"}
    assert manifest["metadata"] == "metadata.json"
    assert "created" in json.loads((a / "metadata.json").read_text())


def test_verify_dyadic_seed_is_deterministic(tmp_path):
    args = ["verify", "--suite", "lemmas", "--only", "dyadic_sum,osc_sum", "--seed", "42"]
    assert main(args + ["--out", str(tmp_path / "a")]) == EXIT_PASS
    assert main(args + ["--out", str(tmp_path / "b")]) == EXIT_PASS
    assert (tmp_path / "a" / "verify_lemmas.json").read_bytes() == (tmp_path / "b" / "verify_lemmas.json").read_bytes()
    rows = (tmp_path / "a" / "lemma_osc_sum_geometric.csv").read_text().splitlines()
    assert rows[0].startswith("lemma_id,level,t,M")


def test_family_grid_command(tmp_path):
    assert main(["family-grid", "--out", str(tmp_path)]) == EXIT_PASS
    lines = (tmp_path / "family_grid.csv").read_text().splitlines()
    assert lines[0] == "A,B,n,c0,hr,p_c_prime,hr_closed_form,match"
    assert len(lines) == 1 + 8 * (1 + 2 + 3)


def test_rational_json_roundtrip():
    q = Fraction(-22, 7)
    d = rational_to_json(q)
    assert d["decimal"].startswith("-3.142857")
    assert rational_from_json(json.loads(json.dumps(d))) == q


def test_nonfinite_floats_serialise():
    assert json.loads(dumps({"x": float("inf")}))["x"] == "inf"


def test_csv_fractions():
    assert csv_text([{"a": Fraction(1, 3), "b": 2}]) == "a,b\n1/3,2\n"
