import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from toruslab.cli import (
    TorusDocument,
    document_from_torus,
    parse_expression,
    parse_input,
    run_command,
)
from toruslab.errors import ParseError, ValidationError
from toruslab.exactfield import NumberField

from conftest import TORI


def _run(argv, capsys):
    code = run_command(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# expression parsing
# ---------------------------------------------------------------------------

def test_parse_exact_rationals():
    f = NumberField(())
    x = parse_expression("1/3 + 2*i", f)
    assert x == f.rational(F(1, 3)) + f.i() * 2


def test_parse_powers_and_parens():
    f = NumberField(())
    assert parse_expression("(1+i)^2", f) == (f.one() + f.i()) ** 2
    assert parse_expression("(1+i)**2", f) == (f.one() + f.i()) ** 2
    assert parse_expression("-i*(2 - i)", f) == -f.i() * (f.rational(2) - f.i())


def test_float_literal_rejected():
    f = NumberField(())
    with pytest.raises(ValidationError):
        parse_expression("0.5", f)


def test_unknown_generator_rejected():
    f = NumberField(())
    with pytest.raises(ParseError):
        parse_expression("1 + q", f)


def test_unbalanced_parens_rejected():
    f = NumberField(())
    with pytest.raises(ParseError):
        parse_expression("(1 + i", f)


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def test_bundled_documents_roundtrip():
    for name in ("example1_m1.json", "example2_m1_n2.json",
                 "scalar_m1.json", "random_d2_seed1.json"):
        text = (TORI / name).read_text()
        doc = parse_input(text)
        assert parse_input(doc.to_json_text()) == doc
        torus, mults = doc.realize()
        doc2 = document_from_torus(torus, mults)
        torus2, mults2 = doc2.realize()
        assert torus.period.entries == torus2.period.entries
        assert [m.R for m in mults] == [m.R for m in mults2]


def test_document_float_rejected():
    doc = json.loads((TORI / "example1_m1.json").read_text())
    doc["period"][0][0] = "0.5"
    with pytest.raises(ValidationError):
        parse_input(json.dumps(doc))
    doc["period"][0][0] = 0.5
    with pytest.raises(ValidationError):
        parse_input(json.dumps(doc))


def test_document_bad_schema_rejected():
    with pytest.raises(ParseError):
        parse_input("{not json")
    with pytest.raises(ValidationError):
        parse_input("{}")
    with pytest.raises(ValidationError):
        parse_input('{"period": [["1","1","1","1"]]}')


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def test_endo_command_json(capsys):
    code, out, _ = _run(["endo", str(TORI / "example2_m1_n2.json"), "--json"],
                        capsys)
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "endo"
    assert report["witnesses"]["rank"] == 4
    cls = report["witnesses"]["classification"]
    assert cls["tag"] == "DefiniteQuaternion"


def test_ns_and_nd_commands(capsys):
    code, out, _ = _run(["ns", str(TORI / "scalar_m1.json"), "--json"], capsys)
    assert code == 0
    assert json.loads(out)["witnesses"]["rank"] == 4
    code, out, _ = _run(["nd", str(TORI / "scalar_m1.json"), "--mult", "0",
                         "--json"], capsys)
    assert code == 0
    assert json.loads(out)["witnesses"]["rank"] == 2


def test_classify_command(capsys):
    code, out, _ = _run(["classify", str(TORI / "example1_m1.json"), "--json"],
                        capsys)
    assert code == 0
    cls = json.loads(out)["witnesses"]["classification"]
    assert cls["tag"] == "ImaginaryQuadratic"
    assert cls["discriminant_data"] == [-1]


def test_polarize_command(capsys):
    code, out, _ = _run(["polarize", str(TORI / "scalar_m1.json"), "--json"],
                        capsys)
    assert code == 0
    report = json.loads(out)
    assert report["witnesses"]["verdict"] == "algebraic"
    eigs = report["approx"]["polarization_eigenvalues"]
    assert all(e > 0 for e in eigs)
    code, out, _ = _run(["polarize", str(TORI / "example2_m1_n2.json"),
                         "--json"], capsys)
    assert json.loads(out)["witnesses"]["verdict"] == "not-algebraic"


def test_verify_prop_exit_zero(capsys):
    code, out, _ = _run(["verify-prop", str(TORI / "random_d2_seed1.json"),
                         "--mult", "0"], capsys)
    assert code == 0
    assert "verified" in out


def test_verify_cor_command(capsys):
    code, out, _ = _run(["verify-cor", str(TORI / "scalar_m1.json"), "--json"],
                        capsys)
    assert code == 0
    report = json.loads(out)
    statuses = {c["id"]: c["status"] for c in report["claims"]}
    assert statuses["corollary3.real-multiplication"] == "verified"


def test_missing_file_exit_2(capsys):
    code, _, err = _run(["endo", "no_such_file.json"], capsys)
    assert code == 2
    assert "ParseError" in err


def test_corrupted_document_not_an_endomorphism(tmp_path, capsys):
    doc = json.loads((TORI / "random_d2_seed1.json").read_text())
    doc["period"][0][3] = doc["period"][0][3] + " + 1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = _run(["verify-prop", str(bad), "--mult", "0"], capsys)
    assert code == 2
    assert "NotAnEndomorphism" in err


def test_json_byte_identical_across_runs():
    cmd = [sys.executable, "-m", "toruslab.cli", "--json", "verify-prop",
           str(TORI / "random_d2_seed1.json"), "--mult", "0"]
    r1 = subprocess.run(cmd, capture_output=True)
    r2 = subprocess.run(cmd, capture_output=True)
    assert r1.returncode == r2.returncode == 0
    assert r1.stdout == r2.stdout
    assert r1.stdout.strip()


def test_gen_example_roundtrips(tmp_path, capsys):
    out_file = tmp_path / "gen.json"
    code, _, _ = _run(["gen-example", "2", "--m", "1", "--n", "2",
                       "-o", str(out_file)], capsys)
    assert code == 0
    generated = parse_input(out_file.read_text())
    bundled = parse_input((TORI / "example2_m1_n2.json").read_text())
    assert generated == bundled


def test_gen_example_random_matches_bundle(tmp_path, capsys):
    out_file = tmp_path / "gen.json"
    code, _, _ = _run(["gen-example", "random", "--d", "2", "--seed", "1",
                       "-o", str(out_file)], capsys)
    assert code == 0
    assert out_file.read_text() == (TORI / "random_d2_seed1.json").read_text()
