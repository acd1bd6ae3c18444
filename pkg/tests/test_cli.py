"""CLI contract: exit codes, output formats, byte stability."""

import dataclasses
import json
import pathlib

import pytest

from qsum import catalog
from qsum.cli import main
from qsum.exact import QRatFun

GOLDEN = pathlib.Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_exit_ok(capsys):
    code, out, _ = run(capsys, "verify", "--id", "thm1.1", "--n", "0",
                       "--b", "2*q", "--c", "3*q", "--d", "5*q",
                       "--mode", "exact")
    assert code == 0 and "equal" in out


def test_verify_numeric_exit_ok(capsys):
    code, out, _ = run(capsys, "verify", "--id", "thm1.3", "--b", "2",
                       "--c", "3", "--d", "5", "--q", "0.25",
                       "--mode", "numeric", "--digits", "60")
    assert code == 0 and "within_tolerance" in out


def test_verify_pole_exit_3(capsys):
    code, out, _ = run(capsys, "verify", "--id", "thm1.1", "--n", "1",
                       "--b", "1*q", "--c", "3*q", "--d", "5*q",
                       "--mode", "exact")
    assert code == 3 and "pole" in out


def test_verify_mismatch_exit_2(capsys, monkeypatch):
    entry = catalog.CATALOG[catalog.IdentityId.JACKSON_3PHI2]
    good_rhs = entry.rhs
    bad = dataclasses.replace(
        entry, rhs=lambda ps: good_rhs(ps) + QRatFun.from_fraction(1))
    monkeypatch.setitem(catalog.CATALOG, catalog.IdentityId.JACKSON_3PHI2, bad)
    code, out, _ = run(capsys, "verify", "--id", "thm1.6", "--m", "1",
                       "--a", "2*q", "--b", "3*q", "--mode", "exact")
    assert code == 2 and "mismatch" in out


def test_usage_errors_exit_1(capsys):
    assert run(capsys, "verify", "--id", "nope", "--n", "0")[0] == 1
    assert run(capsys, "verify", "--id", "thm1.3", "--b", "2", "--c", "3",
               "--d", "5", "--mode", "numeric")[0] == 1   # missing --q
    assert run(capsys, "verify", "--id", "thm1.1", "--n", "0", "--b", "2*q",
               "--c", "3*q", "--d", "5*q", "--output", "csv")[0] == 1
    assert run(capsys, "verify", "--id", "thm1.1", "--n", "0", "--b", "2*q",
               "--c", "3*q", "--d", "5*q", "--digits", "10")[0] == 1
    assert run(capsys, "verify", "--id", "thm1.1", "--n", "0", "--b", "2*q",
               "--c", "3*q", "--d", "5*q", "--tolerance", "1e-300")[0] == 1
    assert run(capsys, "limit", "--pair", "z", "--b", "2", "--c", "3",
               "--d", "5", "--q", "0.5")[0] == 1


def test_golden_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--id", "thm1.1", "--n", "1",
                       "--b", "2*q", "--c", "3*q", "--d", "5*q",
                       "--mode", "exact", "--output", "json")
    assert code == 0
    assert out == (GOLDEN / "verify_thm11_n1.json").read_text()
    doc = json.loads(out)
    assert list(doc.keys()) == ["id", "mode", "params", "lhs_value",
                                "rhs_value", "status", "diff", "detail",
                                "terms_evaluated", "elapsed"]


@pytest.mark.parametrize("argv", [
    ("verify", "--id", "thm1.3", "--b", "2", "--c", "3", "--d", "5",
     "--q", "1/3", "--mode", "numeric", "--output", "json"),
    ("sweep", "--id", "thm1.1", "--count", "3", "--seed", "11",
     "--output", "json"),
    ("limit", "--pair", "a", "--b", "2", "--c", "3", "--d", "5",
     "--q", "0.5", "--grid", "5,10", "--output", "json",
     "--tolerance", "1e-3"),
    ("ismail", "--id", "thm1.4", "--b", "2", "--c", "3", "--q", "1/3",
     "--m-max", "3", "--output", "json"),
    ("selftest", "--cases", "25", "--output", "json"),
])
def test_byte_stable_across_runs(capsys, argv):
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1.encode() == out2.encode()
    json.loads(out1)


def test_sweep_summary_and_parity(capsys):
    code, out, _ = run(capsys, "sweep", "--id", "thm1.5", "--count", "8",
                       "--seed", "3", "--output", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["passed"] == 8
    assert doc["summary"]["parity_counts"]["even"] + \
        doc["summary"]["parity_counts"]["odd"] == 8


def test_limit_csv(capsys):
    code, out, _ = run(capsys, "limit", "--pair", "a", "--b", "2", "--c", "3",
                       "--d", "5", "--q", "0.5", "--grid", "5",
                       "--output", "csv", "--tolerance", "1e-2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,finite_rhs,limit_rhs,diff"
    assert lines[1].startswith("5,")


def test_ismail_csv_and_exit(capsys):
    code, out, _ = run(capsys, "ismail", "--id", "thm1.3", "--b", "2",
                       "--c", "3", "--q", "1/3", "--m-max", "4",
                       "--output", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,lhs,rhs,diff,radius_ok,status"
    assert len(lines) == 5


def test_selftest_default_passes(capsys):
    code, out, _ = run(capsys, "selftest", "--cases", "25")
    assert code == 0
    assert "selftest: ok" in out


def test_selftest_low_digits_skips_numeric(capsys):
    code, out, _ = run(capsys, "selftest", "--cases", "10", "--digits", "15",
                       "--tolerance", "1e-4", "--output", "json")
    assert code == 0
    doc = json.loads(out)
    status = {s["name"]: s["status"] for s in doc["suites"]}
    assert status["catalog-numeric"] == "skipped"
    assert status["shift-rules"] == "pass"


def test_selftest_corrupted_catalog(capsys, monkeypatch):
    entry = catalog.CATALOG[catalog.IdentityId.CARLITZ_5PHI4]
    good_rhs = entry.rhs
    bad = dataclasses.replace(
        entry, rhs=lambda ps: good_rhs(ps) * QRatFun.from_fraction(2))
    monkeypatch.setitem(catalog.CATALOG, catalog.IdentityId.CARLITZ_5PHI4, bad)
    code, out, _ = run(capsys, "selftest", "--cases", "5", "--output", "json")
    assert code != 0
    doc = json.loads(out)
    failing = [s for s in doc["suites"] if s["status"] == "fail"]
    assert failing and "thm1.5" in failing[0]["detail"]


def test_env_digits_override(capsys, monkeypatch):
    monkeypatch.setenv("QSUM_DIGITS", "45")
    code, out, _ = run(capsys, "selftest", "--cases", "5",
                       "--tolerance", "1e-30", "--output", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["digits"] == 45
