"""Command line contract: exit codes, diffs, schemas, determinism."""
import json
import shutil
import subprocess
import sys

import pytest

from conftest import FIXTURES, fixture_paths
from starforge import fileformat as ff
from starforge.cli import main
from starforge.corpus import run, summary
from starforge.query import run_query

FX = str(FIXTURES)


def fx(name):
    return str(FIXTURES / f"{name}.json")


MATRIX = [
    (["check", fx("fx-dvr"), "--query", "t-local"], 0),
    (["check", fx("fx-tower4"), "--query", "T::t-local", "--json"], 0),
    (["check", fx("fx-tower4"), "--query", "dim", "--box", "5000"], 0),
    (["check", fx("fx-nagata"), "--query", "flag:valuation"], 10),
    (["check", fx("fx-dvr"), "--query", "nonsense"], 2),
    (["check", fx("fx-dvr"), "--query", "gv:NOPE"], 2),
    (["check", fx("fx-dvr"), "--query", "dim:extra"], 2),
    (["check", fx("fx-dvr"), "--query", "Z::t-local"], 2),
    (["check", fx("fx-dvr")], 2),
    (["check", "/nonexistent.json", "--query", "dim"], 2),
    (["corpus", "run", FX], 0),
    (["corpus", "run", "/nonexistent-dir"], 2),
    (["oracle", fx("fx-nreg2"), "--ideal", "M", "--op", "v", "--box", "4"], 0),
    (["oracle", fx("fx-nreg2"), "--ideal", "M", "--op", "w", "--box", "4"], 0),
    (["oracle", fx("fx-nreg2"), "--ideal", "M", "--op", "q", "--box", "4"], 2),
    (["oracle", fx("fx-nreg2"), "--ideal", "I", "--op", "t", "--box", "5"], 0),
    (["oracle", fx("fx-tower4"), "--ideal", "Q", "--op", "v", "--box", "3"], 2),
    ([], 2),
]


@pytest.mark.criterion(10)
@pytest.mark.parametrize("argv,code", MATRIX, ids=lambda x: " ".join(x[:1] + x[2:4]) if isinstance(x, list) else "")
def test_exit_code_matrix(argv, code, capsys):
    try:
        got = main(argv)
    except SystemExit as e:
        got = e.code
    assert got == code, capsys.readouterr()


def _write(tmp_path, name, mutate):
    obj = json.loads((FIXTURES / f"{name}.json").read_text())
    mutate(obj)
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.mark.criterion(10)
def test_schema_error_exit(tmp_path, capsys):
    p = _write(tmp_path, "fx-dvr", lambda o: o["desc"].update(kind="Bogus"))
    assert main(["check", p, "--query", "dim"]) == 2
    assert "/desc/kind" in capsys.readouterr().err


@pytest.mark.criterion(10)
def test_build_error_exit(tmp_path, capsys):
    def field_T(o):
        o["desc"]["T"] = {"kind": "FieldAtom", "field": "C"}
        o["elements"], o["named_ideals"] = {}, {}
    p = _write(tmp_path, "fx-rc", field_T)
    assert main(["check", p, "--query", "dim"]) == 3
    assert "build error" in capsys.readouterr().err


@pytest.mark.criterion(10)
def test_corrupted_expectation_gives_diff(tmp_path, capsys):
    d = tmp_path / "corpus"
    d.mkdir()
    for p in fixture_paths():
        shutil.copy(p, d)
    obj = json.loads((d / "fx-dvr.json").read_text())
    obj["expect"]["flag:valuation"] = "No"
    (d / "fx-dvr.json").write_text(json.dumps(obj))
    assert main(["corpus", "run", str(d)]) == 1
    out = capsys.readouterr().out
    assert "FAIL fx-dvr flag:valuation" in out
    assert "MISMATCH fx-dvr flag:valuation" in out and 'expected "No"' in out and "got      \"Yes\"" in out


def test_oracle_needs_box_covering_inverse(capsys):
    assert main(["oracle", fx("fx-nreg2"), "--ideal", "M", "--op", "v", "--box", "0"]) == 2
    line = main(["oracle", fx("fx-nreg2"), "--ideal", "M", "--op", "v", "--box", "3"])
    assert line == 0
    rec = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert rec["agree"] and rec["mismatches"] == []


@pytest.mark.criterion(10)
@pytest.mark.parametrize("path", fixture_paths(), ids=lambda p: p.stem)
def test_reports_validate(path):
    df = ff.load(path)
    m = ff.model(df)
    for q in sorted(df.expect):
        ff.validate(run_query(m, q).to_json(), "report")


@pytest.mark.criterion(7, 10)
def test_corpus_green_and_parallel_deterministic():
    serial = summary(run(FX))
    assert serial.endswith(" expectations passed\n") and "FAIL" not in serial
    assert summary(run(FX, parallel=True, workers=2)) == serial


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "starforge.cli", "check", fx("fx-dvr"), "--query", "dim"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("dim: Yes")
