import csv
import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from apz.cli import CSV_COLUMNS, RECORD_SCHEMA, run, truncate_decimal


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("APZ_CACHE_DIR", str(tmp_path))
    return tmp_path


def apz(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_truncate_not_round():
    assert truncate_decimal("0.1239999", 3) == "0.123"
    assert truncate_decimal("2.5", 2) == "2.50"
    assert truncate_decimal("-0.45678", 2) == "-0.45"
    assert truncate_decimal("0.39999999999999999999999999", 5) == "0.40000"


def test_zetak_grid_spot_value(cache_dir):
    code, text = apz("table", "--family", "zetak", "--k", "1..4", "--s", "2..8", "--digits", "50", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 28
    assert tuple(rows[0]) == CSV_COLUMNS
    spot = next(r for r in rows if r["k"] == "4" and r["r_or_s"] == "2")
    assert spot["value"].startswith("1.010069659181975191")
    assert len(spot["value"].split(".")[1]) == 50


def test_constant_hl(cache_dir):
    code, text = apz("constant", "--family", "hl", "--k", "2", "--r", "4", "--digits", "40")
    assert code == 0
    assert "0.4616917583647737302323055244" in text


def test_constant_methods_agree(cache_dir):
    outs = [apz("constant", "--family", "T", "--k", "2", "--r", "2", "--digits", "30", "--method", m, "--format", "csv")[1]
            for m in ("pk", "zeta-basis")]
    values = [list(csv.DictReader(io.StringIO(o)))[0]["value"] for o in outs]
    assert values[0] == values[1]


def test_json_schema(cache_dir):
    code, text = apz("table", "--family", "artin", "--k", "1..2", "--r", "1..2", "--digits", "20", "--format", "json")
    assert code == 0
    doc = json.loads(text)
    jsonschema.validate(doc, RECORD_SCHEMA)
    assert [r["k"] for r in doc["records"]] == ["host", 1, 2, "host", 1, 2]
    assert json.loads(json.dumps(doc)) == doc


def test_host_custom(cache_dir):
    code, text = apz("host", "--num", "n^2-1", "--den", "n^2", "--start", "2", "--digits", "20", "--format", "csv")
    assert code == 0
    assert list(csv.DictReader(io.StringIO(text)))[0]["value"] == "0.50000000000000000000"
    code, text = apz("host", "--family", "C", "--r", "4", "--digits", "12")
    assert code == 0 and "0.093750000000" in text


def test_sequences_csv(cache_dir):
    code, text = apz("sequences", "--family", "t", "--r", "2", "--max", "6")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["family", "r", "index", "value"]
    assert [int(r[3]) for r in rows[1:]] == [0, 0, 1, 3, 7, 15, 31]
    code, text = apz("sequences", "--family", "gammaA", "--r", "2", "--max", "8")
    assert [int(r[3]) for r in list(csv.reader(io.StringIO(text)))[1:]] == [0, 0, 0, 1, 1, 1, 1, 2, 2]


def test_hybrid_verify(cache_dir):
    code, text = apz("hybrid", "verify", "--id", "zk-squared", "--k", "1", "--digits", "30")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines and all(line.startswith("pass zk-squared k=1") for line in lines)


def test_hybrid_list(cache_dir):
    code, text = apz("hybrid", "list")
    assert code == 0 and len(text.strip().splitlines()) == 63


def test_warm_cache_is_byte_identical(tmp_path):
    argv = [sys.executable, "-m", "apz.cli", "table", "--family", "feller", "--k", "1..2", "--r", "2..3",
            "--digits", "30", "--format", "csv"]
    env = dict(os.environ, APZ_CACHE_DIR=str(tmp_path))
    cold = subprocess.run(argv, env=env, capture_output=True, check=True).stdout
    assert (tmp_path / "zeta_cache.txt").stat().st_size > 0
    warm = subprocess.run(argv, env=env, capture_output=True, check=True).stdout
    assert warm == cold


def test_jobs_match_serial(cache_dir):
    argv = ["table", "--family", "quad", "--k", "1..2", "--r", "1..2", "--digits", "25", "--format", "csv", "--no-host"]
    assert apz(*argv, "--jobs", "2")[1] == apz(*argv)[1]


def test_cache_commands(cache_dir):
    code, text = apz("cache", "path")
    assert text.strip() == str(cache_dir / "zeta_cache.txt")
    apz("table", "--family", "zetak", "--k", "5", "--s", "13", "--digits", "33")
    assert (cache_dir / "zeta_cache.txt").exists()
    assert apz("cache", "clear")[0] == 0
    assert not (cache_dir / "zeta_cache.txt").exists()


@pytest.mark.parametrize("argv", [
    ["table", "--family", "zetak", "--k", "4..1"],
    ["table", "--family", "zetak", "--k", "x"],
    ["table", "--family", "twin", "--r", "1"],
    ["table", "--family", "nope"],
    ["constant", "--family", "A", "--k", "1", "--r", "1", "--digits", "5"],
    ["host", "--digits", "20"],
    [],
])
def test_usage_errors(cache_dir, argv):
    assert apz(*argv)[0] == 2


def test_convergence_failure_exit_code(cache_dir, monkeypatch):
    from apz import cli
    from apz.errors import ConvergenceError

    def boom(*a, **kw):
        raise ConvergenceError("series did not settle")

    monkeypatch.setattr(cli, "constant", boom)
    assert apz("constant", "--family", "A", "--k", "1", "--r", "1")[0] == 3
