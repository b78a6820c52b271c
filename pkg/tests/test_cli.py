import csv
import io
import json
import logging

import pytest

from kacq.cli import main
from kacq.series import CoeffPoly, Series


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def series_lines(out):
    return [(d["route"], Series.from_json(d["series"])) for d in map(json.loads, out.splitlines())]


def test_string_function_json(capsys):
    code, out, _ = run(capsys, "string-function", "--algebra", "A2~2", "--order", "4", "--route", "c", "--format", "json")
    assert code == 0
    [(route, s)] = series_lines(out)
    assert route == "c"
    assert [str(c) for c in s.q_list(4)][:2] == ["1", "t^3"]
    assert len(s.q_list(4)) == 5


def test_order_zero_is_one(capsys):
    code, out, _ = run(capsys, "string-function", "--algebra", "D4~3", "--order", "0")
    [(_, s)] = series_lines(out)
    assert code == 0 and s == Series.one(s.spec)


def test_three_routes_agree(capsys):
    code, out, _ = run(capsys, "string-function", "--algebra", "A2~2", "--order", "2", "--route", "a,b,c")
    blocks = series_lines(out)
    assert code == 0 and [r for r, _ in blocks] == ["a", "b", "c"]
    assert blocks[0][1] == blocks[1][1] == blocks[2][1]
    code, out, _ = run(capsys, "string-function", "--algebra", "A2~2", "--order", "2", "--route", "a,b,c",
                       "--format", "text")
    chunks = out.split("[")[1:]
    assert len({c.split("]", 1)[1] for c in chunks}) == 1


def test_csv_output(capsys):
    code, out, _ = run(capsys, "string-function", "--algebra", "A2~2", "--order", "2", "--format", "csv")
    assert code == 0 and "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["route", "finite", "d2", "t", "s", "coefficient"]
    assert ["c", "0", "2", "3", "0", "1"] in rows


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--algebra", "A2~2", "--order", "6")
    reports = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(reports) == 2 and all(r["pass"] for r in reports)
    code, out, _ = run(capsys, "verify", "--algebra", "jacobi", "--order", "5")
    assert code == 0 and json.loads(out)["pass"]


@pytest.mark.parametrize("argv", [
    ["verify", "--algebra", "A2~2", "--order", "-1"],
    ["string-function", "--algebra", "X9~9"],
    ["string-function", "--route", "d"],
    ["string-function", "--format", "xml"],
    ["nonsense"],
    ["verify", "--algebra", "A2~2", "--route", "a"],
    ["kostka", "--algebra", "A2~2", "--k", "-1"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_kostka(capsys):
    code, out, _ = run(capsys, "kostka", "--algebra", "A2~2", "--k", "2")
    doc = json.loads(out)
    assert code == 0 and doc["k"] == 2
    assert sorted(map(tuple, doc["coeff"])) == [(2, 0, "1"), (6, 0, "1")]  # coefficients are decimal strings


def test_kernel_and_theta(capsys):
    code, out, _ = run(capsys, "kernel", "--algebra", "A2~2", "--order", "1", "--which", "mu")
    [(_, mu)] = series_lines(out)
    assert code == 0 and str(mu.coefficient((-2,), 0)) == "-1 + t"
    code, out, _ = run(capsys, "theta", "--algebra", "A2~2", "--order", "1", "--box", "2")
    [(_, th)] = series_lines(out)
    assert len(th) == 3
    code, out, _ = run(capsys, "kernel", "--which", "delta", "--l", "1", "--order", "2", "--k4", "inf")
    assert code == 0 and series_lines(out)


def test_exponents(capsys):
    code, out, _ = run(capsys, "exponents")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and all(r["match"] == "yes" for r in rows)
    by = {(r["algebra"], r["n"]): r for r in rows}
    assert by[("E6~2", "1")]["catalog"] == "4 8"
    assert by[("A4~2", "0")]["catalog"] == "1 3"
    assert by[("D4~3", "1")]["recomputed"] == "3"


def test_determinism(capsys):
    argv = ["string-function", "--algebra", "D3~2", "--order", "4", "--route", "a,c", "--format", "csv"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"algebra": "D4~3", "order": 3, "routes": "a,c", "format": "json"}))
    code, out, _ = run(capsys, "string-function", "--config", str(cfg))
    blocks = series_lines(out)
    assert code == 0 and [r for r, _ in blocks] == ["a", "c"]
    # command-line flags override the file
    code, out, _ = run(capsys, "string-function", "--config", str(cfg), "--route", "b")
    assert [r for r, _ in series_lines(out)] == ["b"]
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "string-function", "--config", str(cfg))[0] == 2


def test_cache_hit_equals_miss(capsys, tmp_path):
    argv = ["string-function", "--algebra", "A4~2", "--order", "4", "--route", "a", "--cache-dir", str(tmp_path)]
    miss = run(capsys, *argv)
    files = list(tmp_path.glob("table-*.json"))
    assert len(files) == 1
    stamp = files[0].stat().st_mtime_ns
    hit = run(capsys, *argv)
    assert hit == miss and files[0].stat().st_mtime_ns == stamp


def test_cache_env_fallback(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("KACQ_CACHE_DIR", str(tmp_path))
    run(capsys, "kostka", "--algebra", "D3~2", "--k", "2")
    assert list(tmp_path.glob("table-*.json"))


def test_corrupt_cache_recomputes(capsys, tmp_path, caplog):
    argv = ["string-function", "--algebra", "D3~2", "--order", "3", "--route", "a", "--cache-dir", str(tmp_path)]
    good = run(capsys, *argv)
    [entry] = tmp_path.glob("table-*.json")
    entry.write_text("{not json")
    with caplog.at_level(logging.WARNING):
        again = run(capsys, *argv)
    assert again == good
    assert any("corrupt" in r.message for r in caplog.records)
    json.loads(entry.read_text())  # rewritten


def test_two_variable_flag(capsys):
    code, out, _ = run(capsys, "string-function", "--algebra", "A2~2", "--order", "3", "--route", "a,c",
                       "--two-variable")
    (_, a), (_, c) = series_lines(out)
    assert code == 0 and a == c
    assert a.coefficient(None, 2) == CoeffPoly.monomial(1, 2)
    assert run(capsys, "string-function", "--algebra", "D3~2", "--route", "c", "--two-variable")[0] == 2
