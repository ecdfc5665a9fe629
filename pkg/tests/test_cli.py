import json
import subprocess
import sys

import pytest

from parkmatch.cli import main
from parkmatch.bench import CSV_COLUMNS

from .conftest import FIXTURES, WORKED_RESULT


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_time(text, col=-1):
    return [",".join(line.split(",")[:col]) for line in text.splitlines()]


def test_generate_is_reproducible(capsys):
    a = run(capsys, "generate", "--drivers", "10", "--eta", "0.2", "--seed", "7")
    b = run(capsys, "generate", "--drivers", "10", "--eta", "0.2", "--seed", "7")
    assert a[0] == 0 and a[1] == b[1]
    data = json.loads(a[1])
    assert len(data["edges"]) == 20
    assert set(data) == {"config", "drivers", "spots", "edges"}


def test_generate_to_file_then_match(tmp_path, capsys):
    path = tmp_path / "s.json"
    assert run(capsys, "generate", "--drivers", "12", "--spots", "9", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "match", "--scenario", str(path), "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 5


def test_match_worked_example_json(capsys):
    code, out, _ = run(capsys, "match", "--scenario", str(FIXTURES / "worked_example.json"),
                       "--matchers", "mm")
    assert code == 0
    (res,) = json.loads(out)["results"]
    assert {tuple(p) for p in res["pairs"]} == WORKED_RESULT
    assert res["blocking_pairs"] == 0


def test_match_ingest_records(capsys):
    code, out, _ = run(capsys, "match", "--scenario", str(FIXTURES / "ingest_3x3.json"),
                       "--matchers", "mm,km")
    assert code == 0
    results = json.loads(out)["results"]
    assert all(r["matched_count"] == 2 for r in results)


def test_sweeps_and_time(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep-size", "--sizes", "10,20", "--seeds", "3", "--eta", "0.3")
    assert code == 0 and len(out.splitlines()) == 1 + 2 * 3 * 4
    summary = tmp_path / "sum.csv"
    code, out, _ = run(capsys, "sweep-density", "--drivers", "15", "--etas", "0.1,0.5",
                       "--seeds", "2", "--matchers", "mm,km", "--summary", str(summary))
    assert code == 0 and len(out.splitlines()) == 1 + 2 * 2 * 2
    assert len(summary.read_text().splitlines()) == 1 + 2 * 2
    code, out, _ = run(capsys, "time", "--sizes", "20", "--matchers", "mm")
    assert code == 0 and len(out.splitlines()) == 2


def test_json_format_for_sweep(capsys):
    code, out, _ = run(capsys, "sweep-size", "--sizes", "10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["rows"]) == 4 and len(data["summary"]) == 4


@pytest.mark.parametrize("argv", [
    ["sweep-size", "--sizes", "10", "--seeds", "2"],
    ["sweep-density", "--drivers", "12", "--etas", "0.2,1.0", "--seeds", "2"],
    ["match", "--drivers", "9", "--seeds", "3"],
])
def test_repeat_invocations_identical(capsys, argv):
    fmt = ["--format", "csv"] if argv[0] == "match" else []
    _, a, _ = run(capsys, *argv, *fmt)
    _, b, _ = run(capsys, *argv, *fmt)
    assert strip_time(a) == strip_time(b)


def test_verify_ok_and_failure(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--drivers", "6", "--eta", "0.5")
    assert code == 0 and json.loads(out)["passed"]
    # A malformed scenario file is an input error, not a verification failure.
    bad = tmp_path / "bad.json"
    bad.write_text('{"drivers": [], "spots": [], "edges": [{"driver": "D1"}]}')
    assert run(capsys, "verify", "--scenario", str(bad))[0] == 2


def test_verify_reports_failure(monkeypatch, capsys):
    import parkmatch.cli as cli
    from parkmatch.matching import Matching, ProposalTrace

    def broken(dl, sl):
        return Matching(frozenset(), frozenset(dl), frozenset(sl)), ProposalTrace()

    monkeypatch.setattr(cli, "mm_match", broken)
    code, out, _ = run(capsys, "verify", "--drivers", "5", "--eta", "1.0")
    assert code == 3 and not json.loads(out)["passed"]


@pytest.mark.parametrize("argv", [
    ["generate", "--eta", "0"],
    ["generate", "--dist-lo", "5", "--dist-hi", "1"],
    ["sweep-density", "--etas", "0.5,1.5"],
    ["time", "--sizes", "30,10"],
    ["match", "--seeds", "0"],
    ["match", "--scenario", "/nonexistent/file.json"],
])
def test_config_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_unknown_matcher_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["match", "--matchers", "mm,foo"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "parkmatch", "generate", "--drivers", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["config"]["num_drivers"] == 3
