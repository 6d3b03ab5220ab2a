import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import _cases
from schemareach.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(args):
    out = io.StringIO()
    code = main(args, stdout=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    schema = tmp_path / "s.pl"
    schema.write_text(_cases.SCHEMA)
    good = tmp_path / "g.pl"
    good.write_text(_cases.GRAPH)
    bad = tmp_path / "bad.pl"
    bad.write_text(_cases.SINGLE_VIOLATION["v"][0])
    return schema, good, bad


def test_no_arguments(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_flag(capsys):
    assert main(["validate", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err


def test_validate(files):
    schema, good, bad = files
    code, out = run(["validate", "--schema", str(schema), "--graph", str(good), "--json"])
    assert code == 0 and json.loads(out)["compliant"] is True
    code, out = run(["validate", "--schema", str(schema), "--graph", str(bad), "--json"])
    assert code == 1
    assert [v["condition"] for v in json.loads(out)["violations"]] == ["v"]


def test_parse_error_exit_code(tmp_path, files):
    broken = tmp_path / "broken.pl"
    broken.write_text("node(1, a")
    assert run(["validate", "--schema", str(files[0]), "--graph", str(broken)])[0] == 2


def test_distances_csv_and_json(files):
    code, out = run(["distances", "--schema", str(files[0])])
    assert code == 0 and out.splitlines()[0] == "from,to,distance"
    assert "person,hotel,1" in out
    code, out = run(["distances", "--schema", str(files[0]), "--json"])
    rows = json.loads(out)
    assert {"from": "hotel", "to": "person", "distance": None} in rows
    assert run(["distances", "--schema", str(files[0]), "--json", "--csv"])[0] == 2


def test_reach_on_split_instance():
    args = ["reach", "--schema", str(FIXTURES / "abcd_schema.pl"), "--graph", str(FIXTURES / "split_instance_closed.pl"),
            "--source", "3", "--target", "4", "--mode", "both", "--json", "--no-timing"]
    code, out = run(args)
    assert code == 0
    d = json.loads(out)
    assert d["baseline"]["reached"] and d["improved"]["reached"]
    assert d["baseline"]["path"] == [3, 4]
    assert set(d["baseline"]) == {"reached", "backtracks", "expansions", "visited_count", "path"}

    code, out = run(args[:-6] + ["--source", "1", "--target", "4", "--json", "--no-timing", "--expect-reachable"])
    assert code == 1
    d = json.loads(out)
    assert not d["baseline"]["reached"] and not d["improved"]["reached"]
    assert d["improved"]["expansions"] <= 1


def test_reach_refuses_non_compliant(files):
    schema, _, bad = files
    base = ["reach", "--schema", str(schema), "--graph", str(bad), "--source", "1", "--target", "2"]
    assert run(base + ["--mode", "improved"])[0] == 1
    code, out = run(base + ["--mode", "improved", "--force", "--json"])
    assert code == 0 and json.loads(out)["improved"]["reached"]
    assert run(base + ["--mode", "baseline"])[0] == 0


def test_reach_text_output(files):
    schema, good, _ = files
    code, out = run(["reach", "--schema", str(schema), "--graph", str(good), "--source", "1", "--target", "2"])
    assert code == 0
    assert out.startswith("baseline: reached=true") and "improved: reached=true" in out


def test_convert(tmp_path):
    dest = tmp_path / "canon.pl"
    code, _ = run(["convert", "--graph", str(FIXTURES / "split_instance_closed.pl"), "--out", str(dest)])
    assert code == 0
    assert dest.read_text().splitlines()[:2] == ["node(1, a).", "node(2, b)."]
    code, out = run(["convert", "--graph", str(FIXTURES / "split_instance_closed.pl")])
    assert out == dest.read_text()


def test_bench_outputs(tmp_path):
    csv_path = tmp_path / "r.csv"
    code, out = run(["bench", "--profile", "coarse", "--nodes", "80", "--seed", "2", "--json",
                     "--repeats", "1", "--out", str(csv_path)])
    assert code == 0
    d = json.loads(out)
    assert d["graph"]["nodes"] == 80 and d["n_queries"] == 79
    assert set(d["metrics"]) == {"pct_improved_backtracks", "pct_saved_backtracks", "pct_improved_time",
                                 "pct_saved_time", "pct_saved_time_amortized"}
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "source,target,baseline_backtracks,improved_backtracks,baseline_ns,improved_ns"
    assert len(lines) == 80

    json_path = tmp_path / "r.json"
    code, _ = run(["bench", "--profile", "coarse", "--nodes", "80", "--queries", "5", "--no-timing",
                   "--out", str(json_path)])
    d = json.loads(json_path.read_text())
    assert d["n_queries"] == 5 and "pct_saved_time" not in d["metrics"]


def _bench_subprocess(seed_env):
    env = {**os.environ, "PYTHONHASHSEED": seed_env}
    return subprocess.run(
        [sys.executable, "-m", "schemareach", "bench", "--profile", "coarse", "--nodes", "150",
         "--seed", "7", "--json", "--no-timing", "--quiet"],
        capture_output=True, env=env, check=True,
    ).stdout


def test_json_no_timing_byte_identical():
    assert _bench_subprocess("1") == _bench_subprocess("2")


def test_every_json_output_parses(files):
    schema, good, _ = files
    for args in (
        ["validate", "--schema", str(schema), "--graph", str(good)],
        ["distances", "--schema", str(schema)],
        ["reach", "--schema", str(schema), "--graph", str(good), "--source", "1", "--target", "2"],
        ["bench", "--profile", "coarse", "--nodes", "40", "--repeats", "1"],
    ):
        code, out = run(args + ["--json"])
        assert code == 0
        json.loads(out)
