"""Command line: outputs, exit codes and config precedence."""

import json

import pandas as pd
import pytest

from src.cli import cli

BASE = ["--quiet", "--log-level", "ERROR"]


@pytest.fixture(autouse=True)
def _no_env_budget(monkeypatch):
    monkeypatch.delenv("GRODIV_BUDGET", raising=False)


def _run(runner, *args):
    return runner.invoke(cli, [*BASE, *args])


def _json(path):
    return json.loads(path.read_text())


def test_ball_csv(runner, tmp_path):
    out = tmp_path / "ball.csv"
    result = _run(runner, "ball", "zd:2", "--radius", "3", "--out", str(out))
    assert result.exit_code == 0, result.output
    df = pd.read_csv(out)
    assert df["sphere_size"].tolist() == [1, 4, 8, 12]
    assert df["ball_size"].tolist() == [1, 5, 13, 25]
    meta = _json(tmp_path / "ball.meta.json")
    assert meta["run_config"]["command"] == "ball"
    assert meta["run_config"]["parameters"] == {"radius": 3}


def test_ball_free_group(runner, tmp_path):
    out = tmp_path / "free.csv"
    assert _run(runner, "ball", "free:2", "--radius", "3", "--out", str(out)).exit_code == 0
    assert pd.read_csv(out)["sphere_size"].tolist() == [1, 4, 12, 36]


def test_div_point(runner, tmp_path):
    out = tmp_path / "div.json"
    result = _run(runner, "div", "zd:2", "--a", "v:-4,0", "--b", "v:4,0", "--delta", "0.5", "--gamma", "0",
                  "--out", str(out))
    assert result.exit_code == 0, result.output
    doc = _json(out)
    assert doc["result"]["value"] == 12
    assert doc["result"]["status"] == "Exact"
    assert doc["run_config"]["parameters"]["delta"] == 0.5


def test_div_table_free_group(runner, tmp_path):
    out = tmp_path / "free.csv"
    result = _run(runner, "div-table", "free:2", "--nmax", "4", "--out", str(out))
    assert result.exit_code == 0, result.output
    df = pd.read_csv(out)
    assert list(df.columns) == ["n", "witness_a", "witness_b", "value", "status", "exhaustive"]
    assert set(df[df["n"] >= 2]["status"]) == {"NoPathWithinRadius"}


def test_div_table_json(runner, tmp_path):
    out = tmp_path / "table.json"
    result = _run(runner, "div-table", "zd:2", "--nmax", "6", "--out", str(out))
    assert result.exit_code == 0, result.output
    doc = _json(out)
    assert doc["growth"]["classification"] == "linear"
    assert len(doc["table"]["rows"]) == 6


def test_morse_probe(runner, tmp_path):
    out = tmp_path / "morse.json"
    result = _run(runner, "morse", "zd:2", "--g", "g:e1+", "--n", "2", "--D", "1", "--out", str(out))
    assert result.exit_code == 0, result.output
    assert _json(out)["probe"]["detour_length"] == 16


def test_sl3_shortword(runner, tmp_path):
    out = tmp_path / "word.json"
    result = _run(runner, "sl3", "shortword", "--m", "987", "--n", "610", "--out", str(out))
    assert result.exit_code == 0, result.output
    doc = _json(out)
    assert doc["matches"] is True
    assert doc["length"] == len(doc["letters"]) <= doc["length_bound"]


def test_sl3_connect_and_verify(runner, tmp_path):
    out = tmp_path / "traj.json"
    result = _run(runner, "sl3", "connect", "--alpha", "g:E21+", "--beta", "g:E31+", "--out", str(out))
    assert result.exit_code == 0, result.output
    doc = _json(out)
    assert doc["report"]["endpoint_match"] is True
    assert doc["start"] == [["1", "0", "0"], ["1", "1", "0"], ["0", "0", "1"]]

    again = _run(runner, "sl3", "verify", str(out), "--beta", "m:1,0,0;0,1,0;1,0,1")
    assert again.exit_code == 0, again.output


def test_sl3_stablerange(runner, tmp_path):
    out = tmp_path / "sr.json"
    result = _run(runner, "sl3", "stablerange", "--a", "3", "--b", "0", "--c", "5", "--out", str(out))
    assert result.exit_code == 0, result.output
    doc = _json(out)
    assert (doc["m"], doc["k"], doc["gcd"]) == ("1", "0", "1")


def test_check_radix_oracle(runner, tmp_path):
    out = tmp_path / "oracle.json"
    result = _run(runner, "check", "radix-oracle", "--max-norm", "3", "--out", str(out))
    assert result.exit_code == 0, result.output
    assert _json(out)["passed"] is True


def test_bad_group_spec_is_usage_error(runner):
    assert _run(runner, "ball", "lattice:7", "--radius", "2").exit_code == 2


def test_stable_range_common_factor_is_usage_error(runner):
    assert _run(runner, "sl3", "stablerange", "--a", "2", "--b", "4", "--c", "6").exit_code == 2


def test_budget_exhaustion_exit_code(runner, tmp_path):
    result = _run(runner, "ball", "zd:2", "--radius", "10", "--budget", "20", "--out", str(tmp_path / "b.csv"))
    assert result.exit_code == 3


def test_config_file_and_flag_precedence(runner, tmp_path):
    config = tmp_path / "run.yaml"
    config.write_text("node_budget: 20\n")
    out = tmp_path / "b.csv"
    assert _run(runner, "--config", str(config), "ball", "zd:2", "--radius", "10",
                "--out", str(out)).exit_code == 3
    assert _run(runner, "--config", str(config), "ball", "zd:2", "--radius", "10", "--budget", "100000",
                "--out", str(out)).exit_code == 0


def test_env_budget_beats_config_file(runner, tmp_path, monkeypatch):
    config = tmp_path / "run.yaml"
    config.write_text("node_budget: 100000\n")
    monkeypatch.setenv("GRODIV_BUDGET", "20")
    result = _run(runner, "--config", str(config), "ball", "zd:2", "--radius", "10",
                  "--out", str(tmp_path / "b.csv"))
    assert result.exit_code == 3


def test_missing_config_file(runner, tmp_path):
    assert _run(runner, "--config", str(tmp_path / "nope.yaml"), "ball", "zd:2", "--radius", "1").exit_code == 2


def _outputs(*paths):
    return [p.read_bytes() for p in paths]


def test_div_table_is_reproducible_across_jobs(runner, tmp_path):
    out = tmp_path / "t.csv"
    args = ["div-table", "zd:2", "--nmax", "8", "--seed", "5", "--out", str(out)]
    assert _run(runner, "--jobs", "2", *args).exit_code == 0
    first = _outputs(out, tmp_path / "t.meta.json")
    assert _run(runner, "--jobs", "2", *args).exit_code == 0
    assert _outputs(out, tmp_path / "t.meta.json") == first
    assert _run(runner, *args).exit_code == 0
    assert out.read_bytes() == first[0]


def test_check_div_inequalities_is_reproducible(runner, tmp_path):
    out = tmp_path / "checks.json"
    args = ["check", "div-inequalities", "--samples", "12", "--seed", "3", "--group", "zd:2",
            "--max-word-length", "3", "--out", str(out)]
    assert _run(runner, *args).exit_code == 0
    first = out.read_bytes()
    assert _run(runner, *args).exit_code == 0
    assert out.read_bytes() == first


def test_sl3_stress_is_reproducible(runner, tmp_path):
    out, rows = tmp_path / "stress.json", tmp_path / "stress.csv"
    args = ["sl3", "stress", "--count", "3", "--word-len", "10", "--seed", "7", "--rows", str(rows),
            "--out", str(out)]
    assert _run(runner, "--jobs", "2", *args).exit_code == 0
    first = _outputs(out, rows, tmp_path / "stress.meta.json")
    assert _run(runner, "--jobs", "2", *args).exit_code == 0
    assert _outputs(out, rows, tmp_path / "stress.meta.json") == first


def test_div_table_revalidate(runner, tmp_path):
    out = tmp_path / "table.json"
    result = _run(runner, "div-table", "zd:2", "--nmax", "5", "--revalidate", "--out", str(out))
    assert result.exit_code == 0, result.output
    revalidation = _json(out)["revalidation"]
    assert revalidation["checks_run"] == 5
    assert revalidation["violations"] == 0


def test_div_table_help_names_sidecar(runner):
    result = runner.invoke(cli, ["div-table", "--help"])
    assert result.exit_code == 0
    assert ".meta.json" in result.output
