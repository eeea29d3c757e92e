"""CLI subcommands, output formats and exit codes."""

import json
import shutil
import subprocess

import pytest

from contamsim.cli import main

FAST_GAME = {"t_max": 16}


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


# -- bounds -----------------------------------------------------------------


def test_bounds_reports_defaults(capsys):
    assert main(["bounds"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["odc_count"] == 37
    assert out["max_clique_size"] == 9


def test_bounds_with_overrides(capsys):
    assert main(["bounds", "--smin", "1", "--smax", "3", "--dr", "0.5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["odc_count"] < 37


def test_bounds_rejects_bad_geometry(capsys):
    assert main(["bounds", "--dr", "5"]) == 1
    assert "error:" in capsys.readouterr().err


# -- wpc ----------------------------------------------------------------------


def test_wpc_trace_for_component_file(tmp_path, capsys):
    # five agents in a row, adjacent pairs in band
    comp = {
        "agents": [
            {"id": i, "x": 10.0 + 4.0 * i, "y": 5.0, "state": "healthy"}
            for i in range(5)
        ]
    }
    path = write_json(tmp_path / "chain.json", comp)
    assert main(["wpc", "--component", path]) == 0
    trace = json.loads(capsys.readouterr().out)
    assert trace["required"] == 2
    assert len(trace["iterations"]) == 5
    assert {it["chosen"][0] for it in trace["iterations"]} == set(range(5))
    assert all(it["r"] == 2 for it in trace["iterations"])


def test_wpc_rejects_disconnected_input(tmp_path, capsys):
    comp = {
        "agents": [
            {"id": 0, "x": 0.0, "y": 0.0, "state": "healthy"},
            {"id": 1, "x": 50.0, "y": 50.0, "state": "healthy"},
        ]
    }
    path = write_json(tmp_path / "split.json", comp)
    assert main(["wpc", "--component", path]) == 1
    assert "one connected component" in capsys.readouterr().err


def test_wpc_missing_file_is_io_error(capsys):
    assert main(["wpc", "--component", "/no/such/file.json"]) == 2
    assert "error:" in capsys.readouterr().err


# -- game -----------------------------------------------------------------------


def test_game_plays_and_reports(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", FAST_GAME)
    code = main(
        [
            "game",
            "--n",
            "3",
            "--seed",
            "5",
            "--healthy",
            "random",
            "--contaminated",
            "random",
            "--config",
            cfg,
        ]
    )
    assert code == 0
    res = json.loads(capsys.readouterr().out)
    assert set(res) == {
        "termination",
        "steps",
        "final_healthy",
        "final_contaminated",
        "final_healthy_pct",
    }
    assert res["final_healthy"] + res["final_contaminated"] == 6


def test_game_accepts_explicit_agents(tmp_path, capsys):
    init = write_json(
        tmp_path / "init.json",
        {
            "cfg": FAST_GAME,
            "agents": [
                {"id": 0, "x": 10.0, "y": 10.0, "state": "healthy"},
                {"id": 1, "x": 14.0, "y": 10.0, "state": "contaminated"},
            ],
        },
    )
    assert main(["game", "--init", init, "--scheduler", "ordered"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["final_healthy"] + res["final_contaminated"] == 2


def test_game_without_population_fails(capsys):
    assert main(["game", "--seed", "1"]) == 1
    assert "need --n or --init" in capsys.readouterr().err


def test_game_init_needs_counts_or_agents(tmp_path, capsys):
    init = write_json(tmp_path / "init.json", {"n_healthy": 3})
    assert main(["game", "--init", init]) == 1
    assert "both side counts" in capsys.readouterr().err


def test_game_trajectory_reproducible(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", FAST_GAME)
    args = [
        "game",
        "--n",
        "3",
        "--seed",
        "9",
        "--healthy",
        "circle",
        "--contaminated",
        "random",
        "--config",
        cfg,
    ]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(args + ["--trajectory", str(a)]) == 0
    assert main(args + ["--trajectory", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().count("\n") >= 1


# -- run ---------------------------------------------------------------------------


def test_run_batch_to_csv_file(tmp_path, capsys):
    cfg = write_json(
        tmp_path / "exp.json",
        {
            "games": 2,
            "agents_per_side": 2,
            "strategy_healthy": "random",
            "strategy_contaminated": "random",
            "overrides": FAST_GAME,
        },
    )
    out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    assert main(["run", "--config", cfg, "--out", str(out1), "--jobs", "1"]) == 0
    assert main(["run", "--config", cfg, "--out", str(out2), "--jobs", "1"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0].startswith("game_id,seed,")
    assert len(lines) == 3


def test_run_writes_stdout_by_default(tmp_path, capsys):
    cfg = write_json(
        tmp_path / "exp.json",
        {
            "games": 1,
            "agents_per_side": 2,
            "strategy_healthy": "random",
            "strategy_contaminated": "random",
            "overrides": FAST_GAME,
        },
    )
    assert main(["run", "--config", cfg, "--jobs", "1"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("game_id,")
    assert len(out.splitlines()) == 2


def test_run_rejects_unknown_experiment_key(tmp_path, capsys):
    cfg = write_json(tmp_path / "exp.json", {"games": 1, "jobs": 4})
    assert main(["run", "--config", cfg]) == 1
    assert "unknown experiment keys" in capsys.readouterr().err


def test_run_missing_config_is_io_error(capsys):
    assert main(["run", "--config", "/no/such/exp.json"]) == 2


# -- console script ------------------------------------------------------------


@pytest.mark.skipif(
    shutil.which("contamsim") is None, reason="package not installed"
)
def test_console_script_entry_point():
    out = subprocess.run(
        ["contamsim", "bounds"], capture_output=True, text=True, check=True
    )
    assert json.loads(out.stdout)["odc_count"] == 37
