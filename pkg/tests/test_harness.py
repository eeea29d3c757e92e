"""Batch runner and Welch statistics."""

import io
import math

import pytest
import scipy.stats

from contamsim.harness import (
    CSV_FIELDS,
    ExperimentConfig,
    default_jobs,
    read_csv,
    run_batch,
    welch_test,
    write_csv,
)

FAST = {"t_max": 16}


def small_exp(**kw):
    args = dict(
        games=4,
        agents_per_side=2,
        strategy_healthy="random",
        strategy_contaminated="random",
        base_seed=100,
        overrides=FAST,
    )
    args.update(kw)
    return ExperimentConfig(**args)


# -- config ---------------------------------------------------------------


def test_config_rejects_bad_values():
    with pytest.raises(ValueError, match="games"):
        small_exp(games=0)
    with pytest.raises(ValueError, match="agents_per_side"):
        small_exp(agents_per_side=0)
    with pytest.raises(ValueError, match="unknown strategy"):
        small_exp(strategy_healthy="greedy")
    with pytest.raises(ValueError, match="unknown config fields"):
        small_exp(overrides={"speed": 2})


def test_from_dict_checks_keys():
    exp = ExperimentConfig.from_dict(
        {
            "games": 2,
            "agents_per_side": 3,
            "strategy_healthy": "circle",
            "strategy_contaminated": "potential",
        }
    )
    assert exp.base_seed == 0
    assert exp.scheduler == "random"
    with pytest.raises(ValueError, match="unknown experiment keys"):
        ExperimentConfig.from_dict({"games": 1, "jobs": 2})
    with pytest.raises(ValueError, match="missing experiment keys"):
        ExperimentConfig.from_dict({"games": 1})


def test_default_jobs_env_override(monkeypatch):
    monkeypatch.setenv("CONTAM_JOBS", "3")
    assert default_jobs() == 3


# -- batches ----------------------------------------------------------------


def test_rows_are_seeded_and_sorted():
    rows = run_batch(small_exp(), jobs=1)
    assert [r["game_id"] for r in rows] == [0, 1, 2, 3]
    assert [r["seed"] for r in rows] == [100, 101, 102, 103]
    for r in rows:
        assert set(r) == set(CSV_FIELDS)
        assert r["final_healthy"] + r["final_contaminated"] == 4
        assert 0.0 <= r["final_healthy_pct"] <= 100.0
        assert r["strategy_healthy"] == "random"


def test_parallel_matches_serial():
    exp = small_exp(games=3)
    assert run_batch(exp, jobs=1) == run_batch(exp, jobs=2)


def test_batches_are_reproducible():
    exp = small_exp()
    a, b = io.StringIO(), io.StringIO()
    write_csv(run_batch(exp, jobs=1), a)
    write_csv(run_batch(exp, jobs=1), b)
    assert a.getvalue() == b.getvalue()


# -- csv ----------------------------------------------------------------------


def test_csv_round_trip():
    rows = run_batch(small_exp(), jobs=1)
    buf = io.StringIO()
    write_csv(rows, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == ",".join(CSV_FIELDS)
    assert read_csv(io.StringIO(text)) == rows


def test_csv_writer_orders_by_game_id():
    rows = run_batch(small_exp(games=3), jobs=1)
    buf = io.StringIO()
    write_csv(list(reversed(rows)), buf)
    assert read_csv(io.StringIO(buf.getvalue())) == rows


# -- welch ---------------------------------------------------------------------


def test_welch_matches_scipy():
    xs = [51.0, 48.0, 55.0, 60.0, 47.0, 52.5]
    ys = [44.0, 50.0, 46.5, 41.0, 49.0]
    mine = welch_test(xs, ys)
    ref = scipy.stats.ttest_ind(xs, ys, equal_var=False)
    assert mine.statistic == pytest.approx(ref.statistic)
    assert mine.p_two_sided == pytest.approx(ref.pvalue)
    one_sided = scipy.stats.ttest_ind(
        xs, ys, equal_var=False, alternative="greater"
    )
    assert mine.p_greater == pytest.approx(one_sided.pvalue)


def test_welch_degenerate_branches():
    flat = welch_test([5.0, 5.0, 5.0], [5.0, 5.0])
    assert flat.statistic == 0.0
    assert flat.p_greater == 0.5
    up = welch_test([6.0, 6.0], [5.0, 5.0, 5.0])
    assert up.statistic == math.inf
    assert up.p_greater == 0.0
    down = welch_test([4.0, 4.0], [5.0, 5.0])
    assert down.statistic == -math.inf
    assert down.p_greater == 1.0
    with pytest.raises(ValueError, match="two observations"):
        welch_test([1.0], [2.0, 3.0])
