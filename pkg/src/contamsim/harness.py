"""Batch experiment runner and the statistics used to compare strategies.

A batch plays `games` independent games that differ only in their seed
(base_seed + game index).  Rows come back sorted by game id regardless
of worker scheduling, so a batch's CSV is reproducible byte for byte.
"""

import csv
import math
import os
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from .engine import run_game
from .geometry import WorldConfig
from .strategies import STRATEGY_NAMES, make_strategy

CSV_FIELDS = (
    "game_id",
    "seed",
    "agents_per_side",
    "strategy_healthy",
    "strategy_contaminated",
    "steps",
    "termination",
    "final_healthy",
    "final_contaminated",
    "final_healthy_pct",
)

_INT_FIELDS = {
    "game_id",
    "seed",
    "agents_per_side",
    "steps",
    "final_healthy",
    "final_contaminated",
}


@dataclass(frozen=True)
class ExperimentConfig:
    games: int
    agents_per_side: int
    strategy_healthy: str
    strategy_contaminated: str
    base_seed: int = 0
    overrides: dict = field(default_factory=dict)
    scheduler: str = "random"

    def __post_init__(self):
        if self.games < 1:
            raise ValueError("games must be positive")
        if self.agents_per_side < 1:
            raise ValueError("agents_per_side must be positive")
        for name in (self.strategy_healthy, self.strategy_contaminated):
            if name not in STRATEGY_NAMES:
                raise ValueError(
                    f"unknown strategy {name!r}; expected one of "
                    f"{STRATEGY_NAMES}"
                )
        # fail on bad overrides at config time, not in a worker
        WorldConfig().with_overrides(self.overrides)

    @classmethod
    def from_dict(cls, raw):
        allowed = {
            "games",
            "agents_per_side",
            "strategy_healthy",
            "strategy_contaminated",
            "base_seed",
            "overrides",
            "scheduler",
        }
        unknown = set(raw) - allowed
        if unknown:
            raise ValueError(f"unknown experiment keys: {sorted(unknown)}")
        missing = {
            "games",
            "agents_per_side",
            "strategy_healthy",
            "strategy_contaminated",
        } - set(raw)
        if missing:
            raise ValueError(f"missing experiment keys: {sorted(missing)}")
        return cls(**raw)


def _run_one(args):
    exp, game_id = args
    cfg = WorldConfig().with_overrides(exp.overrides)
    seed = exp.base_seed + game_id
    result = run_game(
        cfg,
        make_strategy(exp.strategy_healthy, cfg),
        make_strategy(exp.strategy_contaminated, cfg),
        n_healthy=exp.agents_per_side,
        n_contaminated=exp.agents_per_side,
        seed=seed,
        scheduler=exp.scheduler,
    )
    return {
        "game_id": game_id,
        "seed": seed,
        "agents_per_side": exp.agents_per_side,
        "strategy_healthy": exp.strategy_healthy,
        "strategy_contaminated": exp.strategy_contaminated,
        "steps": result.steps,
        "termination": result.termination,
        "final_healthy": result.final_healthy,
        "final_contaminated": result.final_contaminated,
        "final_healthy_pct": result.final_healthy_pct,
    }


def default_jobs():
    env = os.environ.get("CONTAM_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_batch(exp, jobs=None):
    """Play every game in the experiment, parallelized over processes.

    Returns one row dict per game, sorted by game_id."""
    jobs = default_jobs() if jobs is None else max(1, int(jobs))
    tasks = [(exp, gid) for gid in range(exp.games)]
    if jobs == 1 or exp.games == 1:
        rows = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, exp.games)) as pool:
            rows = list(pool.map(_run_one, tasks))
    rows.sort(key=lambda r: r["game_id"])
    return rows


def write_csv(rows, fh):
    writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in sorted(rows, key=lambda r: r["game_id"]):
        writer.writerow(row)


def read_csv(fh):
    rows = []
    for raw in csv.DictReader(fh):
        row = dict(raw)
        for key in _INT_FIELDS:
            row[key] = int(row[key])
        row["final_healthy_pct"] = float(row["final_healthy_pct"])
        rows.append(row)
    return rows


WelchResult = namedtuple("WelchResult", "statistic df p_greater p_two_sided")


def welch_test(xs, ys):
    """Welch's unequal-variance t-test of mean(xs) vs mean(ys).

    Degrees of freedom come from the Welch–Satterthwaite formula;
    p_greater is the one-sided p-value for mean(xs) > mean(ys)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    nx, ny = len(xs), len(ys)
    if nx < 2 or ny < 2:
        raise ValueError("both samples need at least two observations")
    vx = xs.var(ddof=1)
    vy = ys.var(ddof=1)
    se2 = vx / nx + vy / ny
    diff = xs.mean() - ys.mean()
    if se2 == 0.0:
        # identical constants on both sides: no evidence either way
        t = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        df = float(nx + ny - 2)
    else:
        t = diff / math.sqrt(se2)
        df = se2 * se2 / (
            (vx / nx) ** 2 / (nx - 1) + (vy / ny) ** 2 / (ny - 1)
        )
    p_greater = float(scipy.stats.t.sf(t, df))
    p_two = float(2.0 * scipy.stats.t.sf(abs(t), df))
    return WelchResult(float(t), float(df), p_greater, min(p_two, 1.0))
