"""End-to-end checks, one per headline guarantee.

These are the claims the package stands on: optimality of the conquest
algorithm on small graphs, the frozen eight-agent trace, the sequence
transform inequality, the capacity constants, dense-circle dominance,
the formation handshake, strategy-comparison direction, the symmetric
control, and byte-level CLI reproducibility.  The strategy-comparison
test plays 400 full-size games and takes ten-plus minutes; everything
else is seconds.
"""

import io
import json
import random
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from conftest import (
    all_connected_adjacencies,
    random_connected_adjacency,
    random_sequence_steps,
)
from contamsim.bounds import dense_circle_wpc, odc
from contamsim.engine import World, place_agents, run_game
from contamsim.geometry import WorldConfig, dense_circle_capacity
from contamsim.graph import AgentSnapshot, components_of
from contamsim.harness import ExperimentConfig, run_batch, welch_test
from contamsim.strategies import make_strategy
from contamsim.wpc import (
    AttackingSequence,
    abstract_component,
    brute_force_min_conquer,
    iterative_conquer,
    sequence_cost,
    transform_sequence,
    weak_point_rule,
    wpc_abstract,
)

CFG = WorldConfig()
DATA = Path(__file__).parent / "data"


def test_wpc_matches_bruteforce_on_small_graphs():
    # exhaustive over every labeled connected graph up to five nodes
    counts = []
    for n in range(1, 6):
        count = 0
        for adj in all_connected_adjacencies(n):
            assert wpc_abstract(adj) == brute_force_min_conquer(adj), adj
            count += 1
        counts.append(count)
    assert counts == [1, 1, 4, 38, 728]
    rng = random.Random(1234)
    for k in range(200):
        adj = random_connected_adjacency(rng, 6 + (k % 2))
        assert wpc_abstract(adj) == brute_force_min_conquer(adj), adj


def test_eight_agent_conquest_trace():
    adjacency = {
        1: {2, 3},
        2: {1, 3, 4, 5, 8},
        3: {1, 2, 4, 5},
        4: {2, 3, 5, 6},
        5: {2, 3, 4, 6, 7, 8},
        6: {4, 5, 7},
        7: {5, 6, 8},
        8: {2, 5, 7},
    }
    required, trace = iterative_conquer(
        abstract_component(adjacency), weak_point_rule
    )
    assert required == 3
    assert trace.c_totals[:7] == [4, 5, 6, 7, 8, 9, 10]
    assert all(r == 3 for r in trace.r_totals)


def test_transform_never_costlier():
    rng = random.Random(77)
    for _ in range(500):
        n = rng.randint(3, 8)
        comp = abstract_component(random_connected_adjacency(rng, n))
        steps = random_sequence_steps(rng, sorted(comp.members))
        seq = AttackingSequence(comp, steps)
        out = transform_sequence(seq)
        assert out.is_singular
        assert sequence_cost(out) <= sequence_cost(seq)
        flat = [m for step in out.steps for m in step]
        assert sorted(flat) == sorted(comp.members)


def test_capacity_constants():
    assert dense_circle_capacity(3.0, 0.25) == 37
    spec = odc(CFG)
    assert spec.count == 37
    assert spec.radius == 3.0
    assert CFG.max_clique_size == 9


def test_dense_circle_dominance():
    at_optimum = dense_circle_wpc(3.0, 37, CFG)
    for r in (1.0, 2.0, 2.5, 3.5, 4.0, 5.0):
        count = min(37, dense_circle_capacity(r, CFG.d_r))
        other = dense_circle_wpc(r, count, CFG)
        assert at_optimum >= other, (r, other)
        if r > 3.0:
            assert at_optimum > other, (r, other)

    # scattered same-size components never beat the dense circle
    from contamsim.wpc import wpc

    found = 0
    seed = 0
    while found < 50:
        rng = np.random.default_rng(seed)
        seed += 1
        pts = []
        while len(pts) < 37:
            x, y = rng.uniform(20.0, 36.0, size=2)
            if all(
                (x - p) ** 2 + (y - q) ** 2 > (2 * CFG.d_r) ** 2
                for p, q in pts
            ):
                pts.append((x, y))
        agents = [
            AgentSnapshot(i, p, q, "healthy") for i, (p, q) in enumerate(pts)
        ]
        comps, _ = components_of(agents, CFG)
        if len(comps) != 1:
            continue
        found += 1
        assert wpc(comps[0]) <= at_optimum, seed - 1


def test_formation_protocol_trace():
    agents = [
        AgentSnapshot(0, 50.0, 50.0, "healthy"),
        AgentSnapshot(1, 54.0, 50.0, "healthy"),
        AgentSnapshot(2, 52.0, 53.0, "healthy"),
    ]
    log = []
    w = World(
        CFG,
        agents,
        make_strategy("circle"),
        make_strategy("circle"),
        scheduler="ordered",
        message_log=log,
    )
    for _ in range(3):
        w.step()
    got = {
        "messages": [e for e in log if e["step"] <= 2],
        "formations": {str(i): w.agents[i].formation for i in w.ids},
    }
    golden = json.loads((DATA / "formation_trace.json").read_text())
    assert got == golden
    kinds = [m["kind"] for m in got["messages"]]
    assert kinds == (
        ["observation_share"] * 3
        + ["circle_proposal", "circle_approval", "circle_approval"]
        + ["circle_establishment"]
    )
    assert set(got["formations"].values()) == {"converging"}


def _batch_pcts(healthy, contaminated, per_side, games):
    exp = ExperimentConfig(
        games=games,
        agents_per_side=per_side,
        strategy_healthy=healthy,
        strategy_contaminated=contaminated,
        base_seed=0,
    )
    rows = run_batch(exp, jobs=1)
    return [r["final_healthy_pct"] for r in rows]


def test_strategy_matchups():
    # circle formations versus the potential-forces baseline, against a
    # symmetric potential-versus-potential control batch
    circle = _batch_pcts("circle", "potential", 60, 100)
    control = _batch_pcts("potential", "potential", 60, 100)
    mean = sum(circle) / len(circle)
    stat = welch_test(circle, control)
    assert mean > 50.0, mean
    assert stat.p_greater < 0.05, (mean, stat)

    # circle merge cap versus the clique-sized cap, scored against the
    # clique mirror match
    cvk = _batch_pcts("circle", "clique", 80, 100)
    kvk = _batch_pcts("clique", "clique", 80, 100)
    assert sum(cvk) / len(cvk) >= sum(kvk) / len(kvk), (
        sum(cvk) / len(cvk),
        sum(kvk) / len(kvk),
    )


def test_symmetric_control_stays_even():
    # identical strategies, 100 seeds each run with labels both ways
    pcts = []
    for seed in range(100):
        rng = np.random.default_rng(seed)
        base = place_agents(CFG, 50, 50, rng)
        flipped = [
            AgentSnapshot(
                a.id,
                a.x,
                a.y,
                "contaminated" if a.state == "healthy" else "healthy",
            )
            for a in base
        ]
        for agents in (base, flipped):
            res = run_game(
                CFG,
                make_strategy("random"),
                make_strategy("random"),
                agents=agents,
                seed=seed,
            )
            pcts.append(res.final_healthy_pct)
    mean = sum(pcts) / len(pcts)
    assert len(pcts) == 200
    assert abs(mean - 50.0) <= 5.0, mean


def test_cli_reruns_are_byte_identical(tmp_path):
    traj = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.jsonl"
        r = subprocess.run(
            [
                sys.executable,
                "-m",
                "contamsim.cli",
                "game",
                "--seed",
                "7",
                "--n",
                "10",
                "--trajectory",
                str(out),
            ],
            capture_output=True,
            text=True,
            check=True,
        )
        traj.append(out.read_bytes() + r.stdout.encode())
    assert traj[0] == traj[1]

    exp = tmp_path / "exp.json"
    exp.write_text(
        json.dumps(
            {
                "games": 3,
                "agents_per_side": 4,
                "strategy_healthy": "circle",
                "strategy_contaminated": "random",
                "overrides": {"t_max": 64},
            }
        )
    )
    csvs = []
    for name in ("c", "d"):
        out = tmp_path / f"{name}.csv"
        subprocess.run(
            [
                sys.executable,
                "-m",
                "contamsim.cli",
                "run",
                "--config",
                str(exp),
                "--out",
                str(out),
                "--jobs",
                "1",
            ],
            capture_output=True,
            check=True,
        )
        csvs.append(out.read_bytes())
    assert csvs[0] == csvs[1]
    assert csvs[0].startswith(b"game_id,seed,")
