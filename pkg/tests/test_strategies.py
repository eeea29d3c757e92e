"""Strategy behavior: registry, local forces, and the circle protocol."""

import math

import numpy as np
import pytest

from contamsim.engine import (
    Decision,
    Neighbor,
    Observation,
    TurnContext,
    World,
)
from contamsim.geometry import WorldConfig
from contamsim.graph import AgentSnapshot
from contamsim.strategies import (
    STRATEGY_NAMES,
    FormationStrategy,
    PotentialForces,
    RandomWalk,
    circle_slots,
    make_strategy,
)

CFG = WorldConfig()


def ctx_for(obs, *, mailbox=(), memory=None, rng=None, step=0, cfg=CFG):
    return TurnContext(
        obs,
        mailbox,
        {} if memory is None else memory,
        np.random.default_rng(0) if rng is None else rng,
        step,
        cfg,
    )


def lone(state="healthy", neighbors=()):
    return Observation(0, 50.0, 50.0, state, tuple(neighbors))


def neighbor(i, x, y, state="healthy", formation="single"):
    d = math.hypot(x - 50.0, y - 50.0)
    return Neighbor(i, x, y, state, formation, d)


# -- registry ------------------------------------------------------------


def test_registry_builds_each_strategy():
    assert STRATEGY_NAMES == ("circle", "clique", "potential", "random")
    assert isinstance(make_strategy("random"), RandomWalk)
    assert isinstance(make_strategy("potential"), PotentialForces)
    assert isinstance(make_strategy("circle"), FormationStrategy)
    assert isinstance(make_strategy("clique"), FormationStrategy)
    with pytest.raises(ValueError, match="unknown strategy"):
        make_strategy("greedy")


def test_merge_thresholds():
    assert make_strategy("circle").threshold(CFG) == 37
    assert make_strategy("clique").threshold(CFG) == 9
    assert FormationStrategy(5).threshold(CFG) == 5
    # cached after the first call
    s = make_strategy("circle")
    assert s.threshold(CFG) == s.threshold(CFG) == 37


# -- random walk ----------------------------------------------------------


def test_random_walk_full_speed_and_seeded():
    d1 = RandomWalk().act(ctx_for(lone(), rng=np.random.default_rng(7)))
    d2 = RandomWalk().act(ctx_for(lone(), rng=np.random.default_rng(7)))
    assert d1.move == d2.move
    assert math.hypot(*d1.move) == pytest.approx(CFG.v_max)
    assert d1.messages == ()


# -- potential forces -------------------------------------------------------


def test_potential_attracts_distant_same_state():
    obs = lone(neighbors=[neighbor(1, 54.0, 50.0)])
    move = PotentialForces().act(ctx_for(obs)).move
    assert move == pytest.approx((1.0, 0.0))


def test_potential_repels_crowding_same_state():
    obs = lone(neighbors=[neighbor(1, 51.5, 50.0)])
    move = PotentialForces().act(ctx_for(obs)).move
    assert move == pytest.approx((-1.0, 0.0))


def test_potential_ignores_other_side():
    obs = lone(neighbors=[neighbor(1, 54.0, 50.0, state="contaminated")])
    assert PotentialForces().act(ctx_for(obs)).move == (0.0, 0.0)


def test_potential_forces_sum():
    obs = lone(
        neighbors=[neighbor(1, 54.0, 50.0), neighbor(2, 50.0, 54.0)]
    )
    move = PotentialForces().act(ctx_for(obs)).move
    assert move == pytest.approx((1.0, 1.0))


# -- circle slots -----------------------------------------------------------


def test_circle_slots_spacing():
    slots = circle_slots([3, 1, 2], (10.0, 20.0), 5.0)
    assert set(slots) == {1, 2, 3}
    assert slots[1] == pytest.approx((15.0, 20.0))  # lowest id at angle 0
    for p in slots.values():
        assert math.hypot(p[0] - 10, p[1] - 20) == pytest.approx(5.0)
    chord = 2 * 5.0 * math.sin(math.pi / 3)
    assert math.dist(slots[1], slots[2]) == pytest.approx(chord)


# -- memory hygiene ----------------------------------------------------------


def test_state_flip_resets_coordination_memory():
    mem = {
        "health": "healthy",
        "formation": "circle",
        "circle": {"id": "stale"},
        "known_obs": {9: {}},
    }
    make_strategy("circle").act(ctx_for(lone("contaminated"), memory=mem))
    assert mem["health"] == "contaminated"
    assert mem["formation"] == "single"
    assert "circle" not in mem


def test_lone_single_stays_single():
    mem = {}
    make_strategy("circle").act(ctx_for(lone(), memory=mem))
    assert mem["formation"] == "single"


# -- the three-agent formation run -------------------------------------------


def run_trio(steps):
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
    for _ in range(steps):
        w.step()
    return w, log


def test_trio_handshake_message_order():
    w, log = run_trio(3)
    kinds = [(e["step"], e["sender"], e["kind"]) for e in log]
    assert kinds == [
        (0, 0, "observation_share"),
        (0, 1, "observation_share"),
        (0, 2, "observation_share"),
        (1, 0, "circle_proposal"),
        (1, 1, "circle_approval"),
        (1, 2, "circle_approval"),
        (2, 0, "circle_establishment"),
    ]
    assert [w.agents[i].formation for i in w.ids] == ["converging"] * 3


def test_trio_settles_on_shared_circle():
    w, _ = run_trio(14)
    assert [w.agents[i].formation for i in w.ids] == ["circle"] * 3
    circles = [w.agents[i].memory["circle"] for i in w.ids]
    assert {c["id"] for c in circles} == {"c0s1"}
    assert all(c["members"] == [0, 1, 2] for c in circles)
    center = circles[0]["center"]
    assert center == (52.0, 51.0)
    slots = circle_slots([0, 1, 2], center, 3.0)
    for i in w.ids:
        a = w.agents[i]
        assert math.dist((a.x, a.y), slots[i]) < 0.05
