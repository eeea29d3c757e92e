"""Synchronous two-swarm game loop.

Each step runs in a fixed order: (1) every agent recomputes its state
by majority vote over its observed set (self included; an exact tie
preserves the current state) from a start-of-step snapshot, (2) agents
act one at a
time in schedule order -- read and clear the mailbox, observe, decide,
send messages (delivered immediately, so an agent later in the schedule
sees mail sent earlier in the same step) and queue a movement, (3) all
queued movements apply simultaneously, clamped to v_max and the arena.

Strategies only ever see their own observation, mailbox, memory and the
shared RNG -- never the world -- which keeps information strictly local.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import visibility_edges
from .geometry import WorldConfig
from .graph import STATE_CONTAMINATED, STATE_HEALTHY, build_observation_graph

TERM_ALL_HEALTHY = "AllHealthy"
TERM_ALL_CONTAMINATED = "AllContaminated"
TERM_STAGNATION = "Stagnation"
TERM_TIME_BOUND = "TimeBound"

FORM_SINGLE = "single"
FORM_CONVERGING = "converging"
FORM_CIRCLE = "circle"


@dataclass(frozen=True)
class Message:
    sender: int
    kind: str
    payload: dict


@dataclass(frozen=True)
class Neighbor:
    """What an observer learns about one observed agent."""

    id: int
    x: float
    y: float
    state: str
    formation: str
    dist: float

    @property
    def pos(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class Observation:
    self_id: int
    x: float
    y: float
    state: str
    neighbors: tuple

    @property
    def pos(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class TurnContext:
    """Everything a strategy may look at during one agent's turn."""

    obs: Observation
    mailbox: tuple
    memory: dict
    rng: np.random.Generator
    step: int
    cfg: WorldConfig


@dataclass
class Decision:
    """A strategy's output: a desired displacement (the engine clamps
    it to v_max and the arena) plus messages as (recipients, kind,
    payload) triples.  Recipients outside the observed set are dropped."""

    move: tuple = (0.0, 0.0)
    messages: tuple = ()


@dataclass
class _Agent:
    id: int
    x: float
    y: float
    state: str
    formation: str = FORM_SINGLE
    memory: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GameResult:
    termination: str
    steps: int
    history: tuple  # (healthy, contaminated) per completed step
    final_healthy: int
    final_contaminated: int
    final_healthy_pct: float

    def as_dict(self):
        return {
            "termination": self.termination,
            "steps": self.steps,
            "final_healthy": self.final_healthy,
            "final_contaminated": self.final_contaminated,
            "final_healthy_pct": self.final_healthy_pct,
        }


class World:
    """Owns the agents, the RNG and the step loop."""

    def __init__(
        self,
        cfg,
        agents,
        strategy_healthy,
        strategy_contaminated,
        seed=0,
        scheduler="random",
        message_log=None,
    ):
        if scheduler not in ("random", "ordered"):
            raise ValueError(f"unknown scheduler {scheduler!r}")
        self.cfg = cfg
        self.agents = {}
        for a in agents:
            if a.id in self.agents:
                raise ValueError(f"duplicate agent id {a.id}")
            self.agents[a.id] = _Agent(a.id, a.x, a.y, a.state)
        self.ids = sorted(self.agents)
        self.strategies = {
            STATE_HEALTHY: strategy_healthy,
            STATE_CONTAMINATED: strategy_contaminated,
        }
        self.rng = np.random.default_rng(seed)
        self.scheduler = scheduler
        self.mailbox = {i: [] for i in self.ids}
        self.step_no = 0
        self.history = []
        self.message_log = message_log  # list to append trace dicts, or None

    # -- observation ---------------------------------------------------

    def _adjacency(self):
        xs = np.array([self.agents[i].x for i in self.ids])
        ys = np.array([self.agents[i].y for i in self.ids])
        ei, ej = visibility_edges(
            xs, ys, self.cfg.s_min, self.cfg.s_max, self.cfg.d_r, self.cfg.eps
        )
        adj = {i: [] for i in self.ids}
        for a, b in zip(ei, ej):
            u, v = self.ids[a], self.ids[b]
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def _observe(self, agent_id, adj):
        me = self.agents[agent_id]
        neighbors = []
        for other_id in sorted(adj[agent_id]):
            o = self.agents[other_id]
            neighbors.append(
                Neighbor(
                    o.id,
                    o.x,
                    o.y,
                    o.state,
                    o.formation,
                    math.hypot(o.x - me.x, o.y - me.y),
                )
            )
        return Observation(me.id, me.x, me.y, me.state, tuple(neighbors))

    # -- one step --------------------------------------------------------

    def step(self):
        cfg = self.cfg
        adj = self._adjacency()

        old_state = {i: self.agents[i].state for i in self.ids}
        new_state = _majority_states(old_state, adj)
        for i in self.ids:
            self.agents[i].state = new_state[i]

        # Agent turns.
        if self.scheduler == "random":
            order = self.rng.permutation(len(self.ids))
        else:
            order = range(len(self.ids))
        moves = {}
        for idx in order:
            agent_id = self.ids[idx]
            agent = self.agents[agent_id]
            mailbox = tuple(self.mailbox[agent_id])
            self.mailbox[agent_id] = []
            obs = self._observe(agent_id, adj)
            ctx = TurnContext(
                obs, mailbox, agent.memory, self.rng, self.step_no, cfg
            )
            decision = self.strategies[agent.state].act(ctx)
            observed = set(adj[agent_id])
            for recipients, kind, payload in decision.messages:
                targets = [r for r in recipients if r in observed]
                for r in targets:
                    self.mailbox[r].append(Message(agent_id, kind, payload))
                if self.message_log is not None and targets:
                    self.message_log.append(
                        {
                            "step": self.step_no,
                            "sender": agent_id,
                            "recipients": sorted(targets),
                            "kind": kind,
                            "payload": _jsonable(payload),
                        }
                    )
            agent.formation = agent.memory.get("formation", FORM_SINGLE)
            moves[agent_id] = decision.move

        # Simultaneous movement, clamped to v_max and the arena.
        for i in self.ids:
            dx, dy = moves.get(i, (0.0, 0.0))
            norm = math.hypot(dx, dy)
            if norm > cfg.v_max:
                scale = cfg.v_max / norm
                dx *= scale
                dy *= scale
            a = self.agents[i]
            a.x = min(max(a.x + dx, 0.0), cfg.arena_width)
            a.y = min(max(a.y + dy, 0.0), cfg.arena_height)

        self.step_no += 1
        h = sum(1 for i in self.ids if self.agents[i].state == STATE_HEALTHY)
        self.history.append((h, len(self.ids) - h))

    # -- termination ------------------------------------------------------

    def termination(self):
        """The first satisfied halting rule, or None to keep running."""
        if not self.history:
            return None
        h, c = self.history[-1]
        if c == 0:
            return TERM_ALL_HEALTHY
        if h == 0:
            return TERM_ALL_CONTAMINATED
        w = self.cfg.stagnation_window
        if len(self.history) >= w and len(set(self.history[-w:])) == 1:
            return TERM_STAGNATION
        if self.step_no >= self.cfg.t_max:
            return TERM_TIME_BOUND
        return None


def _majority_states(states, adj):
    """New states by majority vote over each agent's observed set.

    The observed set includes the agent itself; a strict majority of the
    other color flips the state and an exact tie preserves it (a tied
    healthy agent therefore stays healthy).
    """
    new_state = {}
    for i, own in states.items():
        h = sum(1 for j in adj[i] if states[j] == STATE_HEALTHY)
        c = len(adj[i]) - h
        if own == STATE_HEALTHY:
            h += 1
        else:
            c += 1
        if h == c:
            new_state[i] = own
        else:
            new_state[i] = STATE_HEALTHY if h > c else STATE_CONTAMINATED
    return new_state


def majority_update(agents, cfg):
    """One synchronous majority update over AgentSnapshots.

    Returns {id: new state} computed simultaneously from the given
    positions and states.
    """
    graph = build_observation_graph(agents, cfg)
    states = {a.id: a.state for a in graph.agents.values()}
    return _majority_states(states, {i: graph.adj[i] for i in graph.ids})


def _jsonable(value):
    """Round-trip through json to normalize tuples/sets for trace logs."""
    def default(o):
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (np.floating,)):
            return float(o)
        raise TypeError(f"not trace-serializable: {o!r}")

    return json.loads(json.dumps(value, default=default))


def place_agents(cfg, n_healthy, n_contaminated, rng):
    """Uniform rejection-sampled placement, pairwise spacing >= 2*d_r."""
    n = n_healthy + n_contaminated
    min_d2 = (2.0 * cfg.d_r) ** 2
    xs = np.empty(n)
    ys = np.empty(n)
    placed = 0
    attempts = 0
    limit = 10_000 * max(n, 1)
    while placed < n:
        if attempts >= limit:
            raise RuntimeError(
                f"could not place {n} agents with spacing "
                f"{2 * cfg.d_r} in a {cfg.arena_width}x{cfg.arena_height} arena"
            )
        attempts += 1
        x = rng.uniform(0.0, cfg.arena_width)
        y = rng.uniform(0.0, cfg.arena_height)
        d2 = (xs[:placed] - x) ** 2 + (ys[:placed] - y) ** 2
        if placed and d2.min() <= min_d2:
            continue
        xs[placed] = x
        ys[placed] = y
        placed += 1
    from .graph import AgentSnapshot

    states = [STATE_HEALTHY] * n_healthy + [STATE_CONTAMINATED] * n_contaminated
    return [
        AgentSnapshot(i, float(xs[i]), float(ys[i]), states[i])
        for i in range(n)
    ]


def _trajectory_record(world):
    return {
        "step": world.step_no,
        "positions": [
            [world.agents[i].x, world.agents[i].y] for i in world.ids
        ],
        "states": [world.agents[i].state for i in world.ids],
        "messages": sum(len(world.mailbox[i]) for i in world.ids),
    }


def run_game(
    cfg,
    strategy_healthy,
    strategy_contaminated,
    *,
    agents=None,
    n_healthy=None,
    n_contaminated=None,
    seed=0,
    scheduler="random",
    trajectory=None,
    message_log=None,
    max_steps=None,
):
    """Play one game to termination and return a GameResult.

    Provide either explicit `agents` (AgentSnapshot list) or counts for
    random placement.  `trajectory`, if given, is a file-like object
    that receives one JSON line per step.  The placement and the loop
    share a single np.random.default_rng(seed), so a (seed, config)
    pair fully determines the run.
    """
    rng = np.random.default_rng(seed)
    if agents is None:
        if n_healthy is None or n_contaminated is None:
            raise ValueError("need agents or both side counts")
        agents = place_agents(cfg, n_healthy, n_contaminated, rng)
    world = World(
        cfg,
        agents,
        strategy_healthy,
        strategy_contaminated,
        scheduler=scheduler,
        message_log=message_log,
    )
    world.rng = rng  # placement and stepping share one stream
    bound = cfg.t_max if max_steps is None else min(max_steps, cfg.t_max)
    term = None
    while term is None:
        world.step()
        if trajectory is not None:
            trajectory.write(
                json.dumps(_trajectory_record(world), separators=(",", ":"))
                + "\n"
            )
        term = world.termination()
        if term is None and world.step_no >= bound:
            term = TERM_TIME_BOUND
    h, c = world.history[-1]
    total = h + c
    return GameResult(
        termination=term,
        steps=world.step_no,
        history=tuple(world.history),
        final_healthy=h,
        final_contaminated=c,
        final_healthy_pct=100.0 * h / total if total else 0.0,
    )
