"""Observation graph, same-state components, and the fence.

The observation graph has an edge wherever two agents can observe each
other (annulus plus occlusion).  Components are connected subgraphs of
agents sharing one health state; an agent's connectivity factor counts
the same-state agents it observes (itself excluded).  The fence of a
component is the set of bare agents: members whose observation area is
not fully covered by the other members' areas, approximated by sampling
points on each member's sensing boundary.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import WorldConfig

STATE_HEALTHY = "healthy"
STATE_CONTAMINATED = "contaminated"
STATES = (STATE_HEALTHY, STATE_CONTAMINATED)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AgentSnapshot:
    """Immutable view of one agent: unique id, position, health state."""

    id: int
    x: float
    y: float
    state: str

    def __post_init__(self):
        if self.state not in STATES:
            raise ValueError(f"unknown state {self.state!r}")

    @property
    def pos(self):
        return (self.x, self.y)


class ObservationGraph:
    """Undirected observation graph over a set of agent snapshots.

    `adj[i]` holds the ids agent i observes (never including i itself);
    `observed(i)` adds i back, matching the convention that every agent
    is included in its own observation area.
    """

    def __init__(self, agents, adj, cfg):
        self.agents = {a.id: a for a in agents}
        self.ids = tuple(sorted(self.agents))
        self.adj = adj
        self.cfg = cfg

    def observed(self, i):
        return self.adj[i] | {i}

    @property
    def edges(self):
        return {(i, j) for i in self.ids for j in self.adj[i] if i < j}


def build_observation_graph(agents, cfg):
    """Build the observation graph for a list of AgentSnapshots.

    Raises ValueError if ids collide or any two agents overlap
    (pairwise distance must exceed the body diameter d_r).
    """
    ids = [a.id for a in agents]
    if len(set(ids)) != len(ids):
        raise ValueError("agent ids must be unique")
    order = sorted(agents, key=lambda a: a.id)
    xs = np.array([a.x for a in order], dtype=np.float64)
    ys = np.array([a.y for a in order], dtype=np.float64)
    n = len(order)
    if n > 1:
        dx = xs[None, :] - xs[:, None]
        dy = ys[None, :] - ys[:, None]
        d2 = dx * dx + dy * dy
        np.fill_diagonal(d2, np.inf)
        if d2.min() <= cfg.d_r * cfg.d_r:
            a, b = np.unravel_index(int(d2.argmin()), d2.shape)
            raise ValueError(
                f"agents {order[a].id} and {order[b].id} overlap "
                f"(distance {math.sqrt(d2[a, b]):.4f} <= d_r={cfg.d_r})"
            )
    ei, ej = _kernels.visibility_edges(xs, ys, cfg.s_min, cfg.s_max, cfg.d_r, cfg.eps)
    adj = {a.id: set() for a in order}
    for i, j in zip(ei.tolist(), ej.tolist()):
        a, b = order[i].id, order[j].id
        adj[a].add(b)
        adj[b].add(a)
    return ObservationGraph(order, {i: frozenset(s) for i, s in adj.items()}, cfg)


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class ComponentView:
    """One same-state connected component with its induced adjacency.

    Carries the full world (for occlusion when sampling the fence) and
    caches the boundary-sample visibility/coverage matrices so the fence
    of any surviving subset of members is a cheap boolean reduction —
    the weak-point conquest loop re-queries it once per iteration.
    """

    def __init__(self, members, adj, state, positions, world, cfg):
        self.members = tuple(sorted(members))
        self.adj = {i: frozenset(adj[i]) for i in self.members}
        self.state = state
        self.pos = dict(positions)
        self.world = tuple(world)
        self.cfg = cfg
        self._row = {i: r for r, i in enumerate(self.members)}
        self._visible = None
        self._covered = None

    def __len__(self):
        return len(self.members)

    def cf(self, agent):
        """Connectivity factor: same-state members observed, self excluded."""
        return len(self.adj[agent])

    def _ensure_coverage(self):
        if self._visible is not None:
            return
        cfg = self.cfg
        mx = np.array([self.pos[i][0] for i in self.members])
        my = np.array([self.pos[i][1] for i in self.members])
        wx = np.array([a.x for a in self.world])
        wy = np.array([a.y for a in self.world])
        world_row = {a.id: r for r, a in enumerate(self.world)}
        idx = np.array([world_row[i] for i in self.members], dtype=np.int32)
        k = cfg.fence_samples
        angles = TWO_PI * np.arange(k) / k
        r = cfg.s_max * (1.0 - cfg.eps)
        sx = mx[:, None] + r * np.cos(angles)[None, :]
        sy = my[:, None] + r * np.sin(angles)[None, :]
        self._visible, self._covered = _kernels.fence_coverage(
            mx, my, sx, sy, wx, wy, idx, cfg.s_min, cfg.s_max, cfg.d_r, cfg.eps
        )

    def bare(self, remaining=None):
        """Members of `remaining` (default: all) whose boundary keeps at
        least one sampled point visible to them and uncovered by every
        other remaining member's observation area."""
        if remaining is None:
            remaining = self.members
        remaining = sorted(remaining)
        if len(remaining) == 1:
            return frozenset(remaining)
        self._ensure_coverage()
        rows = np.array([self._row[i] for i in remaining])
        out = []
        for i in remaining:
            ri = self._row[i]
            others = rows[rows != ri]
            covered = self._covered[others, ri, :].any(axis=0)
            if bool((self._visible[ri].astype(bool) & ~covered).any()):
                out.append(i)
        return frozenset(out)


def connected_components(graph, states=None):
    """Split the observation graph into same-state components.

    Returns (components, adjacency): `components` is a list of
    ComponentViews; `adjacency` the set of (i, j) component-index pairs
    (i < j) joined by at least one edge between opposing states.
    """
    if states is None:
        states = {i: graph.agents[i].state for i in graph.ids}
    uf = _UnionFind(graph.ids)
    for i in graph.ids:
        for j in graph.adj[i]:
            if i < j and states[i] == states[j]:
                uf.union(i, j)
    groups = {}
    for i in graph.ids:
        groups.setdefault(uf.find(i), []).append(i)
    world = [graph.agents[i] for i in graph.ids]
    components = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        members = groups[root]
        adj = {i: graph.adj[i] & set(members) for i in members}
        components.append(
            ComponentView(
                members,
                adj,
                states[members[0]],
                {i: graph.agents[i].pos for i in members},
                world,
                graph.cfg,
            )
        )
    comp_of = {}
    for idx, comp in enumerate(components):
        for i in comp.members:
            comp_of[i] = idx
    adjacency = set()
    for i in graph.ids:
        for j in graph.adj[i]:
            if states[i] != states[j]:
                a, b = comp_of[i], comp_of[j]
                adjacency.add((min(a, b), max(a, b)))
    return components, adjacency


def connectivity_factor(agent, comp):
    """Connectivity factor of `agent` within its component."""
    if agent not in comp.adj:
        raise KeyError(f"agent {agent} not in component {comp.members}")
    return comp.cf(agent)


def fence(comp):
    """The bare members (Fence) of a component."""
    return comp.bare()


def components_of(agents, cfg):
    """Convenience: observation graph + components in one call."""
    return connected_components(build_observation_graph(agents, cfg))


def load_component(source):
    """Load a single same-state component from JSON.

    Accepts a path or a parsed dict shaped {"agents": [{id, x, y,
    state}], "cfg": {optional WorldConfig overrides}}.  The agents must
    form exactly one connected same-state component.
    """
    if isinstance(source, (str, bytes)):
        with open(source) as fh:
            obj = json.load(fh)
    else:
        obj = source
    cfg = WorldConfig().with_overrides(obj.get("cfg", {}))
    agents = [
        AgentSnapshot(int(a["id"]), float(a["x"]), float(a["y"]), a["state"])
        for a in obj["agents"]
    ]
    comps, _ = components_of(agents, cfg)
    if len(comps) != 1:
        sizes = [len(c) for c in comps]
        raise ValueError(f"expected one connected component, found {sizes}")
    return comps[0]
