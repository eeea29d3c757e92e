"""Shared test helpers: small-graph generators and scene builders."""

import itertools
import random

from contamsim.graph import AgentSnapshot


def all_connected_adjacencies(n):
    """Yield every labeled connected graph on vertices 0..n-1 as an
    adjacency dict."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        adj = {i: set() for i in range(n)}
        for bit, (i, j) in enumerate(pairs):
            if mask >> bit & 1:
                adj[i].add(j)
                adj[j].add(i)
        if _connected(adj):
            yield adj


def _connected(adj):
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return len(seen) == len(adj)


def random_connected_adjacency(rng, n):
    """Random labeled connected graph: a random spanning tree plus each
    remaining edge independently with probability 0.3."""
    adj = {i: set() for i in range(n)}
    order = list(range(n))
    rng.shuffle(order)
    for k in range(1, n):
        i = order[k]
        j = order[rng.randrange(k)]
        adj[i].add(j)
        adj[j].add(i)
    for i, j in itertools.combinations(range(n), 2):
        if j not in adj[i] and rng.random() < 0.3:
            adj[i].add(j)
            adj[j].add(i)
    return adj


def random_sequence_steps(rng, members):
    """Random partition of `members` into an ordered tuple of disjoint
    non-empty steps (the shape an attacking sequence takes)."""
    pool = list(members)
    rng.shuffle(pool)
    steps = []
    while pool:
        k = rng.randint(1, min(3, len(pool)))
        steps.append(frozenset(pool[:k]))
        pool = pool[k:]
    return tuple(steps)


def scatter_agents(rng, n, state="healthy", box=30.0, spacing=0.6,
                   start_id=0):
    """n agents uniformly in a box with a minimum pairwise spacing."""
    pts = []
    while len(pts) < n:
        x = rng.uniform(0.0, box)
        y = rng.uniform(0.0, box)
        if all((x - px) ** 2 + (y - py) ** 2 >= spacing**2 for px, py in pts):
            pts.append((x, y))
    return [
        AgentSnapshot(start_id + k, x, y, state)
        for k, (x, y) in enumerate(pts)
    ]


def make_rng(seed):
    return random.Random(seed)
