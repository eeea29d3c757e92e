"""Weak-point conquest: component resilience analysis.

An attacker flips one component member per "conquest"; flipping an
agent costs as many attackers as its predicted bareness factor (its
original connectivity factor plus one, minus the members already
conquered around it).  The iterative bookkeeping tracks c (attackers
placed so far) and r (attackers the attacker was forced to allocate),
and the weak-point rule — always conquer a bare member of minimal
predicted bareness — is optimal, which the brute-force oracle here
verifies rather than assumes.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class AbstractComponent:
    """Adjacency-only component whose members are all considered bare.

    Lets tests pin figure topologies without reconstructing geometry;
    cf falls out of the adjacency and the fence is every member.
    """

    members: tuple
    adj: dict

    def cf(self, agent):
        return len(self.adj[agent])

    def bare(self, remaining=None):
        return frozenset(self.members if remaining is None else remaining)

    def __len__(self):
        return len(self.members)


def abstract_component(adjacency):
    """Build an AbstractComponent from {id: iterable-of-neighbors}.

    The adjacency must be symmetric and connected.
    """
    adj = {i: frozenset(ns) for i, ns in adjacency.items()}
    for i, ns in adj.items():
        for j in ns:
            if j not in adj or i not in adj[j]:
                raise ValueError(f"adjacency not symmetric at ({i}, {j})")
            if i == j:
                raise ValueError(f"self-loop at {i}")
    members = tuple(sorted(adj))
    if not members:
        raise ValueError("empty adjacency")
    seen = {members[0]}
    frontier = [members[0]]
    while frontier:
        nxt = []
        for i in frontier:
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    if len(seen) != len(members):
        raise ValueError("adjacency is not connected")
    return AbstractComponent(members, adj)


def pbf(agent, conquered, comp):
    """Predicted bareness factor: cf(agent) + 1 minus the conquered
    members the agent observes.  cf stays pinned to the original
    component; conquest lowers the prediction only through overlap."""
    if agent in conquered:
        raise ValueError(f"agent {agent} already conquered")
    return comp.cf(agent) + 1 - len(comp.adj[agent] & frozenset(conquered))


@dataclass(frozen=True)
class IterationRecord:
    """One conquest iteration: chosen set, max predicted bareness,
    allocation delta, and the running totals afterwards."""

    chosen: frozenset
    predicted: int
    delta: int
    c: int
    r: int
    conquered: frozenset


@dataclass(frozen=True)
class WpcTrace:
    iterations: tuple

    @property
    def required(self):
        return self.iterations[-1].r if self.iterations else 0

    @property
    def c_totals(self):
        return [rec.c for rec in self.iterations]

    @property
    def r_totals(self):
        return [rec.r for rec in self.iterations]

    @property
    def effective_subset(self):
        """Agents conquered in iterations that forced extra attackers."""
        out = set()
        for rec in self.iterations:
            if rec.delta > 0:
                out |= rec.chosen
        return frozenset(out)

    def as_dict(self):
        return {
            "required": self.required,
            "iterations": [
                {
                    "chosen": sorted(rec.chosen),
                    "predicted": rec.predicted,
                    "delta": rec.delta,
                    "c": rec.c,
                    "r": rec.r,
                }
                for rec in self.iterations
            ],
        }


def iterative_conquer(comp, rule):
    """Run the iterative conquest bookkeeping under a decision rule.

    rule(comp, conquered, t) must return a non-empty set of unconquered
    members.  Per iteration: m = max predicted bareness over the chosen
    set; delta = m - c; if delta > 0 both r and c grow by delta; then c
    grows by the number conquered.  Returns (r, WpcTrace).
    """
    members = frozenset(comp.members)
    if not members:
        raise ValueError("component is empty")
    conquered = set()
    c = r = 0
    t = 0
    records = []
    while len(conquered) < len(members):
        chosen = frozenset(rule(comp, frozenset(conquered), t))
        if not chosen:
            raise ValueError("decision rule returned an empty set")
        if not chosen <= members - conquered:
            raise ValueError(f"rule returned non-remaining members {sorted(chosen)}")
        m = max(pbf(a, conquered, comp) for a in chosen)
        delta = m - c
        if delta > 0:
            r += delta
            c += delta
        c += len(chosen)
        conquered |= chosen
        records.append(
            IterationRecord(chosen, m, delta, c, r, frozenset(conquered))
        )
        t += 1
    return r, WpcTrace(tuple(records))


def weak_point_rule(comp, conquered, t):
    """Conquer one bare remaining member of minimal predicted bareness,
    lowest id on ties.  If sampling leaves no bare member (an artifact
    possible only at coarse fence resolutions), every remaining member
    counts as bare."""
    remaining = [i for i in comp.members if i not in conquered]
    bare = comp.bare(remaining)
    if not bare:
        bare = frozenset(remaining)
    best = min(bare, key=lambda a: (pbf(a, conquered, comp), a))
    return frozenset([best])


def wpc_trace(comp):
    """Weak-point conquest value and its full trace."""
    return iterative_conquer(comp, weak_point_rule)


def wpc(comp):
    """Attackers required to conquer the component by always hitting its
    current weak point (a bare member of minimal predicted bareness)."""
    return wpc_trace(comp)[0]


def wpc_abstract(adjacency, all_bare=True):
    """wpc over a bare adjacency ({id: neighbors}); cf comes from vertex
    degrees and, with all_bare, the fence is every remaining member."""
    if not all_bare:
        raise ValueError("adjacency-only components carry no geometry; "
                         "all_bare must be True")
    return wpc(abstract_component(adjacency))


@dataclass(frozen=True)
class AttackingSequence:
    """Iteration-indexed conquest plan: an ordered tuple of disjoint,
    non-empty member sets."""

    component: object
    steps: tuple

    @property
    def length(self):
        return len(self.steps)

    def is_singular(self):
        return all(len(s) == 1 for s in self.steps)


def _validate_sequence(seq):
    members = frozenset(seq.component.members)
    seen = set()
    for step in seq.steps:
        step = frozenset(step)
        if not step:
            raise ValueError("empty step in attacking sequence")
        if step & seen:
            raise ValueError(f"members conquered twice: {sorted(step & seen)}")
        seen |= step
    if not seen <= members:
        raise ValueError("sequence names agents outside the component")
    if seen != members:
        raise ValueError("sequence does not conquer every member")


def sequence_cost(seq):
    """Total attackers required when conquering exactly along `seq`."""
    _validate_sequence(seq)
    steps = iter(seq.steps)
    required, _ = iterative_conquer(
        seq.component, lambda comp, conquered, t: next(steps)
    )
    return required


def transform_sequence(seq):
    """Equivalent singular sequence: singleton steps pass through, and
    each multi-member step unrolls in ascending predicted bareness
    (computed against the pre-step conquered set, ids breaking ties).
    Never costs more than the original."""
    _validate_sequence(seq)
    comp = seq.component
    conquered = set()
    out = []
    for step in seq.steps:
        step = frozenset(step)
        if len(step) == 1:
            out.append(step)
        else:
            frozen = frozenset(conquered)
            for agent in sorted(step, key=lambda a: (pbf(a, frozen, comp), a)):
                out.append(frozenset([agent]))
        conquered |= step
    return AttackingSequence(comp, tuple(out))


def brute_force_min_conquer(comp, all_bare=None):
    """Minimum attackers over every singular conquest order, restricted
    at each step to the currently bare remaining members.

    Accepts a component or a bare adjacency dict (implying all_bare).
    Exponential search; refuses components larger than 8 members.
    """
    if isinstance(comp, dict):
        comp = abstract_component(comp)
        if all_bare is False:
            raise ValueError("adjacency input implies all_bare")
        all_bare = True
    elif all_bare is None:
        all_bare = isinstance(comp, AbstractComponent)

    members = frozenset(comp.members)
    if len(members) > 8:
        raise ValueError(f"component too large for brute force ({len(members)} > 8)")

    best = [None]
    pareto = {}

    def dominated(state, c, r):
        front = pareto.setdefault(state, [])
        for pc, pr in front:
            if pc >= c and pr <= r:
                return True
        front[:] = [(pc, pr) for pc, pr in front if not (c >= pc and r <= pr)]
        front.append((c, r))
        return False

    def search(conquered, c, r):
        if best[0] is not None and r >= best[0]:
            return
        if conquered == members:
            best[0] = r
            return
        remaining = members - conquered
        if all_bare:
            bare = remaining
        else:
            bare = comp.bare(remaining) or remaining
        for agent in sorted(bare):
            p = pbf(agent, conquered, comp)
            delta = p - c
            if delta > 0:
                nc, nr = c + delta + 1, r + delta
            else:
                nc, nr = c + 1, r
            nxt = conquered | {agent}
            if not dominated(nxt, nc, nr):
                search(nxt, nc, nr)

    search(frozenset(), 0, 0)
    return best[0]


def is_monotonic(comp):
    """True iff every agent that forced extra attackers during the
    weak-point conquest sits on the original component's fence."""
    _, trace = wpc_trace(comp)
    return trace.effective_subset <= comp.bare()
