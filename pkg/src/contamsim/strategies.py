"""Per-agent movement/communication strategies.

Four registered strategies:

* ``random``    -- uniform random heading at full speed each step.
* ``potential`` -- unit attraction toward every observed same-state
  agent (and unit repulsion inside s_min, which the sensing band makes
  unreachable in-engine; the branch matters for direct unit calls).
* ``circle``    -- gather into uniform circles of radius s_max/2 and
  keep merging them up to the dense-circle capacity.
* ``clique``    -- same machinery as ``circle`` with the merge cap set
  to the configured max clique size instead.

The circle/clique machinery runs a three-phase formation life cycle per
agent, tracked in the agent's memory dict: SINGLE agents exchange
observations, agree on a clique, and elect a circle via
propose/approve/establish; CONVERGING agents walk to their assigned
slot and gossip who has arrived; CIRCLE agents cycle through four duty
modes (publicize, discovery, coordinate, move) in lockstep and merge
with neighboring circles by proposal/approval.  Everything an agent
knows arrives through its own observations and mailbox.
"""

import math

from .bounds import odc
from .engine import (
    FORM_CIRCLE,
    FORM_CONVERGING,
    FORM_SINGLE,
    Decision,
)
from .geometry import TWO_PI

MSG_SHARE = "observation_share"
MSG_PROPOSAL = "circle_proposal"
MSG_APPROVAL = "circle_approval"
MSG_ESTABLISH = "circle_establishment"
MSG_CONVERGE = "convergence_state"
MSG_PUBLICATION = "circle_publication"
MSG_EXTERIOR = "exterior_info"
MSG_MERGE_PROPOSAL = "merge_proposal"
MSG_MERGE_APPROVAL = "merge_approval"
MSG_DIRECTION = "random_direction"

# Steps between convergence completing and the circle's duty cycle
# starting; covers the relay diameter so every member hears the
# completion step and computes the same mode schedule.
ACTIVATION_DELAY = 4
# Duty modes, in schedule order.
MODE_PUBLICIZE, MODE_DISCOVERY, MODE_COORDINATE, MODE_MOVE = range(4)

_EXTERIOR_TTL = 12  # steps a publicized circle stays merge-eligible
_PROPOSAL_TTL = 6  # steps a saved merge proposal stays answerable
_SHARE_TTL = 4  # steps a shared observation stays clique-usable
_APPROVED_TTL = 3  # steps to wait for an establishment after approving
_JOIN_RETRY = 4  # steps between join proposals from a lone single
_STALL_LIMIT = 50  # converging steps without completion before reset
_CLIQUE_POOL = 16  # nearest shared singles considered for a clique


def _unit(dx, dy):
    d = math.hypot(dx, dy)
    if d < 1e-12:
        return (0.0, 0.0)
    return (dx / d, dy / d)


def _toward(src, dst, speed):
    dx, dy = dst[0] - src[0], dst[1] - src[1]
    d = math.hypot(dx, dy)
    if d <= speed:
        return (dx, dy)
    return (dx / d * speed, dy / d * speed)


def circle_slots(members, center, radius):
    """Equally spaced slots on the circle, assigned in ascending member
    id from angle zero."""
    members = sorted(members)
    n = len(members)
    return {
        m: (
            center[0] + radius * math.cos(TWO_PI * k / n),
            center[1] + radius * math.sin(TWO_PI * k / n),
        )
        for k, m in enumerate(members)
    }


class RandomWalk:
    def act(self, ctx):
        theta = ctx.rng.uniform(0.0, TWO_PI)
        v = ctx.cfg.v_max
        return Decision(move=(v * math.cos(theta), v * math.sin(theta)))


class PotentialForces:
    def act(self, ctx):
        fx = fy = 0.0
        me = ctx.obs.pos
        for n in ctx.obs.neighbors:
            if n.state != ctx.obs.state:
                continue
            ux, uy = _unit(n.x - me[0], n.y - me[1])
            if n.dist <= ctx.cfg.s_min:
                fx -= ux
                fy -= uy
            else:
                fx += ux
                fy += uy
        return Decision(move=(fx, fy))


class FormationStrategy:
    """Shared circle/clique machinery; `merge_threshold` caps circle
    size and is an int or a callable taking the config."""

    def __init__(self, merge_threshold):
        self._merge_threshold = merge_threshold
        self._cached_threshold = None

    def threshold(self, cfg):
        if self._cached_threshold is None:
            t = self._merge_threshold
            self._cached_threshold = int(t(cfg) if callable(t) else t)
        return self._cached_threshold

    def act(self, ctx):
        mem = ctx.memory
        if mem.get("health") != ctx.obs.state:
            # state flipped: all prior coordination belonged to the
            # other side, start over
            _reset_single(mem, ctx.obs.state)
        form = mem.setdefault("formation", FORM_SINGLE)
        if form == FORM_CONVERGING:
            return self._converging(ctx)
        if form == FORM_CIRCLE:
            return self._circle(ctx)
        return self._single(ctx)

    # -- SINGLE ---------------------------------------------------------

    def _single(self, ctx):
        mem = ctx.memory
        obs = ctx.obs
        cfg = ctx.cfg
        me = obs.self_id
        known_obs = mem.setdefault("known_obs", {})
        known_circles = mem.setdefault("known_circles", {})
        out = []

        best_prop = None
        for m in ctx.mailbox:
            k, p = m.kind, m.payload
            if k == MSG_SHARE:
                known_obs[m.sender] = {
                    "pos": tuple(p["pos"]),
                    "seen": set(p["seen"]),
                    "step": ctx.step,
                }
            elif k == MSG_PUBLICATION:
                known_circles[p["circle_id"]] = {
                    "members": sorted(p["members"]),
                    "center": tuple(p["center"]),
                    "step": ctx.step,
                }
            elif k == MSG_PROPOSAL and me in p["members"]:
                if best_prop is None or (
                    -len(p["members"]),
                    p["circle_id"],
                ) < (-len(best_prop["members"]), best_prop["circle_id"]):
                    best_prop = dict(p, proposer=m.sender)
            elif k == MSG_APPROVAL:
                pend = mem.get("pending")
                if pend and p["circle_id"] == pend["circle_id"]:
                    pend["approvals"].add(m.sender)
            elif k == MSG_ESTABLISH and me in p["targets"]:
                _adopt_converging(
                    mem,
                    p["circle_id"],
                    p["members"],
                    p["center"],
                    p["targets"],
                    ctx.step,
                )
            elif k == MSG_MERGE_APPROVAL:
                sj = mem.get("sent_join")
                if sj and p.get("proposal_id") == sj["proposal_id"]:
                    _adopt_converging(
                        mem,
                        sj["circle_id"],
                        sj["members"],
                        sj["center"],
                        sj["targets"],
                        ctx.step,
                    )

        if mem["formation"] == FORM_CONVERGING:
            # adopted a circle mid-mailbox: spend the turn heading to
            # our slot, run the converging logic from next step
            target = mem["circle"]["targets"][me]
            return Decision(move=_toward(obs.pos, target, cfg.v_max))

        singles = [
            n
            for n in obs.neighbors
            if n.state == obs.state and n.formation == FORM_SINGLE
        ]
        single_ids = tuple(sorted(n.id for n in singles))

        # Sharing observations consumes the turn, but only when there is
        # something new to say: the same-state single neighborhood
        # changed since the last share.
        if single_ids != mem.get("last_shared"):
            mem["last_shared"] = single_ids
            for sender in [
                s
                for s, rec in known_obs.items()
                if ctx.step - rec["step"] > 2 * _SHARE_TTL
            ]:
                del known_obs[sender]
            if singles:
                payload = {"pos": obs.pos, "seen": sorted(single_ids)}
                out.append((single_ids, MSG_SHARE, payload))
                return Decision(messages=tuple(out))

        pend = mem.get("pending")
        if pend is not None:
            if best_prop is not None and (
                len(best_prop["members"]) > len(pend["members"])
                or (
                    len(best_prop["members"]) == len(pend["members"])
                    and best_prop["proposer"] < me
                )
            ):
                # someone else is building a bigger (or equal,
                # lower-id) circle: join theirs instead
                mem["pending"] = None
                pend = None
            else:
                best_prop = None
        if pend is not None and ctx.step > pend["step"]:
            others = [i for i in pend["members"] if i != me]
            if set(others) <= pend["approvals"]:
                members = sorted(pend["members"])
                center, targets = _circle_layout(
                    members, pend["positions"], cfg.s_max / 2.0
                )
                out.append(
                    (
                        tuple(others),
                        MSG_ESTABLISH,
                        {
                            "circle_id": pend["circle_id"],
                            "members": members,
                            "center": center,
                            "targets": targets,
                        },
                    )
                )
                _adopt_converging(
                    mem, pend["circle_id"], members, center, targets, ctx.step
                )
                return Decision(
                    move=_toward(obs.pos, targets[me], cfg.v_max),
                    messages=tuple(out),
                )
            if ctx.step > pend["step"] + 1:
                approvals = pend["approvals"]
                if approvals:
                    # only part of the clique answered: retry with them
                    members = sorted(approvals | {me})
                    cid = f"c{me}s{ctx.step}"
                    positions = {i: pend["positions"][i] for i in members}
                    mem["pending"] = {
                        "circle_id": cid,
                        "members": members,
                        "positions": positions,
                        "approvals": set(),
                        "step": ctx.step,
                    }
                    out.append(
                        (
                            tuple(sorted(approvals)),
                            MSG_PROPOSAL,
                            {
                                "circle_id": cid,
                                "members": members,
                                "positions": positions,
                            },
                        )
                    )
                    return Decision(messages=tuple(out))
                mem["pending"] = None
            else:
                return Decision(messages=tuple(out))

        appr = mem.get("approved")
        if appr is not None and ctx.step - appr["step"] > _APPROVED_TTL:
            mem["approved"] = appr = None

        clique = self._best_clique(ctx, known_obs, singles)

        if best_prop is not None and len(best_prop["members"]) >= max(
            len(clique), 2
        ):
            out.append(
                (
                    (best_prop["proposer"],),
                    MSG_APPROVAL,
                    {"circle_id": best_prop["circle_id"]},
                )
            )
            mem["approved"] = {
                "circle_id": best_prop["circle_id"],
                "step": ctx.step,
            }
            return Decision(messages=tuple(out))

        if appr is None and len(clique) > 1:
            cid = f"c{me}s{ctx.step}"
            neighbor_pos = {n.id: n.pos for n in singles}
            positions = {
                i: (obs.pos if i == me else neighbor_pos[i]) for i in clique
            }
            others = tuple(i for i in clique if i != me)
            out.append(
                (
                    others,
                    MSG_PROPOSAL,
                    {
                        "circle_id": cid,
                        "members": list(clique),
                        "positions": positions,
                    },
                )
            )
            mem["pending"] = {
                "circle_id": cid,
                "members": list(clique),
                "positions": positions,
                "approvals": set(),
                "step": ctx.step,
            }
            return Decision(messages=tuple(out))

        same = [n for n in obs.neighbors if n.state == obs.state]
        if not same:
            theta = ctx.rng.uniform(0.0, TWO_PI)
            v = cfg.v_max
            return Decision(
                move=(v * math.cos(theta), v * math.sin(theta)),
                messages=tuple(out),
            )

        circle_neighbors = [n for n in same if n.formation == FORM_CIRCLE]
        if circle_neighbors and not singles:
            join = self._join_proposal(ctx, mem, known_circles, circle_neighbors)
            if join is not None:
                out.append(join)
        return Decision(messages=tuple(out))

    def _join_proposal(self, ctx, mem, known_circles, circle_neighbors):
        """A lone single asks the nearest observed circle to take it in."""
        sj = mem.get("sent_join")
        if sj is not None and ctx.step - sj["step"] <= _JOIN_RETRY:
            return None
        me = ctx.obs.self_id
        for n in sorted(circle_neighbors, key=lambda n: (n.dist, n.id)):
            candidates = [
                (info["step"], cid)
                for cid, info in known_circles.items()
                if n.id in info["members"]
                and ctx.step - info["step"] <= _EXTERIOR_TTL
            ]
            if not candidates:
                continue
            _, cid = max(candidates)
            info = known_circles[cid]
            members = sorted(set(info["members"]) | {me})
            if len(members) > self.threshold(ctx.cfg):
                continue
            pid = f"m{me}s{ctx.step}"
            # Weight the new center by group size so the established circle
            # barely shifts and the joining agent does most of the walking.
            w = float(len(info["members"]))
            center = (
                (w * info["center"][0] + ctx.obs.x) / (w + 1.0),
                (w * info["center"][1] + ctx.obs.y) / (w + 1.0),
            )
            targets = circle_slots(members, center, ctx.cfg.s_max / 2.0)
            payload = {
                "proposal_id": pid,
                "from_circle": None,
                "from_members": [me],
                "to_circle": cid,
                "members": members,
                "center": center,
                "targets": targets,
                "new_circle_id": pid,
            }
            mem["sent_join"] = {
                "proposal_id": pid,
                "circle_id": pid,
                "members": members,
                "center": center,
                "targets": targets,
                "step": ctx.step,
            }
            recipients = tuple(
                x.id for x in circle_neighbors if x.id in info["members"]
            )
            return (recipients, MSG_MERGE_PROPOSAL, payload)
        return None

    def _best_clique(self, ctx, known_obs, singles):
        """Largest clique of mutually observing same-state singles that
        contains us, built from our own observations plus fresh shares.
        Ties break toward the lexicographically smallest member tuple."""
        me = ctx.obs.self_id
        shared = [
            n
            for n in singles
            if n.id in known_obs
            and ctx.step - known_obs[n.id]["step"] <= _SHARE_TTL
        ]
        shared = sorted(shared, key=lambda n: (n.dist, n.id))[:_CLIQUE_POOL]
        ids = [n.id for n in shared]
        adj = {me: set(ids)}
        for n in shared:
            seen = known_obs[n.id]["seen"]
            adj[n.id] = ({me} | (seen & set(ids))) - {n.id}
        # exact max-clique search; the pool is small and gets pruned hard
        best = [(1, (me,))]

        def extend(clique, cands):
            if not cands:
                key = (len(clique), tuple(clique))
                if (-key[0], key[1]) < (-best[0][0], best[0][1]):
                    best[0] = key
                return
            if len(clique) + len(cands) < best[0][0]:
                return
            for i, v in enumerate(cands):
                extend(
                    clique + [v], [u for u in cands[i + 1 :] if u in adj[v]]
                )
            key = (len(clique), tuple(clique))
            if (-key[0], key[1]) < (-best[0][0], best[0][1]):
                best[0] = key

        extend([me], sorted(ids))
        clique = list(best[0][1])
        cap = self.threshold(ctx.cfg)
        if len(clique) > cap:
            clique = sorted(set(clique[:cap]) | {me})[:cap]
        return sorted(clique)

    # -- CONVERGING -------------------------------------------------------

    def _converging(self, ctx):
        mem = ctx.memory
        obs = ctx.obs
        cfg = ctx.cfg
        me = obs.self_id
        circ = mem["circle"]
        members = set(circ["members"])
        known = set(mem.setdefault("conv_known", set()))
        stamp = mem.get("conv_stamp")
        out = []

        for m in ctx.mailbox:
            p = m.payload
            if m.kind == MSG_CONVERGE and p["circle_id"] == circ["id"]:
                known |= set(p["converged"])
                s = p.get("stamp")
                if s is not None:
                    stamp = s if stamp is None else min(stamp, s)

        flipped = {
            n.id
            for n in obs.neighbors
            if n.id in members and n.state != obs.state
        }
        if flipped:
            members -= flipped
            known -= flipped
            circ["members"] = sorted(members)
            if len(members) < 2:
                _reset_single(mem, obs.state)
                return Decision()

        target = circ["targets"][me]
        if math.hypot(obs.x - target[0], obs.y - target[1]) <= cfg.d_r / 4.0:
            known.add(me)
            move = (0.0, 0.0)
        else:
            move = _toward(obs.pos, target, cfg.v_max)

        if stamp is None and members <= known:
            stamp = ctx.step
        mem["conv_known"] = known
        mem["conv_stamp"] = stamp

        mates = tuple(
            n.id
            for n in obs.neighbors
            if n.id in members and n.state == obs.state
        )
        if mates:
            out.append((mates, MSG_CONVERGE, _converge_payload(circ, known, stamp)))

        if stamp is not None:
            circ["epoch"] = stamp + ACTIVATION_DELAY
            mem["formation"] = FORM_CIRCLE
        elif ctx.step - mem["conv_start"] > _STALL_LIMIT:
            _reset_single(mem, obs.state)
        return Decision(move=move, messages=tuple(out))

    # -- CIRCLE -------------------------------------------------------------

    def _circle(self, ctx):
        mem = ctx.memory
        obs = ctx.obs
        cfg = ctx.cfg
        me = obs.self_id
        circ = mem["circle"]
        members = set(circ["members"])
        threshold = self.threshold(cfg)
        exterior = mem.setdefault("exterior", {})
        proposals = mem.setdefault("proposals", {})
        sent_merge = mem.setdefault("sent_merge", {})
        out = []

        flipped = {
            n.id
            for n in obs.neighbors
            if n.id in members and n.state != obs.state
        }
        if flipped:
            members -= flipped
            circ["members"] = sorted(members)
            if len(members) < 2:
                _reset_single(mem, obs.state)
                return Decision()

        adopt = None  # (circle_id, members, center, targets)
        forward_approval = None
        for m in ctx.mailbox:
            k, p = m.kind, m.payload
            if k == MSG_MERGE_PROPOSAL and p.get("from_circle") == circ["id"]:
                # a mate courting another circle on our behalf; remember
                # so a counter-proposal from them reads as mutual
                sent_merge[p["to_circle"]] = {
                    "proposal_id": p["proposal_id"],
                    "step": ctx.step,
                }
            elif k == MSG_MERGE_PROPOSAL and p.get("to_circle") == circ["id"]:
                proposals[p["proposal_id"]] = {
                    "payload": p,
                    "sender": m.sender,
                    "step": ctx.step,
                }
                fc = p.get("from_circle")
                if (
                    adopt is None
                    and fc is not None
                    and fc in sent_merge
                    and ctx.step - sent_merge[fc]["step"] <= _PROPOSAL_TTL
                    and len(p["members"]) <= threshold
                    and me in p["targets"]
                ):
                    # both circles proposed to each other: approve
                    forward_approval = dict(p)
                    adopt = (
                        p["new_circle_id"],
                        p["members"],
                        p["center"],
                        p["targets"],
                    )
            elif k == MSG_PUBLICATION and p["circle_id"] != circ["id"]:
                exterior[p["circle_id"]] = {
                    "members": sorted(p["members"]),
                    "center": tuple(p["center"]),
                    "step": ctx.step,
                }
            elif k == MSG_EXTERIOR:
                for cid, info in p["circles"].items():
                    if cid == circ["id"]:
                        continue
                    if (
                        cid not in exterior
                        or info["step"] > exterior[cid]["step"]
                    ):
                        exterior[cid] = dict(info)
            elif k == MSG_MERGE_APPROVAL:
                involved = (
                    p.get("from_circle") == circ["id"]
                    or p.get("to_circle") == circ["id"]
                )
                if adopt is None and involved and me in p["targets"]:
                    forward_approval = dict(p)
                    adopt = (
                        p["new_circle_id"],
                        p["members"],
                        p["center"],
                        p["targets"],
                    )
            elif k == MSG_DIRECTION and p["circle_id"] == circ["id"]:
                if _apply_direction(circ, p, cfg):
                    mates = _observed_members(obs, members)
                    if mates:
                        out.append((mates, MSG_DIRECTION, dict(p)))
            elif k == MSG_CONVERGE and p["circle_id"] != circ["id"]:
                # a merged circle containing us is converging and we
                # missed the approval: fall in line
                if adopt is None and me in p.get("members", ()):
                    adopt = (
                        p["circle_id"],
                        p["members"],
                        p["center"],
                        p["targets"],
                    )

        if adopt is not None:
            if forward_approval is not None:
                peers = tuple(
                    n.id for n in obs.neighbors if n.state == obs.state
                )
                if peers:
                    out.append((peers, MSG_MERGE_APPROVAL, forward_approval))
            _adopt_converging(mem, *adopt, ctx.step)
            target = mem["circle"]["targets"][me]
            return Decision(
                move=_toward(obs.pos, target, cfg.v_max), messages=tuple(out)
            )

        slot = circle_slots(members, circ["center"], cfg.s_max / 2.0)[me]
        move = _toward(obs.pos, slot, cfg.v_max)

        if ctx.step < circ["epoch"]:
            # duty cycle not yet started: hold the slot and keep
            # gossiping the completion step to late converging mates
            stragglers = tuple(
                n.id
                for n in obs.neighbors
                if n.id in members
                and n.state == obs.state
                and n.formation == FORM_CONVERGING
            )
            if stragglers:
                payload = _converge_payload(
                    circ, members, circ["epoch"] - ACTIVATION_DELAY
                )
                out.append((stragglers, MSG_CONVERGE, payload))
            return Decision(move=move, messages=tuple(out))

        mode = (ctx.step - circ["epoch"]) % 4
        if mode == MODE_PUBLICIZE:
            outsiders = tuple(
                n.id
                for n in obs.neighbors
                if n.state == obs.state and n.id not in members
            )
            if outsiders:
                out.append(
                    (
                        outsiders,
                        MSG_PUBLICATION,
                        {
                            "circle_id": circ["id"],
                            "members": sorted(members),
                            "center": tuple(circ["center"]),
                        },
                    )
                )
        elif mode == MODE_DISCOVERY:
            for cid in [
                c
                for c, info in exterior.items()
                if ctx.step - info["step"] > _EXTERIOR_TTL
            ]:
                del exterior[cid]
            mates = _observed_members(obs, members)
            if mates and exterior:
                out.append(
                    (mates, MSG_EXTERIOR, {"circles": dict(exterior)})
                )
        elif mode == MODE_COORDINATE:
            decision = self._coordinate(ctx, mem, circ, members, out)
            if decision is not None:
                return decision
        else:  # MODE_MOVE
            applied = circ.get("dir_applied")
            if not (applied and applied["round"] == ctx.step):
                # nobody's heading has reached us this move step, so we
                # are first to act: draw one and spread it
                theta = ctx.rng.uniform(0.0, TWO_PI)
                p = {
                    "circle_id": circ["id"],
                    "round": ctx.step,
                    "drawer": me,
                    "angle": theta,
                }
                _apply_direction(circ, p, cfg)
                mates = _observed_members(obs, members)
                if mates:
                    out.append((mates, MSG_DIRECTION, p))
            slot = circle_slots(members, circ["center"], cfg.s_max / 2.0)[me]
            move = _toward(obs.pos, slot, cfg.v_max)

        return Decision(move=move, messages=tuple(out))

    def _coordinate(self, ctx, mem, circ, members, out):
        """Coordinate duty mode: answer the best live merge proposal or
        court the biggest merge-compatible neighbor circle."""
        obs = ctx.obs
        me = obs.self_id
        threshold = self.threshold(ctx.cfg)
        my_size = len(members)
        exterior = mem["exterior"]
        proposals = mem["proposals"]
        sent_merge = mem["sent_merge"]

        for pid in [
            p
            for p, rec in proposals.items()
            if ctx.step - rec["step"] > _PROPOSAL_TTL
        ]:
            del proposals[pid]

        best_f = None  # (size, -?, cid): largest merge-compatible circle
        for cid, info in exterior.items():
            if ctx.step - info["step"] > _EXTERIOR_TTL:
                continue
            combined = set(info["members"]) | members
            if len(combined) > threshold or len(combined) == my_size:
                continue
            key = (len(info["members"]), cid)
            if best_f is None or (-key[0], key[1]) < (-best_f[0], best_f[1]):
                best_f = key
        visible_same = {
            n.id for n in obs.neighbors if n.state == obs.state
        }
        best_p = None
        for pid, rec in proposals.items():
            p = rec["payload"]
            if len(p["members"]) > threshold or me not in p["targets"]:
                continue
            if rec["sender"] not in visible_same:
                continue
            key = (len(p["members"]), pid)
            if best_p is None or (-key[0], key[1]) < (-best_p[0], best_p[1]):
                best_p = key

        # Approve when the proposed (combined) circle beats the biggest
        # neighbor circle we could court instead; a proposal that already
        # includes our members always beats its own proposer.
        if best_p is not None and (best_f is None or best_p[0] > best_f[0]):
            p = proposals[best_p[1]]["payload"]
            peers = tuple(n.id for n in obs.neighbors if n.state == obs.state)
            if peers:
                out.append((peers, MSG_MERGE_APPROVAL, dict(p)))
            _adopt_converging(
                mem,
                p["new_circle_id"],
                p["members"],
                p["center"],
                p["targets"],
                ctx.step,
            )
            target = mem["circle"]["targets"][me]
            return Decision(
                move=_toward(obs.pos, target, ctx.cfg.v_max),
                messages=tuple(out),
            )

        if best_f is not None:
            cid = best_f[1]
            stale = (
                cid not in sent_merge
                or ctx.step - sent_merge[cid]["step"] > _PROPOSAL_TTL
            )
            info = exterior[cid]
            visible = tuple(
                n.id
                for n in obs.neighbors
                if n.id in set(info["members"]) and n.state == obs.state
            )
            if stale and visible:
                combined = sorted(set(info["members"]) | members)
                pid = f"m{me}s{ctx.step}"
                # Size-weighted midpoint: the larger circle moves less, so
                # merged groups re-converge faster and spend less time exposed.
                wa = float(len(members))
                wb = float(len(info["members"]))
                center = (
                    (wa * circ["center"][0] + wb * info["center"][0]) / (wa + wb),
                    (wa * circ["center"][1] + wb * info["center"][1]) / (wa + wb),
                )
                targets = circle_slots(combined, center, ctx.cfg.s_max / 2.0)
                payload = {
                    "proposal_id": pid,
                    "from_circle": circ["id"],
                    "from_members": sorted(members),
                    "to_circle": cid,
                    "members": combined,
                    "center": center,
                    "targets": targets,
                    "new_circle_id": pid,
                }
                mates = _observed_members(obs, members)
                out.append((visible + mates, MSG_MERGE_PROPOSAL, payload))
                sent_merge[cid] = {"proposal_id": pid, "step": ctx.step}
        return None


def _observed_members(obs, members):
    return tuple(
        n.id
        for n in obs.neighbors
        if n.id in members and n.state == obs.state
    )


def _converge_payload(circ, known, stamp):
    return {
        "circle_id": circ["id"],
        "converged": sorted(known),
        "stamp": stamp,
        "members": list(circ["members"]),
        "center": tuple(circ["center"]),
        "targets": dict(circ["targets"]),
    }


def _apply_direction(circ, p, cfg):
    """Shift the circle's center by a broadcast heading.  Exactly one
    heading wins per move round: a fresher round replaces an older one,
    and within a round the lowest drawer id wins (late corrections undo
    the previously applied shift).  Returns True when p changed the
    center and should be forwarded."""
    applied = circ.get("dir_applied")
    cx, cy = circ["center"]
    if applied is not None and applied["round"] == p["round"]:
        if p["drawer"] >= applied["drawer"]:
            return False
        cx -= cfg.v_max * math.cos(applied["angle"])
        cy -= cfg.v_max * math.sin(applied["angle"])
    elif applied is not None and p["round"] < applied["round"]:
        return False
    circ["center"] = (
        cx + cfg.v_max * math.cos(p["angle"]),
        cy + cfg.v_max * math.sin(p["angle"]),
    )
    circ["dir_applied"] = {
        "round": p["round"],
        "drawer": p["drawer"],
        "angle": p["angle"],
    }
    return True


def _circle_layout(members, positions, radius):
    """Center on the members' mean position and hand out slots."""
    n = len(members)
    cx = sum(positions[i][0] for i in members) / n
    cy = sum(positions[i][1] for i in members) / n
    return (cx, cy), circle_slots(members, (cx, cy), radius)


def _adopt_converging(mem, circle_id, members, center, targets, step):
    members = sorted(members)
    mem["formation"] = FORM_CONVERGING
    mem["circle"] = {
        "id": circle_id,
        "members": members,
        "center": tuple(center),
        "targets": {i: tuple(targets[i]) for i in members},
        "epoch": None,
    }
    mem["conv_known"] = set()
    mem["conv_stamp"] = None
    mem["conv_start"] = step
    for key in (
        "pending",
        "approved",
        "sent_join",
        "last_shared",
        "known_obs",
        "known_circles",
        "exterior",
        "proposals",
        "sent_merge",
    ):
        mem.pop(key, None)


def _reset_single(mem, state):
    mem.clear()
    mem["health"] = state
    mem["formation"] = FORM_SINGLE


STRATEGY_NAMES = ("circle", "clique", "potential", "random")


def make_strategy(name, cfg=None):
    """Build a fresh strategy instance by registry name."""
    if name == "random":
        return RandomWalk()
    if name == "potential":
        return PotentialForces()
    if name == "circle":
        return FormationStrategy(lambda c: odc(c).count)
    if name == "clique":
        return FormationStrategy(lambda c: c.max_clique_size)
    raise ValueError(
        f"unknown strategy {name!r}; expected one of {STRATEGY_NAMES}"
    )
