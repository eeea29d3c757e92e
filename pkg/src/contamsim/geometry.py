"""2D primitives for the contamination game.

Agents live in the plane, sense an annulus (further than s_min, up to
s_max) around themselves, and physically block each other's sight lines
with their body disks.  This module holds the scalar reference versions
of those predicates plus the dense-circle constructions; the batched
versions used by the simulation loop live in the kernel modules.
"""

import math
from dataclasses import dataclass, fields, replace

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WorldConfig:
    """Physical and run-length parameters shared by every agent.

    d_r is the body *diameter*; occlusion tests use the d_r/2 radius.
    The sensing band is open at s_min and closed at s_max + eps, so two
    agents exactly s_max apart (a diametric pair of a dense circle of
    radius s_max/2) still observe each other.
    """

    s_min: float = 2.0
    s_max: float = 6.0
    d_r: float = 0.25
    arena_width: float = 100.0
    arena_height: float = 100.0
    v_max: float = 0.5
    t_max: int = 1024
    stagnation_window: int = 200
    max_clique_size: int = 9
    fence_samples: int = 360
    eps: float = 1e-9

    def __post_init__(self):
        if not (0.0 < self.d_r < self.s_min < self.s_max):
            raise ValueError(
                f"need 0 < d_r < s_min < s_max, got d_r={self.d_r} "
                f"s_min={self.s_min} s_max={self.s_max}"
            )
        if self.arena_width <= 0 or self.arena_height <= 0:
            raise ValueError("arena dimensions must be positive")
        if self.v_max <= 0:
            raise ValueError("v_max must be positive")
        if self.t_max < 1 or self.stagnation_window < 1:
            raise ValueError("t_max and stagnation_window must be >= 1")
        if self.max_clique_size < 2:
            raise ValueError("max_clique_size must be >= 2")
        if self.fence_samples < 8:
            raise ValueError("fence_samples must be >= 8")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    def with_overrides(self, overrides):
        """Return a copy with the given field overrides (a dict)."""
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return replace(self, **overrides)


def distance(a, b):
    """Euclidean distance between two (x, y) points."""
    return math.hypot(b[0] - a[0], b[1] - a[1])


def segment_intersects_disk(p, q, center, radius):
    """True iff the closed segment p-q comes within `radius` of `center`.

    Degenerate segments (p == q) reduce to a point-in-disk test.
    """
    px, py = p
    dx = q[0] - px
    dy = q[1] - py
    cx = center[0] - px
    cy = center[1] - py
    seg_len2 = dx * dx + dy * dy
    if seg_len2 > 0.0:
        t = (cx * dx + cy * dy) / seg_len2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        cx -= t * dx
        cy -= t * dy
    return cx * cx + cy * cy <= radius * radius


def in_band(dist, cfg):
    """True iff `dist` lies in the sensing band (s_min, s_max + eps]."""
    return cfg.s_min < dist <= cfg.s_max + cfg.eps


def can_observe(observer, target, blockers, cfg):
    """Annulus-plus-occlusion observation predicate.

    True iff the target sits in the observer's sensing band and no
    blocker's body disk (radius d_r/2) cuts the center-to-center
    segment.  Symmetric in observer/target.  `blockers` must exclude
    both endpoints.
    """
    if not in_band(distance(observer, target), cfg):
        return False
    body = cfg.d_r * 0.5
    for b in blockers:
        if segment_intersects_disk(observer, target, b, body):
            return False
    return True


def dense_circle_capacity(radius, d_r):
    """Most agents that fit on a circle of `radius` at chord spacing 2*d_r.

    floor(2*pi / arccos(1 - 2*d_r^2 / radius^2)); the tiny additive
    guard keeps values that land exactly on an integer (e.g. radius ==
    d_r, where the arc is exactly pi) from being floored down by
    representation noise.
    """
    if radius < d_r:
        raise ValueError(f"radius {radius} smaller than body diameter {d_r}")
    return int(math.floor(TWO_PI / adjacent_arc(radius, d_r) + 1e-12))


def adjacent_arc(radius, d_r):
    """Central angle between adjacent agents packed at chord 2*d_r."""
    return math.acos(1.0 - 2.0 * d_r * d_r / (radius * radius))


def dense_circle_positions(n, radius, d_r, center=(0.0, 0.0)):
    """Place n agents densely along a circle of `radius`.

    Consecutive points sit one adjacent_arc apart starting from angle 0,
    so every adjacent chord equals 2*d_r and any shortfall from full
    capacity leaves a single larger gap before the first point.
    """
    cap = dense_circle_capacity(radius, d_r)
    if not 1 <= n <= cap:
        raise ValueError(f"n={n} outside 1..{cap} for radius {radius}")
    step = adjacent_arc(radius, d_r)
    cx, cy = center
    return [
        (cx + radius * math.cos(k * step), cy + radius * math.sin(k * step))
        for k in range(n)
    ]
