"""Closed-form capacity bounds and dense-circle resilience checks.

All bounds trace back to the packing angle arccos(1 - 2*d_r^2/r^2)
(the arc between adjacent agents packed at chord 2*d_r on a circle of
radius r).  Floors carry a +1e-12 guard so values that land exactly on
an integer are not floored down by representation noise.
"""

import math
from dataclasses import dataclass

from .geometry import (
    TWO_PI,
    adjacent_arc,
    dense_circle_capacity,
    dense_circle_positions,
)
from .graph import STATE_HEALTHY, AgentSnapshot, components_of
from .wpc import wpc

_FLOOR_GUARD = 1e-12


def _guarded_floor(x):
    return int(math.floor(x + _FLOOR_GUARD))


def max_connectivity_factor(cfg):
    """Most agents one agent can observe: floor(2*pi / packing arc at
    the outer sensing radius)."""
    return _guarded_floor(TWO_PI / adjacent_arc(cfg.s_max, cfg.d_r))


def weak_point_bound(cfg):
    """Upper bound on a weak point's connectivity factor:
    floor(pi / packing arc at the outer sensing radius)."""
    return _guarded_floor(math.pi / adjacent_arc(cfg.s_max, cfg.d_r))


def concealed_sector(radius, cfg):
    """Sector angle beta = 2*arccos(1 - d_r/r) an agent's body conceals
    from a circle's center region, and how many densely packed agents
    fit inside it: floor(beta / packing arc)."""
    if radius <= cfg.d_r:
        raise ValueError(f"radius must exceed d_r={cfg.d_r}, got {radius}")
    beta = 2.0 * math.acos(1.0 - cfg.d_r / radius)
    count = _guarded_floor(beta / adjacent_arc(radius, cfg.d_r))
    return beta, count


@dataclass(frozen=True)
class DenseCircleSpec:
    """A fully packed circle: radius, member count, member positions."""

    radius: float
    count: int
    positions: tuple


def odc(cfg):
    """The resilience-maximizing dense circle: radius s_max/2, packed to
    capacity (diametric pairs still observe each other)."""
    radius = cfg.s_max / 2.0
    count = dense_circle_capacity(radius, cfg.d_r)
    return DenseCircleSpec(
        radius, count, tuple(dense_circle_positions(count, radius, cfg.d_r))
    )


def dense_circle_components(radius, count, cfg, center=(0.0, 0.0)):
    """Same-state components of a dense circle of `count` agents."""
    pts = dense_circle_positions(count, radius, cfg.d_r, center)
    agents = [
        AgentSnapshot(i, x, y, STATE_HEALTHY) for i, (x, y) in enumerate(pts)
    ]
    comps, _ = components_of(agents, cfg)
    return comps

def dense_circle_wpc(radius, count, cfg):
    """Weak-point conquest value of a dense circle.

    Small radii fall below the sensing band and the formation splits
    into several components; attackers sweep those one after another
    reusing their forces, so the formation scores the maximum over its
    components.
    """
    return max(wpc(c) for c in dense_circle_components(radius, count, cfg))


def all_bounds(cfg):
    """Every closed-form bound for a config, as a JSON-able dict."""
    spec = odc(cfg)
    return {
        "max_connectivity_factor": max_connectivity_factor(cfg),
        "weak_point_bound": weak_point_bound(cfg),
        "odc_radius": spec.radius,
        "odc_count": spec.count,
        "dense_circle_capacity_at_odc": spec.count,
        "concealed_sector_at_odc": dict(
            zip(("beta", "count"), concealed_sector(spec.radius, cfg))
        ),
        "max_clique_size": cfg.max_clique_size,
    }
