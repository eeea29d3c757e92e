"""Deterministic simulator and analysis library for the two-swarm
contamination game: majority-rule consensus under occlusion-limited
sensing, component-resilience analysis (weak-point conquest), dense
circle capacity bounds, message-passing formation strategies, and a
batch experiment harness.
"""

from .bounds import (
    DenseCircleSpec,
    concealed_sector,
    dense_circle_wpc,
    max_connectivity_factor,
    odc,
    weak_point_bound,
)
from .engine import GameResult, majority_update, run_game
from .geometry import (
    WorldConfig,
    can_observe,
    dense_circle_capacity,
    dense_circle_positions,
    distance,
    segment_intersects_disk,
)
from .graph import (
    STATE_CONTAMINATED,
    STATE_HEALTHY,
    AgentSnapshot,
    ComponentView,
    build_observation_graph,
    connected_components,
    connectivity_factor,
    fence,
)
from .harness import ExperimentConfig, run_batch, welch_test
from .strategies import STRATEGY_NAMES, make_strategy
from .wpc import (
    AttackingSequence,
    WpcTrace,
    brute_force_min_conquer,
    is_monotonic,
    iterative_conquer,
    pbf,
    sequence_cost,
    transform_sequence,
    wpc,
    wpc_abstract,
)

__version__ = "0.1.0"
