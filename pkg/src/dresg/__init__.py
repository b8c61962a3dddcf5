"""Energy model and epsilon-greedy routing learners for ring-structured multi-hop LPWANs."""

from .actions import (
    ActionSpace,
    HopsCombination,
    enumerate_actions,
    most_similar_unexplored,
    next_ring_hop,
    similarity,
    single_hop,
)
from .bandit import EpsilonGreedy, EpsilonSchedule, PolicyConfig, epsilon_next
from .energy import (
    EnergyReport,
    EnergyTable,
    PacketModel,
    Scenario,
    brute_force_optimal,
    evaluate_action,
    evaluate_all,
    reward,
    ring_loads,
)
from .harness import (
    ExperimentConfig,
    ExperimentLog,
    distribution_stats,
    historic_bottleneck,
    run_experiment,
    similarity_ratio,
)
from .link import (
    LinkBudgetModel,
    TransceiverProfile,
    TransmissionConfiguration,
    link_feasible,
    max_range,
    path_loss,
    select_tx_config,
)
from .topology import NetworkStructure, Spreading, build_network, link_distance, nodes_in_ring

__version__ = "0.1.0"

__all__ = [
    "ActionSpace",
    "EnergyReport",
    "EnergyTable",
    "EpsilonGreedy",
    "EpsilonSchedule",
    "ExperimentConfig",
    "ExperimentLog",
    "HopsCombination",
    "LinkBudgetModel",
    "NetworkStructure",
    "PacketModel",
    "PolicyConfig",
    "Scenario",
    "Spreading",
    "TransceiverProfile",
    "TransmissionConfiguration",
    "brute_force_optimal",
    "build_network",
    "distribution_stats",
    "enumerate_actions",
    "epsilon_next",
    "evaluate_action",
    "evaluate_all",
    "historic_bottleneck",
    "link_distance",
    "link_feasible",
    "max_range",
    "most_similar_unexplored",
    "next_ring_hop",
    "nodes_in_ring",
    "path_loss",
    "reward",
    "ring_loads",
    "run_experiment",
    "select_tx_config",
    "similarity",
    "similarity_ratio",
    "single_hop",
]
