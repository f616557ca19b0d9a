from .election import Cluster, ElectionParams, ch_threshold, elect_cluster_heads, epoch_length, form_clusters
from .engine import (
    NetworkState,
    Role,
    RoundOutcome,
    SimulationResult,
    UniformStream,
    run_round,
    run_round_leach,
    run_round_mgear,
    run_simulation,
    steady_state,
    steady_state_mgear,
)
from .kernels import BACKENDS, DEFAULT_BACKEND

__all__ = [
    "BACKENDS",
    "Cluster",
    "DEFAULT_BACKEND",
    "ElectionParams",
    "NetworkState",
    "Role",
    "RoundOutcome",
    "SimulationResult",
    "UniformStream",
    "ch_threshold",
    "elect_cluster_heads",
    "epoch_length",
    "form_clusters",
    "run_round",
    "run_round_leach",
    "run_round_mgear",
    "run_simulation",
    "steady_state",
    "steady_state_mgear",
]
