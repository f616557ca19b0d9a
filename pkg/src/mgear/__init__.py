"""Round-based simulator for the M-GEAR gateway routing protocol and the LEACH baseline."""

from .config import ConfigError, NetworkConfig, Protocol, parse_config
from .energy import AmplifierMode, RadioParams, aggregation_energy, crossover_distance, rx_energy, tx_energy
from .protocol import DEFAULT_BACKEND, run_simulation
from .topology import FieldSpec, Position, Region

__version__ = "0.1.0"

__all__ = [
    "AmplifierMode",
    "ConfigError",
    "DEFAULT_BACKEND",
    "FieldSpec",
    "NetworkConfig",
    "Position",
    "Protocol",
    "RadioParams",
    "Region",
    "aggregation_energy",
    "crossover_distance",
    "parse_config",
    "run_simulation",
    "rx_energy",
    "tx_energy",
]
