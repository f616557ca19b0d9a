"""First-order radio energy model.

Transmission costs an electronics term plus a distance-dependent amplifier
term; reception costs the electronics term only. The amplifier term uses the
free-space coefficient (d**2) below the crossover distance and the multipath
coefficient (d**4) at or beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class AmplifierMode(str, Enum):
    TWO_REGIME = "two_regime"
    FREE_SPACE_ONLY = "free_space_only"


@dataclass(frozen=True)
class RadioParams:
    """Radio constants, all in joules (per bit, per bit per m**2 or m**4)."""

    e_elec: float = 5e-9
    e_fs: float = 10e-12
    e_mp: float = 0.0013e-12
    e_da: float = 5e-12
    initial_energy: float = 0.5
    amplifier_mode: AmplifierMode = AmplifierMode.TWO_REGIME

    def __post_init__(self) -> None:
        for name in ("e_elec", "e_fs", "e_mp", "e_da", "initial_energy"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be a finite non-negative number, got {value!r}")
        # initial_energy = 0 is allowed so a dead-on-arrival network can be simulated
        for name in ("e_elec", "e_fs", "e_mp", "e_da"):
            if getattr(self, name) == 0:
                raise ValueError(f"{name} must be strictly positive")
        object.__setattr__(self, "amplifier_mode", AmplifierMode(self.amplifier_mode))


def crossover_distance(params: RadioParams) -> float:
    """Distance at which e_fs * d**2 == e_mp * d**4."""
    return math.sqrt(params.e_fs / params.e_mp)


def _check_non_negative(**values: float) -> None:
    for name, value in values.items():
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value!r}")


def amplifier_energy(params: RadioParams, k: float, d: float) -> float:
    _check_non_negative(k=k, d=d)
    d2 = d * d
    if params.amplifier_mode is AmplifierMode.FREE_SPACE_ONLY or d < crossover_distance(params):
        return params.e_fs * k * d2
    return params.e_mp * k * (d2 * d2)


def tx_energy(params: RadioParams, k: float, d: float) -> float:
    """Energy to transmit ``k`` bits over ``d`` meters."""
    _check_non_negative(k=k, d=d)
    return params.e_elec * k + amplifier_energy(params, k, d)


def rx_energy(params: RadioParams, k: float) -> float:
    _check_non_negative(k=k)
    return params.e_elec * k


def aggregation_energy(params: RadioParams, k: float, n_signals: int) -> float:
    """Energy to fuse ``n_signals`` incoming ``k``-bit signals into one packet."""
    _check_non_negative(k=k, n_signals=n_signals)
    return params.e_da * k * n_signals
