"""Per-round observables, lifetime statistics and multi-seed interval estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .config import ConfigError


class StatisticsError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class RoundRecord:
    round: int
    alive_count: int
    total_residual_energy: float
    packets_received_at_bs: int
    source_packets_delivered: int
    cumulative_packets_at_bs: int
    cumulative_source_packets: int


@dataclass(frozen=True)
class LifetimeSummary:
    first_node_death_round: int | None
    half_nodes_death_round: int | None
    last_node_death_round: int | None
    total_source_packets: int


def lifetime_summary(series: Sequence[RoundRecord], n: int, initial_alive: int | None = None) -> LifetimeSummary:
    """Rounds at which the first node, half the nodes, and the last node had died.

    A death round is the index of the round at whose end ``alive_count``
    first crossed the mark. ``initial_alive`` (default ``n``) covers nodes
    already dead at deployment; those count as deaths at round 0.
    """
    alive0 = n if initial_alive is None else initial_alive
    if not series and alive0 == n:
        return LifetimeSummary(None, None, None, 0)

    def first_at_or_below(level: float) -> int | None:
        if alive0 <= level:
            return 0
        for rec in series:
            if rec.alive_count <= level:
                return rec.round
        return None

    return LifetimeSummary(
        first_node_death_round=first_at_or_below(n - 1),
        half_nodes_death_round=first_at_or_below(n / 2),
        last_node_death_round=first_at_or_below(0),
        total_source_packets=series[-1].cumulative_source_packets if series else 0,
    )


@dataclass(frozen=True)
class IntervalEstimate:
    mean: float
    half_width: float
    confidence_level: float
    sample_count: int

    @property
    def low(self) -> float:
        return self.mean - self.half_width

    @property
    def high(self) -> float:
        return self.mean + self.half_width

    def overlaps(self, other: "IntervalEstimate") -> bool:
        return self.low <= other.high and other.low <= self.high


def confidence_interval(samples: Sequence[float], level: float = 0.99) -> IntervalEstimate:
    """Student-t interval for the mean."""
    if not 0 < level < 1:
        raise StatisticsError(f"confidence level must lie in (0, 1), got {level}")
    data = np.asarray(samples, dtype=np.float64)
    if data.size < 2:
        raise StatisticsError(f"need at least 2 samples, got {data.size}")
    mean = float(data.mean())
    sd = float(data.std(ddof=1))
    if sd == 0.0 or not math.isfinite(sd):
        half = 0.0
    else:
        half = float(stats.t.ppf(0.5 + level / 2, df=data.size - 1)) * sd / math.sqrt(data.size)
    return IntervalEstimate(mean=mean, half_width=half, confidence_level=level, sample_count=int(data.size))


@dataclass(frozen=True)
class MetricComparison:
    metric: str
    a: IntervalEstimate
    b: IntervalEstimate

    @property
    def different(self) -> bool:
        return not self.a.overlaps(self.b)

    @property
    def verdict(self) -> str:
        if not self.different:
            return "not different"
        return "a higher" if self.a.mean > self.b.mean else "b higher"


DEFAULT_METRICS = ("lifetime", "throughput", "mean_residual_energy")


def run_metric(result, metric: str) -> float:
    """Scalar per-run metric used by :func:`compare_protocols`."""
    if metric == "lifetime":
        last = result.summary.last_node_death_round
        # a run cut off by max_rounds lived at least that long
        return float(last if last is not None else len(result.series))
    if metric == "first_death":
        first = result.summary.first_node_death_round
        return float(first if first is not None else len(result.series))
    if metric == "throughput":
        return float(result.summary.total_source_packets)
    if metric == "mean_residual_energy":
        if not result.series:
            return 0.0
        return float(np.mean([rec.total_residual_energy for rec in result.series]))
    raise KeyError(f"unknown metric {metric!r}")


def compare_protocols(
    results_a: Mapping[int, object],
    results_b: Mapping[int, object],
    level: float = 0.99,
    metrics: Sequence[str] = DEFAULT_METRICS,
) -> dict[str, MetricComparison]:
    """Interval estimate per metric for two seed-keyed result sets, plus overlap verdicts."""
    if set(results_a) != set(results_b):
        raise ConfigError("both protocols must be run on the same seed set")
    seeds = sorted(results_a)
    report = {}
    for metric in metrics:
        a = confidence_interval([run_metric(results_a[s], metric) for s in seeds], level)
        b = confidence_interval([run_metric(results_b[s], metric) for s in seeds], level)
        report[metric] = MetricComparison(metric, a, b)
    return report


def mean_residual_curve(results: Sequence[object], rounds: int) -> np.ndarray:
    """Mean total residual energy at rounds 1..rounds across runs.

    Runs that ended early (all nodes dead) contribute zero after their last round.
    """
    curves = np.zeros((len(results), rounds))
    for i, res in enumerate(results):
        vals = [rec.total_residual_energy for rec in res.series[:rounds]]
        curves[i, : len(vals)] = vals
    if not len(results):
        return np.zeros(rounds)
    return curves.mean(axis=0)
