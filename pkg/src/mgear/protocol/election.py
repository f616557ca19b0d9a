"""Cluster-head election threshold and reference election / clustering routines.

The round kernels inline the same logic; the functions here are the
readable reference used by tests and by callers that work on one region
at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from ..topology import NodeDataTable


@dataclass(frozen=True)
class ElectionParams:
    p: float
    r: int

    def __post_init__(self) -> None:
        if not 0 < self.p < 1:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if self.r < 0:
            raise ValueError(f"round index must be non-negative, got {self.r}")

    @property
    def epoch_length(self) -> int:
        return epoch_length(self.p)

    @property
    def epoch_start(self) -> bool:
        return self.r % self.epoch_length == 0


def epoch_length(p: float) -> int:
    return math.ceil(1.0 / p)


def ch_threshold(params: ElectionParams, eligible: bool = True) -> float:
    """Election threshold p / (1 - p * (r mod 1/p)), or 0 for ineligible nodes.

    The modulus is real-valued. Values above 1 (possible only through rounding
    on the last round of an epoch) are clamped to 1.
    """
    if not eligible:
        return 0.0
    p = params.p
    t = p / (1.0 - p * (params.r % (1.0 / p)))
    return min(t, 1.0)


@dataclass
class Cluster:
    head: int
    members: list[int]


def elect_cluster_heads(
    node_ids: Iterable[int],
    eligible: dict[int, bool],
    params: ElectionParams,
    draw: Callable[[], float],
) -> set[int]:
    """Elect heads among ``node_ids`` (alive nodes of one region).

    Eligible nodes draw from ``draw`` in ascending id order. Nodes reset to
    eligible at an epoch start, and winners lose eligibility; ``eligible`` is
    updated in place.
    """
    ids = sorted(node_ids)
    if params.epoch_start:
        for i in ids:
            eligible[i] = True
    threshold = ch_threshold(params)
    heads = set()
    for i in ids:
        if not eligible.get(i, True):
            continue
        if draw() < threshold:
            heads.add(i)
            eligible[i] = False
    return heads


def nearest_head(table: NodeDataTable, node_id: int, heads: Sequence[int]) -> int:
    """Euclidean-nearest head; the lower id wins a tie."""
    pos = table.records[node_id - 1].position
    best, best_d2 = -1, math.inf
    for h in sorted(heads):
        hp = table.records[h - 1].position
        dx = pos.x - hp.x
        dy = pos.y - hp.y
        d2 = dx * dx + dy * dy
        if d2 < best_d2:
            best, best_d2 = h, d2
    return best


def form_clusters(table: NodeDataTable, heads: Iterable[int], region_ids: Iterable[int]) -> list[Cluster]:
    """Attach every alive non-head node of the region to its nearest head.

    With no heads the result is empty and the caller routes the region's
    nodes straight to the sink.
    """
    heads = sorted(heads)
    if not heads:
        return []
    clusters = {h: Cluster(head=h, members=[]) for h in heads}
    for i in sorted(region_ids):
        if i in clusters or not table.alive[i - 1]:
            continue
        clusters[nearest_head(table, i, heads)].members.append(i)
    return [clusters[h] for h in heads]
