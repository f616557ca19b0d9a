"""Node deployment, distances and the four-region partition of the field."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import IntEnum
from typing import Iterator, Mapping

import numpy as np


class Region(IntEnum):
    # integer codes are shared with the round kernels
    NEAR_BS = 0
    NEAR_GATEWAY = 1
    CLUSTERED_A = 2
    CLUSTERED_B = 3

    @property
    def clustered(self) -> bool:
        return self >= Region.CLUSTERED_A


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite position ({self.x}, {self.y})")


def euclidean_distance(a: Position, b: Position) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass(frozen=True)
class FieldSpec:
    width: float = 100.0
    height: float = 100.0
    bs_position: Position = Position(50.0, 125.0)
    gateway_position: Position = Position(50.0, 50.0)
    d_threshold_bs: float = 25.0
    d_threshold_gw: float = 15.0
    gateway_enabled: bool = True
    split_regions: bool = True

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("field width and height must be positive")
        g = self.gateway_position
        if not (0 <= g.x <= self.width and 0 <= g.y <= self.height):
            raise ValueError(f"gateway {g} lies outside the {self.width}x{self.height} field")
        # zero disables a direct region; used for the LEACH-reduction setup
        if self.d_threshold_bs < 0 or self.d_threshold_gw < 0:
            raise ValueError("distance thresholds must be non-negative")


@dataclass(frozen=True)
class NodeRecord:
    id: int
    position: Position
    residual_energy: float
    distance_to_bs: float
    distance_to_gateway: float


def deploy(n: int, field: FieldSpec, rng: np.random.Generator, initial_energy: float = 0.5) -> list[NodeRecord]:
    """Scatter ``n`` nodes uniformly over the field; ids run 1..n.

    Consumes exactly ``2 * n`` doubles from ``rng`` (x and y interleaved per node).
    """
    if n < 1:
        raise ValueError(f"node count must be at least 1, got {n}")
    u = rng.random((n, 2))
    records = []
    for i in range(n):
        pos = Position(float(u[i, 0]) * field.width, float(u[i, 1]) * field.height)
        records.append(
            NodeRecord(
                id=i + 1,
                position=pos,
                residual_energy=initial_energy,
                distance_to_bs=euclidean_distance(pos, field.bs_position),
                distance_to_gateway=euclidean_distance(pos, field.gateway_position),
            )
        )
    return records


def classify(record: NodeRecord, field: FieldSpec) -> Region:
    if record.distance_to_bs < field.d_threshold_bs:
        return Region.NEAR_BS
    if field.gateway_enabled and record.distance_to_gateway < field.d_threshold_gw:
        return Region.NEAR_GATEWAY
    if not field.split_regions or record.position.x <= field.gateway_position.x:
        return Region.CLUSTERED_A
    return Region.CLUSTERED_B


def assign_regions(nodes: list[NodeRecord], field: FieldSpec) -> dict[int, Region]:
    return {node.id: classify(node, field) for node in nodes}


@dataclass(frozen=True)
class NodeEntry:
    """One row of the node data table, as seen at query time."""

    record: NodeRecord
    region: Region
    alive: bool


@dataclass
class NodeDataTable:
    """The base station's table of every deployed node.

    Static geometry lives in ``records``; residual energy and liveness live in
    the numpy arrays the round kernels mutate in place. Dead nodes stay in the
    table, flagged.
    """

    records: list[NodeRecord]
    regions: dict[int, Region]
    field: FieldSpec
    x: np.ndarray = dc_field(init=False)
    y: np.ndarray = dc_field(init=False)
    d_bs: np.ndarray = dc_field(init=False)
    d_gw: np.ndarray = dc_field(init=False)
    region_code: np.ndarray = dc_field(init=False)
    energy: np.ndarray = dc_field(init=False)
    alive: np.ndarray = dc_field(init=False)

    def __post_init__(self) -> None:
        ids = [r.id for r in self.records]
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError("node ids must be 1..n in order")
        self.x = np.array([r.position.x for r in self.records], dtype=np.float64)
        self.y = np.array([r.position.y for r in self.records], dtype=np.float64)
        self.d_bs = np.array([r.distance_to_bs for r in self.records], dtype=np.float64)
        self.d_gw = np.array([r.distance_to_gateway for r in self.records], dtype=np.float64)
        self.region_code = np.array([int(self.regions[i]) for i in ids], dtype=np.int8)
        self.energy = np.array([r.residual_energy for r in self.records], dtype=np.float64)
        self.alive = (self.energy > 0).astype(np.uint8)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[NodeEntry]:
        for i in range(1, len(self) + 1):
            yield self[i]

    def __getitem__(self, node_id: int) -> NodeEntry:
        if not 1 <= node_id <= len(self.records):
            raise KeyError(f"no node with id {node_id}")
        idx = node_id - 1
        base = self.records[idx]
        record = NodeRecord(
            id=base.id,
            position=base.position,
            residual_energy=float(self.energy[idx]),
            distance_to_bs=base.distance_to_bs,
            distance_to_gateway=base.distance_to_gateway,
        )
        return NodeEntry(record=record, region=self.regions[node_id], alive=bool(self.alive[idx]))

    def ids_in(self, region: Region) -> list[int]:
        return [i for i, r in self.regions.items() if r is region]

    def region_counts(self) -> Mapping[Region, int]:
        return {reg: int(np.count_nonzero(self.region_code == int(reg))) for reg in Region}


def node_data_table(nodes: list[NodeRecord], field: FieldSpec) -> NodeDataTable:
    return NodeDataTable(records=list(nodes), regions=assign_regions(nodes, field), field=field)
