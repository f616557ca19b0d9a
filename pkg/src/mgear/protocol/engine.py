"""Round-structured M-GEAR and LEACH engines.

Each round: epoch-boundary eligibility reset, per-region cluster-head
election, nearest-head clustering, then the steady-state data flow with
energy debits. The hot part runs in the round kernel (compiled when
available); :func:`steady_state` is a readable reference of the same
data flow for explicitly supplied clusters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import IntEnum

import numpy as np

from ..config import NetworkConfig, Protocol
from ..energy import AmplifierMode, aggregation_energy, crossover_distance, rx_energy, tx_energy
from ..metrics import LifetimeSummary, RoundRecord, lifetime_summary
from ..topology import NodeDataTable, Region, deploy, node_data_table
from . import _kernel_py
from .election import Cluster, ElectionParams, ch_threshold, epoch_length
from .kernels import get_round_step


class Role(IntEnum):
    IDLE_DEAD = _kernel_py.DEAD
    CLUSTER_HEAD = _kernel_py.CLUSTER_HEAD
    CLUSTER_MEMBER = _kernel_py.MEMBER
    DIRECT_TO_BS = _kernel_py.DIRECT_BS
    DIRECT_TO_GATEWAY = _kernel_py.DIRECT_GW


@dataclass
class RoundOutcome:
    round: int
    packets_received_at_bs: int
    source_packets_delivered: int
    energy_consumed_this_round: float
    deaths_this_round: list[int]
    clusters: list[Cluster] = dc_field(default_factory=list)

    @property
    def cluster_heads(self) -> list[int]:
        return sorted(c.head for c in self.clusters)


class UniformStream:
    """Buffered Uniform[0, 1) draws from a numpy Generator.

    Block size does not change the sequence: consecutive ``rng.random``
    calls continue the same underlying stream.
    """

    def __init__(self, rng: np.random.Generator, block: int = 4096):
        self.rng = rng
        self.block = block
        self.buffer = np.empty(0, dtype=np.float64)
        self.cursor = 0

    def reserve(self, count: int) -> None:
        if self.buffer.size - self.cursor < count:
            fresh = self.rng.random(max(self.block, count))
            self.buffer = np.concatenate([self.buffer[self.cursor :], fresh])
            self.cursor = 0

    def draw(self) -> float:
        self.reserve(1)
        value = float(self.buffer[self.cursor])
        self.cursor += 1
        return value


class NetworkState:
    """Mutable state of one simulation: the node table plus protocol bookkeeping."""

    def __init__(self, config: NetworkConfig, table: NodeDataTable, rng: np.random.Generator,
                 backend: str | None = None):
        self.config = config
        self.table = table
        self.protocol = config.protocol
        self.round_step = get_round_step(backend)
        n = len(table)
        if self.protocol is Protocol.LEACH:
            # LEACH: one region spanning the field, heads report straight to the BS
            self.region = np.full(n, int(Region.CLUSTERED_A), dtype=np.int8)
            self.d_sink = table.d_bs
            self.sink_is_bs = True
        else:
            self.region = table.region_code.copy()
            self.sink_is_bs = not config.field.gateway_enabled
            self.d_sink = table.d_bs if self.sink_is_bs else table.d_gw
        self.eligible = np.ones(n, dtype=np.uint8)
        self.role = np.zeros(n, dtype=np.int8)
        self.head = np.full(n, -1, dtype=np.int32)
        self.death_round = np.where(table.alive == 1, -1, 0).astype(np.int32)
        self.r = 0
        self.stream = UniformStream(rng)
        self.initial_total = float(table.energy.sum())
        self.consumed_total = 0.0
        self.alive_count = int(table.alive.sum())
        self.initial_alive = self.alive_count
        self.cum_bs = 0
        self.cum_src = 0
        self.pending_cost = 0.0
        radio = config.radio
        self._radio_args = (
            radio.e_elec, radio.e_fs, radio.e_mp, radio.e_da, crossover_distance(radio),
            radio.amplifier_mode is AmplifierMode.FREE_SPACE_ONLY, float(config.packet_bits),
        )
        self._energy_floor = config.min_ch_energy if config.require_min_energy_for_ch else -math.inf
        self._epoch = epoch_length(config.p)
        if config.charge_control_packets:
            self.pending_cost = initial_phase(self)

    @classmethod
    def from_config(cls, config: NetworkConfig, backend: str | None = None) -> "NetworkState":
        rng = np.random.default_rng(config.seed)
        nodes = deploy(config.n, config.field, rng, config.radio.initial_energy)
        return cls(config, node_data_table(nodes, config.field), rng, backend=backend)

    @property
    def n(self) -> int:
        return len(self.table)

    @property
    def all_dead(self) -> bool:
        return self.alive_count == 0

    def residual_energy(self) -> float:
        """Internal (unclamped) energy sum over all nodes."""
        return float(self.table.energy.sum())

    def clusters(self) -> list[Cluster]:
        """Clusters formed in the most recent round."""
        heads = np.flatnonzero(self.role == Role.CLUSTER_HEAD)
        clusters = {int(h) + 1: Cluster(head=int(h) + 1, members=[]) for h in heads}
        for i in np.flatnonzero(self.head >= 0):
            clusters[int(self.head[i]) + 1].members.append(int(i) + 1)
        return [clusters[h] for h in sorted(clusters)]

    def roles(self) -> dict[int, Role]:
        return {i + 1: Role(int(code)) for i, code in enumerate(self.role)}


def initial_phase(state: NetworkState) -> float:
    """Charge the HELLO broadcast and location replies; returns energy spent."""
    cfg = state.config
    k = cfg.control_bits
    energy = state.table.energy
    spent = 0.0
    for i in range(state.n):
        if state.table.alive[i]:
            cost = rx_energy(cfg.radio, k) + tx_energy(cfg.radio, k, float(state.table.d_bs[i]))
            energy[i] -= cost
            spent += cost
    return spent


def _step(state: NetworkState) -> tuple[int, int, float, int, float]:
    """Advance one round through the kernel.

    Returns (pkts_bs, pkts_src, consumed, deaths, residual of surviving nodes).
    """
    cfg = state.config
    table = state.table
    if state.all_dead:
        state.role[:] = Role.IDLE_DEAD
        state.head[:] = -1
        state.r += 1
        return 0, 0, 0.0, 0, 0.0
    threshold = ch_threshold(ElectionParams(cfg.p, state.r))
    state.stream.reserve(state.n)
    cursor, pkts_bs, pkts_src, consumed, deaths, residual = state.round_step(
        state.region, table.x, table.y, table.d_bs, table.d_gw, state.d_sink,
        table.energy, table.alive, state.eligible, state.role, state.head,
        state.stream.buffer, state.stream.cursor, threshold,
        state.r % state._epoch == 0, state._energy_floor,
        *state._radio_args, state.sink_is_bs,
    )
    state.stream.cursor = cursor
    consumed += state.pending_cost
    state.pending_cost = 0.0
    state.r += 1
    if deaths:
        newly = np.flatnonzero((table.alive == 0) & (state.death_round < 0))
        state.death_round[newly] = state.r
        state.alive_count -= deaths
    state.consumed_total += consumed
    state.cum_bs += pkts_bs
    state.cum_src += pkts_src
    return pkts_bs, pkts_src, consumed, deaths, residual


def run_round(state: NetworkState) -> RoundOutcome:
    pkts_bs, pkts_src, consumed, deaths, _ = _step(state)
    died = [int(i) + 1 for i in np.flatnonzero(state.death_round == state.r)] if deaths else []
    return RoundOutcome(
        round=state.r,
        packets_received_at_bs=pkts_bs,
        source_packets_delivered=pkts_src,
        energy_consumed_this_round=consumed,
        deaths_this_round=died,
        clusters=state.clusters(),
    )


def run_round_mgear(state: NetworkState) -> RoundOutcome:
    if state.protocol is not Protocol.MGEAR:
        raise ValueError("state was built for LEACH")
    return run_round(state)


def run_round_leach(state: NetworkState) -> RoundOutcome:
    if state.protocol is not Protocol.LEACH:
        raise ValueError("state was built for M-GEAR")
    return run_round(state)


def steady_state(state: NetworkState, clusters: list[Cluster]) -> RoundOutcome:
    """Reference data flow for one round with explicitly given clusters.

    Direct-region nodes send to the BS or gateway, members send to their head,
    heads receive, fuse their members' readings with their own, and forward
    one packet to the sink. Clustered alive nodes that belong to no cluster
    send straight to the sink. Does not run an election or advance the round.
    """
    cfg = state.config
    radio, k = cfg.radio, cfg.packet_bits
    table = state.table
    energy = table.energy
    alive_ids = [i + 1 for i in range(state.n) if table.alive[i]]
    in_cluster = {c.head for c in clusters} | {m for c in clusters for m in c.members}
    consumed = 0.0

    def debit(node_id: int, cost: float) -> None:
        nonlocal consumed
        energy[node_id - 1] -= cost
        consumed += cost

    near_bs = [i for i in alive_ids if state.region[i - 1] == Region.NEAR_BS]
    near_gw = [i for i in alive_ids if state.region[i - 1] == Region.NEAR_GATEWAY]
    fallback = [i for i in alive_ids if state.region[i - 1] >= Region.CLUSTERED_A and i not in in_cluster]
    for i in near_bs:
        debit(i, tx_energy(radio, k, float(table.d_bs[i - 1])))
    for i in near_gw:
        debit(i, tx_energy(radio, k, float(table.d_gw[i - 1])))
    for i in fallback:
        debit(i, tx_energy(radio, k, float(state.d_sink[i - 1])))
    for c in clusters:
        hp = table.records[c.head - 1].position
        for m in c.members:
            mp = table.records[m - 1].position
            debit(m, tx_energy(radio, k, math.hypot(mp.x - hp.x, mp.y - hp.y)))
        cost = rx_energy(radio, k) * len(c.members)
        cost += aggregation_energy(radio, k, len(c.members) + 1)
        cost += tx_energy(radio, k, float(state.d_sink[c.head - 1]))
        debit(c.head, cost)

    sink_tx = len(clusters) + len(fallback)
    if state.sink_is_bs:
        pkts_bs = len(near_bs) + sink_tx
    else:
        pkts_bs = len(near_bs) + (1 if near_gw or sink_tx else 0)

    died = []
    for i in alive_ids:
        if energy[i - 1] <= 0:
            table.alive[i - 1] = 0
            state.death_round[i - 1] = state.r + 1
            died.append(i)
    state.alive_count -= len(died)
    state.consumed_total += consumed
    return RoundOutcome(
        round=state.r,
        packets_received_at_bs=pkts_bs,
        source_packets_delivered=len(alive_ids),
        energy_consumed_this_round=consumed,
        deaths_this_round=died,
        clusters=list(clusters),
    )


def steady_state_mgear(state: NetworkState, clusters: list[Cluster]) -> RoundOutcome:
    if state.protocol is not Protocol.MGEAR:
        raise ValueError("state was built for LEACH")
    return steady_state(state, clusters)


@dataclass
class SimulationResult:
    config: NetworkConfig
    series: list[RoundRecord]
    summary: LifetimeSummary
    initial_energy: float
    energy_consumed: float
    final_energy: float
    death_rounds: np.ndarray


def run_simulation(config: NetworkConfig, backend: str | None = None) -> SimulationResult:
    """Run rounds until every node is dead or ``max_rounds`` is reached."""
    state = NetworkState.from_config(config, backend=backend)
    series: list[RoundRecord] = []
    append = series.append
    while state.r < config.max_rounds and not state.all_dead:
        pkts_bs, pkts_src, _, _, residual = _step(state)
        append(
            RoundRecord(
                round=state.r,
                alive_count=state.alive_count,
                total_residual_energy=residual,
                packets_received_at_bs=pkts_bs,
                source_packets_delivered=pkts_src,
                cumulative_packets_at_bs=state.cum_bs,
                cumulative_source_packets=state.cum_src,
            )
        )
    return SimulationResult(
        config=config,
        series=series,
        summary=lifetime_summary(series, state.n, initial_alive=state.initial_alive),
        initial_energy=state.initial_total,
        energy_consumed=state.consumed_total,
        final_energy=state.residual_energy(),
        death_rounds=state.death_round.copy(),
    )
