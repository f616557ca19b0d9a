import copy
import math

import numpy as np
import pytest

from mgear import FieldSpec, NetworkConfig, Position, RadioParams
from mgear.energy import tx_energy
from mgear.protocol import (
    Cluster,
    NetworkState,
    Role,
    UniformStream,
    run_round,
    run_round_leach,
    run_round_mgear,
    run_simulation,
    steady_state,
    steady_state_mgear,
)
from mgear.topology import Region

from fixtures import FOUR_NODE_COSTS, FOUR_NODE_POINTS, FOUR_NODE_TOTAL, make_state


def test_uniform_stream_matches_generator():
    stream = UniformStream(np.random.default_rng(9), block=7)
    got = [stream.draw() for _ in range(30)]
    assert got == list(np.random.default_rng(9).random(30))


def test_four_node_reference_flow():
    state = make_state(FOUR_NODE_POINTS)
    assert [state.table.regions[i] for i in range(1, 5)] == [
        Region.NEAR_BS, Region.NEAR_GATEWAY, Region.CLUSTERED_A, Region.CLUSTERED_B]
    out = steady_state_mgear(state, [Cluster(3, []), Cluster(4, [])])
    assert out.energy_consumed_this_round == pytest.approx(FOUR_NODE_TOTAL, rel=1e-12)
    assert out.packets_received_at_bs == 2
    assert out.source_packets_delivered == 4
    for i, cost in FOUR_NODE_COSTS.items():
        assert 0.5 - state.table.energy[i - 1] == pytest.approx(cost, rel=1e-9)


def test_four_node_kernel_round(backend):
    state = make_state(FOUR_NODE_POINTS, backend=backend)
    state.r = 9  # last round of the epoch: both lone clustered nodes must self-elect
    out = run_round_mgear(state)
    assert out.cluster_heads == [3, 4]
    assert out.energy_consumed_this_round == pytest.approx(FOUR_NODE_TOTAL, rel=1e-12)
    assert (out.packets_received_at_bs, out.source_packets_delivered) == (2, 4)
    roles = state.roles()
    assert roles == {1: Role.DIRECT_TO_BS, 2: Role.DIRECT_TO_GATEWAY, 3: Role.CLUSTER_HEAD, 4: Role.CLUSTER_HEAD}


def test_single_near_bs_node():
    state = make_state([(50.0, 100.0)])
    out = run_round_mgear(state)
    assert out.packets_received_at_bs == 1
    assert out.energy_consumed_this_round == pytest.approx(tx_energy(RadioParams(), 4000, 25.0), rel=1e-12)


def test_all_dead_round_is_noop(backend):
    state = make_state(FOUR_NODE_POINTS, backend=backend, energy=0.0)
    out = run_round(state)
    assert (out.packets_received_at_bs, out.source_packets_delivered, out.energy_consumed_this_round) == (0, 0, 0.0)
    assert out.deaths_this_round == [] and out.clusters == []
    assert all(r is Role.IDLE_DEAD for r in state.roles().values())


def test_protocol_guard():
    state = make_state(FOUR_NODE_POINTS)
    with pytest.raises(ValueError):
        run_round_leach(state)


def _brute_force_check(state, before_energy, before_alive, out):
    """Recompute the round from the kernel's elected heads with the reference flow."""
    ref = copy.deepcopy(state)
    ref.table.energy[:] = before_energy
    ref.table.alive[:] = before_alive
    heads = set(out.cluster_heads)
    clusters = []
    for region in (2, 3):
        region_ids = [i + 1 for i in range(state.n) if state.region[i] == region and before_alive[i]]
        region_heads = sorted(h for h in heads if state.region[h - 1] == region)
        if not region_heads:
            continue
        members = {h: [] for h in region_heads}
        for i in region_ids:
            if i in heads:
                continue
            p = state.table.records[i - 1].position
            d = [(math.dist((p.x, p.y), (state.table.x[h - 1], state.table.y[h - 1])), h) for h in region_heads]
            members[min(d)[1]].append(i)
        clusters.extend(Cluster(h, members[h]) for h in region_heads)
    clusters.sort(key=lambda c: c.head)
    assert clusters == out.clusters
    ref_out = steady_state(ref, clusters)
    assert ref_out.energy_consumed_this_round == pytest.approx(out.energy_consumed_this_round, rel=1e-12, abs=1e-18)
    np.testing.assert_allclose(ref.table.energy, state.table.energy, rtol=1e-12, atol=1e-15)
    assert ref_out.packets_received_at_bs == out.packets_received_at_bs
    assert ref_out.source_packets_delivered == out.source_packets_delivered
    assert sorted(ref_out.deaths_this_round) == sorted(out.deaths_this_round)


@pytest.mark.parametrize("protocol", ["mgear", "leach"])
def test_kernel_matches_reference_every_round(protocol, backend):
    cfg = NetworkConfig(protocol=protocol, n=40, seed=3, radio=RadioParams(initial_energy=0.004))
    state = NetworkState.from_config(cfg, backend=backend)
    rounds = 0
    while not state.all_dead:
        e0, a0 = state.table.energy.copy(), state.table.alive.copy()
        out = run_round(state)
        _brute_force_check(state, e0, a0, out)
        rounds += 1
    assert rounds > 20


def test_no_head_fallback_goes_to_gateway():
    cfg = NetworkConfig(n=30, p=0.01)
    for seed in range(200):
        state = NetworkState.from_config(cfg.replace(seed=seed))
        out = run_round(state)
        if not out.clusters:
            break
    else:
        pytest.fail("no seed produced a head-less first round")
    roles = state.roles()
    for i in range(1, 31):
        if state.table.regions[i].clustered:
            assert roles[i] is Role.DIRECT_TO_GATEWAY
    assert out.packets_received_at_bs == 1


def test_leach_no_head_fallback_goes_to_bs():
    cfg = NetworkConfig(protocol="leach", n=30, p=0.01)
    for seed in range(200):
        state = NetworkState.from_config(cfg.replace(seed=seed))
        e0 = state.table.energy.copy()
        out = run_round(state)
        if not out.clusters:
            break
    assert all(r is Role.DIRECT_TO_BS for r in state.roles().values())
    assert out.packets_received_at_bs == 30
    expected = [tx_energy(cfg.radio, 4000, float(d)) for d in state.table.d_bs]
    np.testing.assert_allclose(e0 - state.table.energy, expected, rtol=1e-12)


def test_leach_single_node_elects_within_epoch():
    state = make_state([(40.0, 40.0)], config=NetworkConfig(protocol="leach", n=1))
    elected = []
    for _ in range(10):
        out = run_round_leach(state)
        elected.extend(out.cluster_heads)
    assert elected == [1]
    assert state.roles()[1] in (Role.CLUSTER_HEAD, Role.DIRECT_TO_BS)


@pytest.mark.parametrize("protocol", ["mgear", "leach"])
def test_head_at_most_once_per_epoch(protocol):
    state = NetworkState.from_config(NetworkConfig(protocol=protocol, seed=8))
    for epoch in range(5):
        heads = []
        for _ in range(10):
            heads.extend(run_round(state).cluster_heads)
        assert len(heads) == len(set(heads))
        clustered = sum(1 for i in range(state.n) if state.region[i] >= 2)
        assert len(heads) == clustered  # nobody has died yet, so the epoch covers everyone


def test_dead_nodes_frozen_and_energy_monotone():
    cfg = NetworkConfig(n=30, seed=4, radio=RadioParams(initial_energy=0.003))
    state = NetworkState.from_config(cfg)
    prev = state.table.energy.copy()
    frozen = {}
    while not state.all_dead:
        run_round(state)
        e = state.table.energy
        assert np.all(e <= prev)
        for i, v in frozen.items():
            assert e[i] == v
        for i in np.flatnonzero(state.table.alive == 0):
            frozen.setdefault(int(i), float(e[i]))
        prev = e.copy()


def test_min_energy_flag_excludes_weak_nodes():
    cfg = NetworkConfig(n=50, seed=2, require_min_energy_for_ch=True, min_ch_energy=0.3)
    state = NetworkState.from_config(cfg)
    state.table.energy[:25] = 0.2
    for _ in range(10):
        assert all(h > 25 for h in run_round(state).cluster_heads)


def test_control_packets_charged_once():
    cfg = NetworkConfig(n=20, seed=6)
    plain = NetworkState.from_config(cfg)
    charged = NetworkState.from_config(cfg.replace(charge_control_packets=True))
    a = run_round(plain).energy_consumed_this_round
    b = run_round(charged).energy_consumed_this_round
    expected = sum(cfg.radio.e_elec * 200 + tx_energy(cfg.radio, 200, float(d)) for d in plain.table.d_bs)
    assert b - a == pytest.approx(expected, rel=1e-9)
    assert run_round(plain).energy_consumed_this_round == pytest.approx(run_round(charged).energy_consumed_this_round)


def test_backends_bit_identical():
    from mgear.protocol import BACKENDS

    if len(BACKENDS) < 2:
        pytest.skip("compiled kernel not built")
    for protocol in ("mgear", "leach"):
        cfg = NetworkConfig(protocol=protocol, seed=12, max_rounds=1500)
        a = run_simulation(cfg, backend="python")
        b = run_simulation(cfg, backend="cython")
        assert a.series == b.series
        assert np.array_equal(a.death_rounds, b.death_rounds)


def test_run_simulation_edge_cases():
    res = run_simulation(NetworkConfig(max_rounds=0))
    assert res.series == []
    assert res.summary.last_node_death_round is None and res.summary.first_node_death_round is None
    dead = run_simulation(NetworkConfig(radio=RadioParams(initial_energy=0.0)))
    assert dead.series == []
    assert (dead.summary.first_node_death_round, dead.summary.last_node_death_round) == (0, 0)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_lifetime_spread(seed):
    res = run_simulation(NetworkConfig(seed=seed))
    s = res.summary
    assert s.first_node_death_round < s.half_nodes_death_round <= s.last_node_death_round
    assert s.last_node_death_round > s.first_node_death_round
    assert res.initial_energy - res.final_energy == pytest.approx(res.energy_consumed, abs=1e-9)


def test_series_invariants():
    res = run_simulation(NetworkConfig(protocol="leach", seed=5))
    alive = [r.alive_count for r in res.series]
    resid = [r.total_residual_energy for r in res.series]
    assert alive == sorted(alive, reverse=True)
    assert all(b <= a for a, b in zip(resid, resid[1:]))
    cum = [r.cumulative_source_packets for r in res.series]
    assert cum == sorted(cum)
    assert res.series[-1].alive_count == 0


def test_falls_back_to_python_kernel_without_extension(monkeypatch):
    import importlib
    import sys

    import mgear.protocol.kernels as kernels

    import mgear.protocol

    monkeypatch.setitem(sys.modules, "mgear.protocol._kernel", None)
    monkeypatch.delattr(mgear.protocol, "_kernel", raising=False)
    try:
        reloaded = importlib.reload(kernels)
        assert reloaded.DEFAULT_BACKEND == "python"
        assert list(reloaded.BACKENDS) == ["python"]
        with pytest.raises(ValueError):
            reloaded.get_round_step("cython")
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)
