"""Pure-Python round kernel.

Line-for-line twin of ``_kernel.pyx``: same loop order, same arithmetic
order, so both backends produce bit-identical trajectories.
"""

import math

# role codes, shared with _kernel.pyx and protocol.engine.Role
DEAD = 0
CLUSTER_HEAD = 1
MEMBER = 2
DIRECT_BS = 3
DIRECT_GW = 4

NEAR_BS = 0
NEAR_GW = 1


def _tx(e_elec, e_fs, e_mp, d0, free_space, k, d):
    d2 = d * d
    if free_space or d < d0:
        return e_elec * k + e_fs * k * d2
    return e_elec * k + e_mp * k * (d2 * d2)


def round_step(region, x, y, d_bs, d_gw, d_sink, energy, alive, eligible, role, head,
               uniforms, cursor, threshold, reset_epoch, energy_floor,
               e_elec, e_fs, e_mp, e_da, d0, free_space, k, sink_is_bs):
    """Run one round in place. Returns (cursor, pkts_bs, pkts_src, consumed, deaths, residual).

    ``residual`` sums the energy of nodes still alive after the round."""
    n = len(energy)
    consumed = 0.0
    pkts_src = 0

    for i in range(n):
        head[i] = -1
        if alive[i]:
            role[i] = -1
            pkts_src += 1
        else:
            role[i] = DEAD

    if reset_epoch:
        for i in range(n):
            if alive[i] and region[i] > NEAR_GW:
                eligible[i] = 1

    chs = []
    n_ch_a = 0
    n_ch_b = 0
    for i in range(n):
        if alive[i] and region[i] > NEAR_GW and eligible[i] and energy[i] >= energy_floor:
            u = uniforms[cursor]
            cursor += 1
            if u < threshold:
                role[i] = CLUSTER_HEAD
                eligible[i] = 0
                chs.append(i)
                if region[i] == 2:
                    n_ch_a += 1
                else:
                    n_ch_b += 1

    members = [0] * n
    n_bs_direct = 0
    n_gw_direct = 0
    n_fallback = 0

    for i in range(n):
        if not alive[i]:
            continue
        if region[i] == NEAR_BS:
            role[i] = DIRECT_BS
            cost = _tx(e_elec, e_fs, e_mp, d0, free_space, k, d_bs[i])
            energy[i] -= cost
            consumed += cost
            n_bs_direct += 1
    for i in range(n):
        if alive[i] and region[i] == NEAR_GW:
            role[i] = DIRECT_GW
            cost = _tx(e_elec, e_fs, e_mp, d0, free_space, k, d_gw[i])
            energy[i] -= cost
            consumed += cost
            n_gw_direct += 1

    for i in range(n):
        if not alive[i] or region[i] <= NEAR_GW or role[i] == CLUSTER_HEAD:
            continue
        reg = region[i]
        if (n_ch_a if reg == 2 else n_ch_b) == 0:
            role[i] = DIRECT_BS if sink_is_bs else DIRECT_GW
            cost = _tx(e_elec, e_fs, e_mp, d0, free_space, k, d_sink[i])
            energy[i] -= cost
            consumed += cost
            n_fallback += 1
            continue
        best = -1
        best_d2 = math.inf
        for c in chs:
            if region[c] != reg:
                continue
            dx = x[i] - x[c]
            dy = y[i] - y[c]
            d2 = dx * dx + dy * dy
            if d2 < best_d2:
                best_d2 = d2
                best = c
        role[i] = MEMBER
        head[i] = best
        members[best] += 1
        cost = _tx(e_elec, e_fs, e_mp, d0, free_space, k, math.sqrt(best_d2))
        energy[i] -= cost
        consumed += cost

    for c in chs:
        m = members[c]
        cost = e_elec * k * m
        cost += e_da * k * (m + 1)
        cost += _tx(e_elec, e_fs, e_mp, d0, free_space, k, d_sink[c])
        energy[c] -= cost
        consumed += cost

    n_sink_tx = len(chs) + n_fallback
    if sink_is_bs:
        pkts_bs = n_bs_direct + n_sink_tx
    else:
        pkts_bs = n_bs_direct + (1 if n_gw_direct + n_sink_tx > 0 else 0)

    deaths = 0
    residual = 0.0
    for i in range(n):
        if alive[i]:
            if energy[i] <= 0.0:
                alive[i] = 0
                deaths += 1
            else:
                residual += energy[i]

    return cursor, pkts_bs, pkts_src, consumed, deaths, residual
