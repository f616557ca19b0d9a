# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled round kernel. Mirrors _kernel_py.round_step exactly."""

from libc.math cimport sqrt, INFINITY
from libc.stdlib cimport malloc, free

cdef enum:
    DEAD = 0
    CLUSTER_HEAD = 1
    MEMBER = 2
    DIRECT_BS = 3
    DIRECT_GW = 4
    NEAR_BS = 0
    NEAR_GW = 1


cdef inline double _tx(double e_elec, double e_fs, double e_mp, double d0, bint free_space,
                       double k, double d) nogil:
    cdef double d2 = d * d
    if free_space or d < d0:
        return e_elec * k + e_fs * k * d2
    return e_elec * k + e_mp * k * (d2 * d2)


def round_step(const signed char[::1] region, const double[::1] x, const double[::1] y,
               const double[::1] d_bs, const double[::1] d_gw, const double[::1] d_sink,
               double[::1] energy, unsigned char[::1] alive, unsigned char[::1] eligible,
               signed char[::1] role, int[::1] head,
               const double[::1] uniforms, Py_ssize_t cursor, double threshold,
               bint reset_epoch, double energy_floor,
               double e_elec, double e_fs, double e_mp, double e_da, double d0,
               bint free_space, double k, bint sink_is_bs):
    cdef Py_ssize_t n = energy.shape[0]
    cdef Py_ssize_t i, j, c, best
    cdef double consumed = 0.0, residual = 0.0, cost, u, dx, dy, d2, best_d2
    cdef long pkts_src = 0, pkts_bs, deaths = 0
    cdef long n_ch = 0, n_ch_a = 0, n_ch_b = 0
    cdef long n_bs_direct = 0, n_gw_direct = 0, n_fallback = 0, m, n_sink_tx
    cdef signed char reg
    cdef Py_ssize_t *chs = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t) + 1)
    cdef long *members = <long *> malloc(n * sizeof(long) + 1)
    if chs == NULL or members == NULL:
        free(chs)
        free(members)
        raise MemoryError()

    try:
        for i in range(n):
            head[i] = -1
            members[i] = 0
            if alive[i]:
                role[i] = -1
                pkts_src += 1
            else:
                role[i] = DEAD

        if reset_epoch:
            for i in range(n):
                if alive[i] and region[i] > NEAR_GW:
                    eligible[i] = 1

        for i in range(n):
            if alive[i] and region[i] > NEAR_GW and eligible[i] and energy[i] >= energy_floor:
                u = uniforms[cursor]
                cursor += 1
                if u < threshold:
                    role[i] = CLUSTER_HEAD
                    eligible[i] = 0
                    chs[n_ch] = i
                    n_ch += 1
                    if region[i] == 2:
                        n_ch_a += 1
                    else:
                        n_ch_b += 1

        for i in range(n):
            if alive[i] and region[i] == NEAR_BS:
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
            best_d2 = INFINITY
            for j in range(n_ch):
                c = chs[j]
                if region[c] != reg:
                    continue
                dx = x[i] - x[c]
                dy = y[i] - y[c]
                d2 = dx * dx + dy * dy
                if d2 < best_d2:
                    best_d2 = d2
                    best = c
            role[i] = MEMBER
            head[i] = <int> best
            members[best] += 1
            cost = _tx(e_elec, e_fs, e_mp, d0, free_space, k, sqrt(best_d2))
            energy[i] -= cost
            consumed += cost

        for j in range(n_ch):
            c = chs[j]
            m = members[c]
            cost = e_elec * k * m
            cost += e_da * k * (m + 1)
            cost += _tx(e_elec, e_fs, e_mp, d0, free_space, k, d_sink[c])
            energy[c] -= cost
            consumed += cost

        n_sink_tx = n_ch + n_fallback
        if sink_is_bs:
            pkts_bs = n_bs_direct + n_sink_tx
        else:
            pkts_bs = n_bs_direct + (1 if n_gw_direct + n_sink_tx > 0 else 0)

        for i in range(n):
            if alive[i]:
                if energy[i] <= 0.0:
                    alive[i] = 0
                    deaths += 1
                else:
                    residual += energy[i]
    finally:
        free(chs)
        free(members)

    return cursor, pkts_bs, pkts_src, consumed, deaths, residual
