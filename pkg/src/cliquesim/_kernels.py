"""Numba implementation of the fused sample-extract-decode loop.

Mirrors the reference modules bit for bit: the counter-based RNG gives
every draw a fixed (seed, cycle, slot) address, so this kernel, the
vectorized numpy path, and the pure reference path all see identical
noise and produce identical classifications.
"""

import numpy as np
from numba import njit

U64 = np.uint64
_GOLD = U64(0x9E3779B97F4A7C15)
_M1 = U64(0xBF58476D1CE4E5B9)
_M2 = U64(0x94D049BB133111EB)
_S30 = U64(30)
_S27 = U64(27)
_S31 = U64(31)
_S11 = U64(11)
_SCALE = 2.0**-53
_MEAS_BASE = 1 << 20
_SPREAD_BASE = 1 << 21


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True)
def _u01(key, slot):
    h = _mix64(key + U64(slot + 1) * _GOLD)
    return (h >> _S11) * _SCALE


@njit(cache=True)
def _l1_complex(frame, nbr_anc, slot_min):
    # baseline one-shot classifier: complex iff some active clique has
    # an even set-neighbor count and no boundary-slot escape
    m = frame.shape[0]
    for a in range(m):
        if frame[a] == 0:
            continue
        hot = 0
        for k in range(4):
            nb = nbr_anc[a, k]
            if nb >= 0 and frame[nb] == 1:
                hot += 1
        if (hot & 1) == 0 and not (hot == 0 and slot_min[a] >= 0):
            return 1
    return 0


@njit(cache=True)
def _decode_pass(frame, nbr_anc, nbr_data, slot_min, anc_of_data, order, color_start, flip_buf):
    m = frame.shape[0]
    remaining = 0
    for a in range(m):
        remaining += frame[a]
    if remaining == 0:
        return 0
    for stage in range(3):
        for ci in range(4):
            nf = 0
            for t in range(color_start[ci], color_start[ci + 1]):
                a = order[t]
                center = frame[a]
                hot = 0
                for k in range(4):
                    nb = nbr_anc[a, k]
                    if nb >= 0 and frame[nb] == 1:
                        hot += 1
                if stage == 0:
                    if center == 1 and (hot & 1) == 1:
                        for k in range(4):
                            nb = nbr_anc[a, k]
                            if nb >= 0 and frame[nb] == 1:
                                flip_buf[nf] = nbr_data[a, k]
                                nf += 1
                elif stage == 1:
                    if center == 0 and hot >= 2 and (hot & 1) == 0:
                        for k in range(4):
                            nb = nbr_anc[a, k]
                            if nb >= 0 and frame[nb] == 1:
                                flip_buf[nf] = nbr_data[a, k]
                                nf += 1
                else:
                    if center == 1 and hot == 0 and slot_min[a] >= 0:
                        flip_buf[nf] = slot_min[a]
                        nf += 1
            for j in range(nf):
                q = flip_buf[j]
                for h in range(2):
                    aa = anc_of_data[q, h]
                    if aa >= 0:
                        if frame[aa] == 1:
                            frame[aa] = 0
                            remaining -= 1
                        else:
                            frame[aa] = 1
                            remaining += 1
            if remaining == 0:
                return 0
    return 1


@njit(cache=True)
def run_mc(seed, start, count, model_id, p_data, p_meas, rounds,
           support_idx, nbr_anc, nbr_data, slot_min, anc_of_data,
           order, color_start, spread_probs, edges, mode):
    m = support_idx.shape[0]
    n = anc_of_data.shape[0]
    n_edges = edges.shape[0]
    data = np.zeros(n, np.uint8)
    seed_buf = np.zeros(n, np.uint8)
    frame = np.zeros(m, np.uint8)
    work = np.zeros(m, np.uint8)
    flip_buf = np.zeros(4 * m + 4, np.int32)
    flags = np.zeros((count, 2), np.uint8)
    base_key = _mix64(seed + _GOLD)
    for i in range(count):
        key = _mix64(base_key ^ U64(start + i))
        for q in range(n):
            data[q] = 0
        if model_id == 0:
            for q in range(n):
                if _u01(key, q) < p_data:
                    data[q] = 1
        elif model_id == 1:
            for q in range(n):
                if _u01(key, q) < p_data:
                    seed_buf[q] = 1
                    data[q] = 1
                else:
                    seed_buf[q] = 0
            for c in range(n):
                if seed_buf[c] == 1:
                    base = _SPREAD_BASE + c * n
                    for q in range(n):
                        pr = spread_probs[c, q]
                        if pr > 0.0 and _u01(key, base + q) < pr:
                            data[q] ^= 1
        else:
            for e in range(n_edges):
                if _u01(key, e) < p_data:
                    data[edges[e, 0]] ^= 1
                    data[edges[e, 1]] ^= 1

        any_set = 0
        if p_meas > 0.0 and rounds > 1:
            for a in range(m):
                s = np.uint8(0)
                for k in range(4):
                    qi = support_idx[a, k]
                    if qi >= 0:
                        s ^= data[qi]
                acc = np.uint8(1)
                for r in range(rounds):
                    mf = np.uint8(1) if _u01(key, _MEAS_BASE + r * m + a) < p_meas else np.uint8(0)
                    if (s ^ mf) == 0:
                        acc = np.uint8(0)
                        break
                frame[a] = acc
                any_set |= acc
        else:
            for a in range(m):
                s = np.uint8(0)
                for k in range(4):
                    qi = support_idx[a, k]
                    if qi >= 0:
                        s ^= data[qi]
                frame[a] = s
                any_set |= s

        if any_set == 0:
            continue
        if mode == 0 or mode == 2:
            flags[i, 0] = _l1_complex(frame, nbr_anc, slot_min)
        if mode == 1 or mode == 2:
            for a in range(m):
                work[a] = frame[a]
            flags[i, 1] = _decode_pass(work, nbr_anc, nbr_data, slot_min,
                                       anc_of_data, order, color_start, flip_buf)
    return flags
