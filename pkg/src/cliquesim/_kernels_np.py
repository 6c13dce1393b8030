"""Vectorized numpy fallback for the Monte Carlo loop.

Processes cycles in batches.  Every random draw uses the same
(seed, cycle, slot) address as the numba kernel, so the two backends
produce identical flags for identical inputs.
"""

from __future__ import annotations

import numpy as np

from cliquesim import rng

_CHUNK = 4096


def _sample_batch(keys, model_id, p_data, spread_probs, edges, n):
    B = keys.shape[0]
    if model_id == 0:
        draws = rng.uniform01_np(keys[:, None], np.arange(n)[None, :])
        return (draws < p_data).astype(np.uint8)
    if model_id == 1:
        draws = rng.uniform01_np(keys[:, None], np.arange(n)[None, :])
        data = (draws < p_data).astype(np.uint8)
        slots = rng.SPREAD_BASE + np.arange(n)
        for b, c in zip(*np.nonzero(data == 1)):
            spread = rng.uniform01_np(keys[b], slots + int(c) * n) < spread_probs[c]
            data[b] ^= spread.astype(np.uint8)
        return data
    picked = rng.uniform01_np(keys[:, None], np.arange(edges.shape[0])[None, :]) < p_data
    data = np.zeros((B, n), dtype=np.uint8)
    rows, eidx = np.nonzero(picked)
    np.bitwise_xor.at(data, (rows, edges[eidx, 0]), 1)
    np.bitwise_xor.at(data, (rows, edges[eidx, 1]), 1)
    return data


def _extract_batch(keys, data, support_pad, p_meas, rounds):
    B = data.shape[0]
    m = support_pad.shape[0]
    ext = np.concatenate([data, np.zeros((B, 1), dtype=np.uint8)], axis=1)
    s = np.bitwise_xor.reduce(ext[:, support_pad], axis=2)
    if p_meas > 0.0 and rounds > 1:
        acc = np.ones_like(s)
        for r in range(rounds):
            slots = rng.MEAS_BASE + r * m + np.arange(m)
            flips = (rng.uniform01_np(keys[:, None], slots[None, :]) < p_meas).astype(np.uint8)
            acc &= s ^ flips
        return acc
    return s


def _l1_flag_batch(frame, nbr_anc, slot_min):
    B = frame.shape[0]
    ext = np.concatenate([frame, np.zeros((B, 1), dtype=np.uint8)], axis=1)
    hot = ext[:, nbr_anc].sum(axis=2)
    escape = (hot == 0) & (slot_min >= 0)[None, :]
    complex_ = (frame == 1) & (hot % 2 == 0) & ~escape
    return complex_.any(axis=1).astype(np.uint8)


def _decode_batch(frame, nbr_anc, nbr_data, slot_min, anc_of_data, groups):
    # nbr_anc pads with -1, which indexes the appended zero column;
    # anc_of_data pads need an explicit mask before scattering
    for stage in (0, 1, 2):
        for g in groups:
            ext = np.concatenate([frame, np.zeros((frame.shape[0], 1), dtype=np.uint8)], axis=1)
            nbr_set = ext[:, nbr_anc[g]]
            hot = nbr_set.sum(axis=2)
            center = frame[:, g]
            if stage == 0:
                fire = (center == 1) & (hot % 2 == 1)
            elif stage == 1:
                fire = (center == 0) & (hot >= 2) & (hot % 2 == 0)
            else:
                fire = (center == 1) & (hot == 0) & (slot_min[g] >= 0)[None, :]
            if not fire.any():
                continue
            if stage < 2:
                flip = fire[:, :, None] & (nbr_set == 1)
                b_idx, k_idx, s_idx = np.nonzero(flip)
                qs = nbr_data[g[k_idx], s_idx]
            else:
                b_idx, k_idx = np.nonzero(fire)
                qs = slot_min[g[k_idx]]
            for h in (0, 1):
                aa = anc_of_data[qs, h]
                ok = aa >= 0
                np.bitwise_xor.at(frame, (b_idx[ok], aa[ok]), 1)
    return frame.any(axis=1).astype(np.uint8)


def run_mc(seed, start, count, model_id, p_data, p_meas, rounds,
           support_pad, nbr_anc, nbr_data, slot_min, anc_of_data,
           groups, spread_probs, edges, mode):
    n = anc_of_data.shape[0]
    flags = np.zeros((count, 2), dtype=np.uint8)
    for c0 in range(0, count, _CHUNK):
        B = min(_CHUNK, count - c0)
        cycles = np.arange(start + c0, start + c0 + B, dtype=np.int64)
        keys = rng.stream_keys_np(seed, cycles)
        data = _sample_batch(keys, model_id, p_data, spread_probs, edges, n)
        frame = _extract_batch(keys, data, support_pad, p_meas, rounds)
        if mode in (0, 2):
            flags[c0:c0 + B, 0] = _l1_flag_batch(frame, nbr_anc, slot_min)
        if mode in (1, 2):
            flags[c0:c0 + B, 1] = _decode_batch(
                frame.copy(), nbr_anc, nbr_data, slot_min, anc_of_data, groups
            )
    return flags
