"""Batch Monte Carlo driver over the compiled or vectorized kernels.

The engine packs the lattice into flat arrays once per distance and
dispatches to the numba kernel or the numpy fallback.  Both consume the
same counter-based randomness, so results are bit-identical across
backends, chunk sizes, and call splits; a cell is fully determined by
(distance, noise config, cycle range).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from cliquesim._accel import resolve_backend
from cliquesim.lattice import Boundary, build, color_groups
from cliquesim.noise import NoiseConfig, dual_edges, spread_probabilities

MODEL_IDS = {"uniform": 0, "gaussian": 1, "dual": 2}
MODES = {"l1": 0, "l2": 1, "both": 2}


@dataclass(frozen=True, eq=False)
class PackedGeometry:
    n_data: int
    n_ancillas: int
    support_idx: np.ndarray  # (m, 4) int32, -1 pad
    support_pad: np.ndarray  # (m, 4) int64, n_data pad (gather sentinel)
    nbr_anc: np.ndarray  # (m, 4) int32, -1 pad
    nbr_data: np.ndarray  # (m, 4) int32, -1 pad
    slot_min: np.ndarray  # (m,) int32, -1 when no boundary slot
    anc_of_data: np.ndarray  # (n, 2) int32, -1 pad
    order: np.ndarray  # (m,) int32, ancillas sorted by color
    color_start: np.ndarray  # (5,) int32 offsets into order
    groups: tuple[np.ndarray, ...]  # per-color index arrays


@lru_cache(maxsize=None)
def packed_geometry(distance: int) -> PackedGeometry:
    lat = build(distance)
    m, n = lat.n_ancillas, lat.n_data
    support_idx = np.full((m, 4), -1, dtype=np.int32)
    support_pad = np.full((m, 4), n, dtype=np.int64)
    for a, sup in enumerate(lat.supports):
        support_idx[a, : len(sup)] = sup
        support_pad[a, : len(sup)] = sup
    nbr_anc = np.full((m, 4), -1, dtype=np.int32)
    nbr_data = np.full((m, 4), -1, dtype=np.int32)
    for a, entries in enumerate(lat.clique_map):
        k = 0
        for nb, q in entries:
            if nb is Boundary:
                continue
            nbr_anc[a, k] = nb
            nbr_data[a, k] = q
            k += 1
    slot_min = np.asarray(
        [min(slots) if slots else -1 for slots in lat.boundary_slots], dtype=np.int32
    )
    anc_of_data = np.full((n, 2), -1, dtype=np.int32)
    for a, sup in enumerate(lat.supports):
        for q in sup:
            anc_of_data[q, 1 if anc_of_data[q, 0] >= 0 else 0] = a
    grouped = color_groups(lat)
    order = np.asarray([a for g in grouped for a in g], dtype=np.int32)
    color_start = np.zeros(5, dtype=np.int32)
    for ci, g in enumerate(grouped):
        color_start[ci + 1] = color_start[ci] + len(g)
    groups = tuple(np.asarray(g, dtype=np.int64) for g in grouped)
    return PackedGeometry(
        n_data=n,
        n_ancillas=m,
        support_idx=support_idx,
        support_pad=support_pad,
        nbr_anc=nbr_anc,
        nbr_data=nbr_data,
        slot_min=slot_min,
        anc_of_data=anc_of_data,
        order=order,
        color_start=color_start,
        groups=groups,
    )


@dataclass(frozen=True, eq=False)
class SimCounts:
    """Offload tallies for one simulated cycle range."""

    cycles: int
    l1_offloads: int | None
    l2_offloads: int | None
    dominance_violations: int | None
    flags: np.ndarray  # (cycles, 2) uint8; column 0 = baseline, 1 = enhanced


def simulate_counts(
    distance: int,
    config: NoiseConfig,
    cycles: int,
    mode: str = "both",
    start: int = 0,
    backend: str | None = None,
) -> SimCounts:
    """Classify `cycles` decode cycles and tally the offloads.

    mode selects which decoder(s) run: "l1", "l2", or "both" (paired on
    identical noise, which also counts dominance violations: cycles the
    baseline resolved locally but the enhanced decoder did not).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {tuple(MODES)}, got {mode!r}")
    if cycles < 0 or start < 0:
        raise ValueError("cycles and start must be non-negative")
    backend_name = resolve_backend(backend)
    geo = packed_geometry(distance)
    model_id = MODEL_IDS[config.model]
    if config.model == "gaussian":
        p_data = config.rate / config.cluster_mean_size
        spread = spread_probabilities(distance, config.sigma, config.cluster_mean_size)
    else:
        p_data = config.rate
        spread = np.zeros((0, 0), dtype=np.float64)
    edges = dual_edges(distance) if config.model == "dual" else np.zeros((0, 2), dtype=np.int32)
    p_meas = config.effective_measurement_rate
    seed = np.uint64(config.seed % (1 << 64))

    if backend_name == "numba":
        from cliquesim import _kernels

        flags = _kernels.run_mc(
            seed, start, cycles, model_id, p_data, p_meas, config.measurement_rounds,
            geo.support_idx, geo.nbr_anc, geo.nbr_data, geo.slot_min, geo.anc_of_data,
            geo.order, geo.color_start, spread, edges, MODES[mode],
        )
    else:
        from cliquesim import _kernels_np

        flags = _kernels_np.run_mc(
            int(seed), start, cycles, model_id, p_data, p_meas, config.measurement_rounds,
            geo.support_pad, geo.nbr_anc, geo.nbr_data, geo.slot_min, geo.anc_of_data,
            geo.groups, spread, edges, MODES[mode],
        )

    run_l1 = mode in ("l1", "both")
    run_l2 = mode in ("l2", "both")
    l1 = int(flags[:, 0].sum()) if run_l1 else None
    l2 = int(flags[:, 1].sum()) if run_l2 else None
    viol = int(np.sum((flags[:, 0] == 0) & (flags[:, 1] == 1))) if mode == "both" else None
    return SimCounts(cycles, l1, l2, viol, flags)
