"""Syndrome extraction and the cross-round persistence filter."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from cliquesim.lattice import Lattice, build
from cliquesim.noise import ErrorPattern


@dataclass(eq=False)
class SyndromeFrame:
    """Bit per simulated-type ancilla."""

    bits: np.ndarray  # uint8, length n_ancillas

    def is_zero(self) -> bool:
        return not self.bits.any()


@lru_cache(maxsize=None)
def _support_pad(distance: int) -> np.ndarray:
    # (n_ancillas, 4) support indices, padded with n_data so a zero
    # sentinel entry in the extended data vector absorbs the padding
    lat = build(distance)
    pad = np.full((lat.n_ancillas, 4), lat.n_data, dtype=np.int64)
    for a, sup in enumerate(lat.supports):
        pad[a, : len(sup)] = sup
    return pad


def data_syndrome(lattice: Lattice, data_flips: np.ndarray) -> np.ndarray:
    """Parity of data flips over each ancilla support (no measurement noise)."""
    ext = np.append(np.asarray(data_flips, dtype=np.uint8), np.uint8(0))
    return np.bitwise_xor.reduce(ext[_support_pad(lattice.distance)], axis=1)


def extract(lattice: Lattice, pattern: ErrorPattern, round: int) -> SyndromeFrame:
    """Syndrome of one measurement round: data parity XOR that round's flips."""
    n_rounds = pattern.measurement_flips.shape[0]
    if not 0 <= round < n_rounds:
        raise IndexError(f"round {round} out of range for {n_rounds} rounds")
    bits = data_syndrome(lattice, pattern.data_flips) ^ pattern.measurement_flips[round]
    return SyndromeFrame(bits)


def persistence_filter(frames: list[SyndromeFrame]) -> SyndromeFrame:
    """Keep only bits set in every round; transient flips are dismissed."""
    if not frames:
        raise ValueError("persistence_filter needs at least one frame")
    return SyndromeFrame(reduce(np.bitwise_and, (f.bits for f in frames)))


def filtered_syndrome(lattice: Lattice, pattern: ErrorPattern) -> SyndromeFrame:
    """Extract every round and apply the persistence filter."""
    rounds = pattern.measurement_flips.shape[0]
    return persistence_filter([extract(lattice, pattern, r) for r in range(rounds)])
