"""Counter-based random number generation.

Every random draw in the simulator is a pure function of
(seed, cycle_index, slot), where slot enumerates the draw's role within
one decode cycle.  This makes sampled noise deterministic per cycle,
independent of chunking, worker count and backend, and lets distinct
cycles be generated in any order or in parallel with no shared state.

The generator is the splitmix64 finalizer used in counter mode: a
per-(seed, cycle) stream key is derived by two finalizer applications,
and draw t of a stream is mix64(key + (t + 1) * GOLDEN).  Scalar Python,
vectorized numpy, and numba implementations (in the kernels module)
produce bit-identical values.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MULT1 = 0xBF58476D1CE4E5B9
_MULT2 = 0x94D049BB133111EB

# Slot layout within one cycle.  Per-data-qubit draws (uniform flips,
# cluster seeds) and per-edge draws live in [0, 2**20); measurement draws
# and cluster spread draws get disjoint blocks above.
MEAS_BASE = 1 << 20
SPREAD_BASE = 1 << 21
_SCALE = 2.0 ** -53


def mix64(z: int) -> int:
    """64-bit avalanche finalizer (splitmix64)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MULT1) & MASK64
    z = ((z ^ (z >> 27)) * _MULT2) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, cycle: int) -> int:
    """Derive the 64-bit stream key for one (seed, cycle) pair."""
    h = mix64((seed + GOLDEN) & MASK64)
    return mix64(h ^ (cycle & MASK64))


def uniform01(key: int, slot: int) -> float:
    """Draw slot `slot` of stream `key` as a float in [0, 1)."""
    h = mix64((key + ((slot + 1) * GOLDEN)) & MASK64)
    return (h >> 11) * _SCALE


def mix64_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MULT1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MULT2)
    return z ^ (z >> np.uint64(31))


def stream_keys_np(seed: int, cycles: np.ndarray) -> np.ndarray:
    """Vectorized stream_key for an array of cycle indices."""
    # 0-d operands degrade to numpy scalars whose overflow warns; keep 1-d
    cyc = np.atleast_1d(np.asarray(cycles)).astype(np.uint64)
    h = mix64_np(np.array([(seed + GOLDEN) & MASK64], dtype=np.uint64))
    return mix64_np(h ^ cyc)


def uniform01_np(keys: np.ndarray, slots: np.ndarray) -> np.ndarray:
    """Vectorized uniform01; broadcasts keys against slots."""
    keys = np.atleast_1d(np.asarray(keys, dtype=np.uint64))
    slots = np.atleast_1d(np.asarray(slots)).astype(np.uint64)
    counter = (slots + np.uint64(1)) * np.uint64(GOLDEN)
    h = mix64_np(keys + counter)
    return (h >> np.uint64(11)).astype(np.float64) * _SCALE
