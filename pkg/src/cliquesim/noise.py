"""Noise models producing per-cycle error patterns.

Three data-error models share one measurement-error mechanism:

* uniform: every data qubit flips independently at the physical rate.
* gaussian: cluster centers are seeded at rate / cluster_mean_size and
  each center spreads to nearby qubits with Gaussian-weighted
  probabilities, calibrated so the expected flip count per cycle still
  equals n_data * rate.
* dual: edges between data qubits sharing any check (either type) are
  selected at the physical rate and both endpoints flip, producing
  correlated length-2 chains.

Sampling is a pure function of (config.seed, cycle_index): every draw
maps to a fixed counter slot, so patterns are reproducible under any
execution order or parallelism.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from cliquesim import rng
from cliquesim.lattice import Lattice, build

MODELS = ("uniform", "gaussian", "dual")

SIGMA_COLLAPSE = 1e-6


@dataclass(frozen=True)
class NoiseConfig:
    """Noise parameters for one simulation cell.

    measurement_rate defaults to rate (None at construction).  With
    measurement_rounds == 1 the persistence filter is an identity, so
    measurement errors are disabled in that case.
    """

    model: str
    rate: float
    measurement_rounds: int = 2
    measurement_rate: float | None = None
    sigma: float = 1.0
    cluster_mean_size: float = 2.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError(f"rate must be in [0, 1], got {self.rate}")
        if not isinstance(self.measurement_rounds, int) or self.measurement_rounds < 1:
            raise ValueError(f"measurement_rounds must be an integer >= 1, got {self.measurement_rounds}")
        if self.measurement_rate is None:
            object.__setattr__(self, "measurement_rate", self.rate)
        if not 0.0 <= self.measurement_rate <= 1.0:
            raise ValueError(f"measurement_rate must be in [0, 1], got {self.measurement_rate}")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.cluster_mean_size < 1.0:
            raise ValueError(f"cluster_mean_size must be >= 1, got {self.cluster_mean_size}")

    @property
    def effective_measurement_rate(self) -> float:
        return 0.0 if self.measurement_rounds == 1 else self.measurement_rate


@dataclass(eq=False)
class ErrorPattern:
    """One cycle's sampled errors: data flips plus per-round measurement flips."""

    data_flips: np.ndarray  # uint8, length n_data
    measurement_flips: np.ndarray  # uint8, shape (rounds, n_ancillas)


@lru_cache(maxsize=None)
def spread_probabilities(distance: int, sigma: float, cluster_mean_size: float) -> np.ndarray:
    """Per-center spread probability matrix for the gaussian model.

    Row q gives, for a cluster centered at data qubit q, the flip
    probability of every other qubit: min(1, (cluster_mean_size - 1) *
    w) with Gaussian weights w normalized over the non-center qubits.
    The diagonal is zero (the center flips as the seed itself).  Below
    the collapse threshold on sigma, or when all weights underflow to
    zero, the cluster is just its center.
    """
    lat = build(distance)
    n = lat.n_data
    probs = np.zeros((n, n))
    if sigma <= SIGMA_COLLAPSE or cluster_mean_size == 1.0:
        return probs
    coords = np.asarray(lat.data_qubits, dtype=np.float64)
    delta = coords[:, None, :] - coords[None, :, :]
    sq = np.einsum("ijk,ijk->ij", delta, delta)
    w = np.exp(-sq / (2.0 * sigma * sigma))
    np.fill_diagonal(w, 0.0)
    norm = w.sum(axis=1, keepdims=True)
    ok = norm[:, 0] > 0.0
    probs[ok] = np.minimum(1.0, (cluster_mean_size - 1.0) * w[ok] / norm[ok])
    return probs


@lru_cache(maxsize=None)
def dual_edges(distance: int) -> np.ndarray:
    """All unordered data-qubit pairs sharing a check of either type.

    Returned as an (E, 2) int32 array in sorted order; the edge index is
    the counter slot for that edge's selection draw.
    """
    lat = build(distance)
    pairs = set()
    for sup in lat.supports + lat.opposite_supports:
        pairs.update(combinations(sorted(sup), 2))
    return np.asarray(sorted(pairs), dtype=np.int32)


def _measurement_flips(lat: Lattice, config: NoiseConfig, key: int) -> np.ndarray:
    m = lat.n_ancillas
    out = np.zeros((config.measurement_rounds, m), dtype=np.uint8)
    p = config.effective_measurement_rate
    if p > 0.0:
        for r in range(config.measurement_rounds):
            slots = rng.MEAS_BASE + r * m + np.arange(m)
            out[r] = rng.uniform01_np(key, slots) < p
    return out


def sample_uniform(lattice: Lattice, config: NoiseConfig, cycle_index: int) -> ErrorPattern:
    if config.model != "uniform":
        raise ValueError(f"config.model is {config.model!r}, expected 'uniform'")
    key = rng.stream_key(config.seed, cycle_index)
    data = (rng.uniform01_np(key, np.arange(lattice.n_data)) < config.rate).astype(np.uint8)
    return ErrorPattern(data, _measurement_flips(lattice, config, key))


def sample_gaussian(lattice: Lattice, config: NoiseConfig, cycle_index: int) -> ErrorPattern:
    if config.model != "gaussian":
        raise ValueError(f"config.model is {config.model!r}, expected 'gaussian'")
    key = rng.stream_key(config.seed, cycle_index)
    n = lattice.n_data
    seed_rate = config.rate / config.cluster_mean_size
    data = (rng.uniform01_np(key, np.arange(n)) < seed_rate).astype(np.uint8)
    probs = spread_probabilities(lattice.distance, config.sigma, config.cluster_mean_size)
    for center in np.flatnonzero(data):
        slots = rng.SPREAD_BASE + int(center) * n + np.arange(n)
        spread = rng.uniform01_np(key, slots) < probs[center]
        data ^= spread.astype(np.uint8)
    return ErrorPattern(data, _measurement_flips(lattice, config, key))


def sample_dual_error(lattice: Lattice, config: NoiseConfig, cycle_index: int) -> ErrorPattern:
    if config.model != "dual":
        raise ValueError(f"config.model is {config.model!r}, expected 'dual'")
    key = rng.stream_key(config.seed, cycle_index)
    edges = dual_edges(lattice.distance)
    picked = rng.uniform01_np(key, np.arange(len(edges))) < config.rate
    data = np.zeros(lattice.n_data, dtype=np.uint8)
    ends = edges[picked].ravel()
    np.bitwise_xor.at(data, ends, 1)
    return ErrorPattern(data, _measurement_flips(lattice, config, key))


_SAMPLERS = {
    "uniform": sample_uniform,
    "gaussian": sample_gaussian,
    "dual": sample_dual_error,
}


def sample(lattice: Lattice, config: NoiseConfig, cycle_index: int) -> ErrorPattern:
    """Dispatch to the sampler for config.model."""
    return _SAMPLERS[config.model](lattice, config, cycle_index)
