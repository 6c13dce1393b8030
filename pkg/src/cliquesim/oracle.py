"""Ground-truth verification for small lattices.

Residual errors left by local correction are judged against the
stabilizer group of the error's own Pauli type, which is generated by
the opposite-type check supports: those act trivially on the encoded
state, while the simulated-type checks are the ones that detect the
error.  Membership is decided by GF(2) elimination over a row-reduced
generator basis.

The module also provides exact offload probabilities by exhaustive
enumeration of low-weight data errors, and a Monte Carlo estimate of
how often a locally corrected cycle silently commits a logical error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cliquesim.lattice import Lattice
from cliquesim.noise import NoiseConfig, sample
from cliquesim.pipeline import LOCAL, decode_l1, decode_l2
from cliquesim.syndrome import SyndromeFrame, data_syndrome, filtered_syndrome

ENUMERATION_BUDGET = 2_000_000

DECODERS = {"l1": decode_l1, "l2": decode_l2}


class EnumerationBudgetError(Exception):
    """Requested exhaustive enumeration is too large to run."""


@dataclass(frozen=True)
class StabilizerBasis:
    """Row-reduced GF(2) basis of the residual-equivalence group."""

    generator_matrix: np.ndarray  # uint8, (rank, n_data), row-reduced
    pivot_columns: tuple[int, ...]
    n_data: int

    @property
    def rank(self) -> int:
        return self.generator_matrix.shape[0]


def build_basis(lattice: Lattice) -> StabilizerBasis:
    rows = np.zeros((len(lattice.opposite_supports), lattice.n_data), dtype=np.uint8)
    for k, sup in enumerate(lattice.opposite_supports):
        rows[k, list(sup)] = 1
    mat, pivots = _row_reduce(rows)
    return StabilizerBasis(mat, tuple(pivots), lattice.n_data)


def _row_reduce(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    m = mat.copy()
    n_rows, n_cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        hit = np.flatnonzero(m[r:, c])
        if hit.size == 0:
            continue
        top = r + int(hit[0])
        if top != r:
            m[[r, top]] = m[[top, r]]
        clear = np.flatnonzero(m[:, c])
        for i in clear:
            if i != r:
                m[i] ^= m[r]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m[:r], pivots


def in_stabilizer_group(basis: StabilizerBasis, residual: np.ndarray) -> bool:
    """True iff residual is a GF(2) combination of the generators."""
    v = np.asarray(residual, dtype=np.uint8) % 2
    if v.shape != (basis.n_data,):
        raise ValueError(f"residual length {v.shape} does not match {basis.n_data} data qubits")
    v = v.copy()
    for row, col in zip(basis.generator_matrix, basis.pivot_columns):
        if v[col]:
            v ^= row
    return not v.any()


@dataclass(frozen=True)
class ExactOffload:
    """Exact truncated offload probability plus the ignored tail mass."""

    probability: float
    tail_bound: float
    offload_by_weight: tuple[tuple[int, int], ...]  # (weight, offload pattern count)


def exact_offload_probability(
    lattice: Lattice, decoder: str, rate: float, max_weight: int = 3
) -> ExactOffload:
    """Enumerate all data errors of weight <= max_weight exactly.

    Sums the binomial probability of every pattern the decoder offloads;
    tail_bound is the total probability of all heavier patterns, an
    upper bound on what the truncation can miss.  No measurement error.
    """
    if decoder not in DECODERS:
        raise ValueError(f"decoder must be one of {tuple(DECODERS)}, got {decoder!r}")
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must be in [0, 1], got {rate}")
    if max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    n = lattice.n_data
    total = sum(math.comb(n, w) for w in range(min(max_weight, n) + 1))
    if total > ENUMERATION_BUDGET:
        raise EnumerationBudgetError(
            f"enumerating {total} patterns exceeds the budget of {ENUMERATION_BUDGET}; "
            "lower max_weight or distance"
        )
    decode = DECODERS[decoder]
    prob = 0.0
    by_weight = []
    for w in range(min(max_weight, n) + 1):
        n_off = 0
        for qs in _subsets(n, w):
            flips = np.zeros(n, dtype=np.uint8)
            flips[qs] = 1
            out = decode(lattice, SyndromeFrame(data_syndrome(lattice, flips)))
            if not out.is_local:
                n_off += 1
        by_weight.append((w, n_off))
        prob += n_off * rate**w * (1.0 - rate) ** (n - w)
    tail = sum(
        math.comb(n, w) * rate**w * (1.0 - rate) ** (n - w)
        for w in range(max_weight + 1, n + 1)
    )
    return ExactOffload(prob, tail, tuple(by_weight))


def _subsets(n: int, w: int):
    from itertools import combinations

    if w == 0:
        yield ()
        return
    yield from (list(c) for c in combinations(range(n), w))


def local_logical_error_rate(
    lattice: Lattice, decoder: str, config: NoiseConfig, cycles: int
) -> float:
    """Fraction of Local cycles whose residual is not a stabilizer.

    The residual is the sampled data error XOR the applied corrections,
    so the measurement is meaningful when measurement errors are off
    (single round or zero measurement rate); otherwise the frame the
    decoder saw may not match the data truth.
    """
    if decoder not in DECODERS:
        raise ValueError(f"decoder must be one of {tuple(DECODERS)}, got {decoder!r}")
    decode = DECODERS[decoder]
    basis = build_basis(lattice)
    n_local = 0
    n_logical = 0
    for cycle in range(cycles):
        pattern = sample(lattice, config, cycle)
        out = decode(lattice, filtered_syndrome(lattice, pattern))
        if out.classification != LOCAL:
            continue
        n_local += 1
        residual = pattern.data_flips ^ out.corrections
        if not in_stabilizer_group(basis, residual):
            n_logical += 1
    return n_logical / n_local if n_local else 0.0
