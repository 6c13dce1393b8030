"""Simulator for local clique decoding of the rotated surface code.

The package measures how often syndrome patterns are resolved by purely
local clique rules versus offloaded to a global decoder, for length-1
decoding, the length-2 enhancement, three noise models, and code
distances up to 31.
"""

from .engine import SimCounts, simulate_counts
from .harness import (
    CellStats,
    ImprovementRatio,
    LogisticFit,
    RunStats,
    improvement_ratio,
    logistic_extrapolate,
    run_cell,
    run_pair,
    wilson_interval,
)
from .lattice import Boundary, Lattice, build
from .noise import ErrorPattern, NoiseConfig, sample
from .oracle import (
    EnumerationBudgetError,
    ExactOffload,
    StabilizerBasis,
    build_basis,
    exact_offload_probability,
    in_stabilizer_group,
    local_logical_error_rate,
)
from .pipeline import LOCAL, OFFLOAD, DecodeOutcome, decode_l1, decode_l2
from .syndrome import SyndromeFrame, data_syndrome, filtered_syndrome, persistence_filter

__version__ = "0.1.0"

__all__ = [
    "Boundary",
    "CellStats",
    "DecodeOutcome",
    "EnumerationBudgetError",
    "ErrorPattern",
    "ExactOffload",
    "ImprovementRatio",
    "LOCAL",
    "Lattice",
    "LogisticFit",
    "NoiseConfig",
    "OFFLOAD",
    "RunStats",
    "SimCounts",
    "StabilizerBasis",
    "SyndromeFrame",
    "__version__",
    "build",
    "build_basis",
    "data_syndrome",
    "decode_l1",
    "decode_l2",
    "exact_offload_probability",
    "filtered_syndrome",
    "improvement_ratio",
    "in_stabilizer_group",
    "local_logical_error_rate",
    "logistic_extrapolate",
    "persistence_filter",
    "run_cell",
    "run_pair",
    "sample",
    "simulate_counts",
    "wilson_interval",
]
