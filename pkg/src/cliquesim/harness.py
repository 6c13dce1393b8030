"""Monte Carlo experiment runner.

Sweeps (distance x rate x model x decoder) cells, attaching a Wilson 95%
interval to every offload fraction, and provides the two derived analyses
used throughout: L1/L2 improvement ratios and logistic extrapolation of
offload fraction over code distance.

Determinism contract: a cell is fully determined by (lattice, config,
decoder, cycles).  Cycles are partitioned into fixed-size chunks and each
chunk draws from a counter-based stream keyed by (seed, cycle index), so
the aggregated counts are identical no matter how many workers run the
chunks or in what order.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .engine import simulate_counts
from .lattice import Lattice
from .noise import NoiseConfig

log = logging.getLogger(__name__)

# two-sided 95% normal quantile, frozen so intervals never drift
WILSON_Z = 1.959963984540054

DEFAULT_CYCLES = 1_000_000
CHUNK_CYCLES = 1 << 18

CSV_FIELDS = (
    "distance",
    "rate",
    "model",
    "decoder",
    "rounds",
    "cycles",
    "offload_count",
    "offload_fraction",
    "ci_low",
    "ci_high",
    "seed",
)

_INT_FIELDS = frozenset({"distance", "rounds", "cycles", "offload_count", "seed"})


def wilson_interval(count: int, cycles: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion count/cycles."""
    if not 0 <= count <= cycles:
        raise ValueError(f"need 0 <= count <= cycles, got {count}/{cycles}")
    n = cycles
    p = count / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4 * n * n)) / denom
    # at the extremes centre - half is 0 (or centre + half is 1) exactly in
    # real arithmetic; snap away the float residue
    lo = 0.0 if count == 0 else max(0.0, centre - half)
    hi = 1.0 if count == n else min(1.0, centre + half)
    return (lo, hi)


@dataclass(frozen=True)
class CellStats:
    """One sweep cell: configuration, offload count, and its interval."""

    distance: int
    rate: float
    model: str
    decoder: str
    rounds: int
    cycles: int
    offload_count: int
    offload_fraction: float
    ci_low: float
    ci_high: float
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.offload_fraction <= 1.0:
            raise ValueError(f"offload_fraction {self.offload_fraction} outside [0, 1]")
        if not 0 <= self.offload_count <= self.cycles:
            raise ValueError(
                f"offload_count {self.offload_count} outside [0, cycles={self.cycles}]"
            )


@dataclass(frozen=True)
class RunStats:
    """Aggregated sweep output; purely a container with sanity invariants."""

    cells: tuple[CellStats, ...]


def _sum_offloads(
    distance: int,
    config: NoiseConfig,
    cycles: int,
    mode: str,
    backend: str | None,
    workers: int,
) -> tuple[int, int]:
    """Total (l1, l2) offload counts over all cycle chunks.

    Chunk results add commutatively, so worker count and completion order
    cannot change the totals.
    """
    starts = list(range(0, cycles, CHUNK_CYCLES))

    def one(start: int) -> tuple[int, int]:
        r = simulate_counts(
            distance,
            config,
            min(CHUNK_CYCLES, cycles - start),
            mode=mode,
            start=start,
            backend=backend,
        )
        return (r.l1_offloads or 0, r.l2_offloads or 0)

    if workers <= 1 or len(starts) <= 1:
        parts = [one(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, starts))
    return (sum(p[0] for p in parts), sum(p[1] for p in parts))


def _make_cell(
    lattice: Lattice, config: NoiseConfig, decoder: str, cycles: int, count: int
) -> CellStats:
    lo, hi = wilson_interval(count, cycles)
    return CellStats(
        distance=lattice.distance,
        rate=config.rate,
        model=config.model,
        decoder=decoder,
        rounds=config.measurement_rounds,
        cycles=cycles,
        offload_count=count,
        offload_fraction=count / cycles,
        ci_low=lo,
        ci_high=hi,
        seed=config.seed,
    )


def run_cell(
    lattice: Lattice,
    config: NoiseConfig,
    decoder: str,
    cycles: int = DEFAULT_CYCLES,
    *,
    backend: str | None = None,
    workers: int = 1,
) -> CellStats:
    """Simulate one cell and return its statistics.

    Bit-identical for identical (config, cycles) regardless of workers.
    """
    if decoder not in ("l1", "l2"):
        raise ValueError(f"decoder must be 'l1' or 'l2', got {decoder!r}")
    if cycles < 1:
        raise ValueError(f"cycles must be >= 1, got {cycles}")
    l1, l2 = _sum_offloads(lattice.distance, config, cycles, decoder, backend, workers)
    return _make_cell(lattice, config, decoder, cycles, l1 if decoder == "l1" else l2)


def run_pair(
    lattice: Lattice,
    config: NoiseConfig,
    cycles: int = DEFAULT_CYCLES,
    *,
    backend: str | None = None,
    workers: int = 1,
) -> tuple[CellStats, CellStats]:
    """Run both decoders on identical sampled cycles; returns (l1, l2) cells.

    Sharing samples halves the cost and makes paired comparisons exact.
    """
    if cycles < 1:
        raise ValueError(f"cycles must be >= 1, got {cycles}")
    l1, l2 = _sum_offloads(lattice.distance, config, cycles, "both", backend, workers)
    return (
        _make_cell(lattice, config, "l1", cycles, l1),
        _make_cell(lattice, config, "l2", cycles, l2),
    )


@dataclass(frozen=True)
class ImprovementRatio:
    """L1/L2 offload ratio; a lower bound when L2 never offloaded."""

    value: float
    is_lower_bound: bool

    def __str__(self) -> str:
        return f">= {self.value:g}" if self.is_lower_bound else f"{self.value:g}"


def improvement_ratio(cell_l1: CellStats, cell_l2: CellStats) -> ImprovementRatio:
    """Bandwidth-reduction factor of the enhanced decoder over the baseline.

    When the L2 cell has zero offloads the true ratio is unbounded; the
    result then carries the defensible lower bound l1.offload_count
    (l2 saw fewer than one offload in the same number of cycles).
    """
    key = lambda c: (c.distance, c.rate, c.model, c.rounds, c.cycles)
    if key(cell_l1) != key(cell_l2):
        raise ValueError(
            f"cells disagree on (distance, rate, model, rounds, cycles): "
            f"{key(cell_l1)} vs {key(cell_l2)}"
        )
    if (cell_l1.decoder, cell_l2.decoder) != ("l1", "l2"):
        raise ValueError(
            f"expected decoders ('l1', 'l2'), got "
            f"({cell_l1.decoder!r}, {cell_l2.decoder!r})"
        )
    if cell_l2.offload_fraction == 0.0:
        return ImprovementRatio(float(cell_l1.offload_count), True)
    return ImprovementRatio(cell_l1.offload_fraction / cell_l2.offload_fraction, False)


@dataclass(frozen=True)
class LogisticFit:
    """Least-squares fit of logit(offload_fraction) = intercept + slope * d."""

    intercept: float
    slope: float
    fitted_range: tuple[int, int]
    extrapolated_range: tuple[int, int] | None
    residuals: tuple[float, ...]
    excluded: tuple[int, ...]

    def predict(self, distance: int | float) -> float:
        """Predicted offload fraction, clamped to the open interval (0, 1)."""
        zv = self.intercept + self.slope * distance
        if zv >= 0:
            p = 1.0 / (1.0 + math.exp(-zv))
        else:
            e = math.exp(zv)
            p = e / (1.0 + e)
        return min(max(p, 5e-324), 1.0 - 2.0**-53)


def logistic_extrapolate(
    cells: list[CellStats] | tuple[CellStats, ...],
    predict: tuple[int, ...] = (),
    *,
    fit_min: int | None = None,
    fit_max: int | None = None,
) -> tuple[LogisticFit, dict[int, float]]:
    """Fit logit(f) against d over one (rate, model, decoder, rounds) series.

    Points with fraction exactly 0 or 1 have no logit; they are dropped
    and logged.  `fit_min`/`fit_max` restrict the fitting window without
    touching the prediction distances.  Raises ValueError when fewer
    than 3 usable points remain.
    """
    if not cells:
        raise ValueError("no cells to fit")
    keys = {(c.rate, c.model, c.decoder, c.rounds) for c in cells}
    if len(keys) != 1:
        raise ValueError(f"cells must share (rate, model, decoder, rounds), got {sorted(keys)}")
    seen: dict[int, CellStats] = {}
    for c in cells:
        if c.distance in seen:
            raise ValueError(f"duplicate distance {c.distance} in fit input")
        seen[c.distance] = c

    window = [
        c
        for c in cells
        if (fit_min is None or c.distance >= fit_min)
        and (fit_max is None or c.distance <= fit_max)
    ]
    excluded = tuple(
        sorted(c.distance for c in window if c.offload_fraction in (0.0, 1.0))
    )
    for d in excluded:
        log.warning(
            "logistic fit: excluding d=%d, offload fraction %r has no logit",
            d,
            seen[d].offload_fraction,
        )
    usable = sorted(
        (c for c in window if 0.0 < c.offload_fraction < 1.0),
        key=lambda c: c.distance,
    )
    if len(usable) < 3:
        raise ValueError(
            f"logistic fit needs >= 3 fractions strictly inside (0, 1), have {len(usable)}"
        )
    ds = np.array([c.distance for c in usable], dtype=np.float64)
    logits = np.array(
        [math.log(c.offload_fraction / (1.0 - c.offload_fraction)) for c in usable]
    )
    slope, intercept = np.polyfit(ds, logits, 1)
    residuals = tuple(float(r) for r in logits - (intercept + slope * ds))
    fit = LogisticFit(
        intercept=float(intercept),
        slope=float(slope),
        fitted_range=(usable[0].distance, usable[-1].distance),
        extrapolated_range=(min(predict), max(predict)) if predict else None,
        residuals=residuals,
        excluded=excluded,
    )
    return fit, {d: fit.predict(d) for d in predict}


def _format_field(name: str, value: object) -> str:
    if name in _INT_FIELDS:
        return str(int(value))  # type: ignore[arg-type]
    if isinstance(value, float):
        return repr(value)
    return str(value)


def cells_to_csv(cells: list[CellStats] | tuple[CellStats, ...]) -> str:
    """Render cells as CSV text with a fixed schema and '\\n' newlines.

    repr() float formatting round-trips exactly, so identical cells
    always produce byte-identical output.
    """
    out = []
    out.append(",".join(CSV_FIELDS))
    for c in cells:
        row = asdict(c)
        out.append(",".join(_format_field(f, row[f]) for f in CSV_FIELDS))
    return "\n".join(out) + "\n"


def write_csv(cells: list[CellStats] | tuple[CellStats, ...], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(cells_to_csv(cells))


def cells_to_json(cells: list[CellStats] | tuple[CellStats, ...]) -> str:
    """JSON mirror of the CSV schema: a list of objects, same fields."""
    rows = [{f: getattr(c, f) for f in CSV_FIELDS} for c in cells]
    return json.dumps({"cells": rows}, indent=2) + "\n"


def write_json(cells: list[CellStats] | tuple[CellStats, ...], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(cells_to_json(cells))


def read_cells_csv(path: str) -> list[CellStats]:
    """Parse a sweep CSV back into cells, validating the header."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise ValueError(
                f"unexpected CSV header {reader.fieldnames}, want {list(CSV_FIELDS)}"
            )
        cells = []
        for row in reader:
            kwargs = {
                f: (int(row[f]) if f in _INT_FIELDS else row[f]) for f in CSV_FIELDS
            }
            for f in ("rate", "offload_fraction", "ci_low", "ci_high"):
                kwargs[f] = float(kwargs[f])
            cells.append(CellStats(**kwargs))  # type: ignore[arg-type]
    return cells
