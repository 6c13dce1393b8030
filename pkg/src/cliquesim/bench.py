"""Backend benchmark: numba kernels against the pure-numpy fallback.

Run as `python3 -m cliquesim.bench`.  Verifies that both backends emit
identical per-cycle flags on a shared slice, then times each on the full
cycle count.  Cycle streams are counter-based, so the check slice and the
timed run see exactly the same noise regardless of backend.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ._accel import numba_available
from .engine import simulate_counts
from .noise import NoiseConfig


def _time_backend(distance, config, cycles, backend):
    # untimed warm-up: first numba call includes JIT/cache load
    simulate_counts(distance, config, 1000, backend=backend)
    t0 = time.perf_counter()
    counts = simulate_counts(distance, config, cycles, backend=backend)
    return time.perf_counter() - t0, counts


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="cliquesim.bench", description=__doc__.splitlines()[0]
    )
    ap.add_argument("--distance", type=int, default=21)
    ap.add_argument("--model", choices=("uniform", "gaussian", "dual"), default="uniform")
    ap.add_argument("--rate", type=float, default=0.005)
    ap.add_argument("--rounds", type=int, default=1)
    ap.add_argument("--cycles", type=int, default=200_000)
    ap.add_argument("--check-cycles", type=int, default=20_000,
                    help="cycles compared flag-by-flag before timing")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    config = NoiseConfig(
        model=args.model, rate=args.rate, measurement_rounds=args.rounds, seed=args.seed
    )
    if not numba_available():
        print("numba not importable; timing the numpy backend only")
        dt, counts = _time_backend(args.distance, config, args.cycles, "numpy")
        print(f"numpy : {args.cycles} cycles in {dt:.3f} s "
              f"({dt / args.cycles * 1e6:.2f} us/cycle)")
        return 0

    check_nb = simulate_counts(args.distance, config, args.check_cycles, backend="numba")
    check_np = simulate_counts(args.distance, config, args.check_cycles, backend="numpy")
    if not np.array_equal(check_nb.flags, check_np.flags):
        print(f"backend mismatch on {args.check_cycles} check cycles")
        return 1
    print(f"backends agree on {args.check_cycles} check cycles "
          f"(l1 offloads {check_nb.l1_offloads}, l2 offloads {check_nb.l2_offloads})")

    times = {}
    for backend in ("numba", "numpy"):
        dt, counts = _time_backend(args.distance, config, args.cycles, backend)
        times[backend] = dt
        print(f"{backend:6s}: {args.cycles} cycles in {dt:.3f} s "
              f"({dt / args.cycles * 1e6:.2f} us/cycle), "
              f"l1 {counts.l1_offloads} l2 {counts.l2_offloads}")
    print(f"speedup: numba is {times['numpy'] / times['numba']:.1f}x faster")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
