"""Command-line front end.

Subcommands: `lattice` dumps geometry as JSON, `simulate` runs one cell,
`sweep` runs a Cartesian product of distances x rates x decoders for one
noise model, `verify` enumerates low-weight errors exhaustively against
the decoder, and `extrapolate` fits a logistic model to a sweep CSV.

Exit codes: 0 success, 2 invalid configuration, 3 infeasible exhaustive
enumeration, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import harness
from .lattice import build
from .noise import NoiseConfig, sample
from .oracle import DECODERS, EnumerationBudgetError, exact_offload_probability
from .syndrome import filtered_syndrome

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ENUMERATION = 3
EXIT_IO = 4


class ConfigError(Exception):
    """Invalid flag combination or value; maps to exit code 2."""


def parse_rate(text: str) -> float:
    """One rate: a decimal like 0.005 or a percentage like 0.5%."""
    text = text.strip()
    try:
        if text.endswith("%"):
            value = float(text[:-1]) / 100.0
        else:
            value = float(text)
    except ValueError:
        raise ConfigError(f"cannot parse rate {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"rate {text!r} is outside [0, 1]")
    return value


def parse_rates(text: str) -> list[float]:
    return [parse_rate(tok) for tok in text.split(",") if tok.strip()]


def parse_distances(text: str) -> list[int]:
    """Distances: odd `a..b` range (inclusive, step 2) or a comma list."""
    text = text.strip()
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..")
            lo, hi = int(lo_s), int(hi_s)
            if lo % 2 == 0 or hi % 2 == 0 or lo < 3 or hi < lo:
                raise ConfigError(
                    f"distance range {text!r} must be odd..odd with 3 <= a <= b"
                )
            return list(range(lo, hi + 1, 2))
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse distances {text!r}") from None
    if not values:
        raise ConfigError("no distances given")
    for d in values:
        if d % 2 == 0 or d < 3:
            raise ConfigError(f"distance {d} must be an odd integer >= 3")
    return values


def _noise_config(args: argparse.Namespace, rate: float) -> NoiseConfig:
    meas = parse_rate(args.measurement_rate) if args.measurement_rate else None
    try:
        return NoiseConfig(
            model=args.model,
            rate=rate,
            measurement_rounds=args.rounds,
            measurement_rate=meas,
            sigma=args.sigma,
            cluster_mean_size=args.cluster_size,
            seed=args.seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _emit_cells(cells, args) -> None:
    if args.format == "json":
        _write_output(args.output, harness.cells_to_json(cells))
    else:
        _write_output(args.output, harness.cells_to_csv(cells))


def _add_noise_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--model", choices=("uniform", "gaussian", "dual"), default="uniform")
    sp.add_argument("--rounds", type=int, default=1, help="measurement rounds (1 = noiseless readout)")
    sp.add_argument("--measurement-rate", default=None,
                    help="measurement flip rate; defaults to the data rate")
    sp.add_argument("--sigma", type=float, default=1.0, help="Gaussian cluster spread width")
    sp.add_argument("--cluster-size", type=float, default=2.0, help="Gaussian mean cluster size")
    sp.add_argument("--seed", type=int, default=0)


def _add_run_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--cycles", type=int, default=harness.DEFAULT_CYCLES)
    sp.add_argument("--backend", choices=("auto", "numba", "numpy"), default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", "-o", default="-", help="output path, - for stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cliquesim",
        description="Local decoder simulator for the rotated surface code.",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("lattice", help="dump lattice geometry as JSON")
    sp.add_argument("--distance", type=int, required=True)
    sp.add_argument("--output", "-o", default="-")

    sp = sub.add_parser("simulate", help="Monte Carlo run for one cell")
    sp.add_argument("--distance", type=int, required=True)
    sp.add_argument("--rate", required=True, help="data error rate (decimal or N%%)")
    sp.add_argument("--decoder", choices=("l1", "l2", "both"), default="both")
    _add_noise_flags(sp)
    _add_run_flags(sp)
    sp.add_argument("--trace", default=None, metavar="PATH",
                    help="also write per-cycle stage traces as JSONL (slow)")

    sp = sub.add_parser("sweep", help="Cartesian sweep of distances x rates x decoders")
    sp.add_argument("--distances", required=True, help="odd range a..b or comma list")
    sp.add_argument("--rates", required=True, help="comma list, decimals or N%%")
    sp.add_argument("--decoders", default="l1,l2", help="comma subset of l1,l2")
    _add_noise_flags(sp)
    _add_run_flags(sp)

    sp = sub.add_parser("verify", help="exhaustive low-weight enumeration")
    sp.add_argument("--distance", type=int, required=True)
    sp.add_argument("--decoder", choices=("l1", "l2"), required=True)
    sp.add_argument("--max-weight", type=int, default=2)
    sp.add_argument("--rate", default="0.001",
                    help="rate used for the probability summary line")

    sp = sub.add_parser("extrapolate", help="logistic fit over distance from a sweep CSV")
    sp.add_argument("--input", required=True, help="CSV produced by sweep/simulate")
    sp.add_argument("--decoder", choices=("l1", "l2"), default=None)
    sp.add_argument("--model", default=None)
    sp.add_argument("--rate", default=None)
    sp.add_argument("--rounds", type=int, default=None)
    sp.add_argument("--fit-min", type=int, default=None)
    sp.add_argument("--fit-max", type=int, default=None)
    sp.add_argument("--predict", default="", help="comma list of distances")
    sp.add_argument("--output", "-o", default="-")
    return ap


def build_checked(distance: int):
    try:
        return build(distance)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _cmd_lattice(args) -> int:
    lat = build_checked(args.distance)
    ancillas = []
    for a in range(lat.n_ancillas):
        neighbors = [
            {"ancilla": nb if isinstance(nb, int) else None, "shared": shared}
            for nb, shared in lat.clique_map[a]
        ]
        ancillas.append(
            {
                "r": lat.ancillas[a][0],
                "c": lat.ancillas[a][1],
                "type": "Z",
                "support": list(lat.supports[a]),
                "neighbors": neighbors,
                "color": lat.colors[a],
                "boundary_slots": list(lat.boundary_slots[a]),
            }
        )
    doc = {
        "distance": lat.distance,
        "data": [{"i": i, "j": j} for i, j in lat.data_qubits],
        "ancillas": ancillas,
    }
    _write_output(args.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def _trace_rows(lat, config, decoder_names, cycles):
    for cycle in range(cycles):
        pattern = sample(lat, config, cycle)
        frame = filtered_syndrome(lat, pattern)
        for name in decoder_names:
            out = DECODERS[name](lat, frame)
            yield {
                "cycle": cycle,
                "decoder": name,
                "classification": out.classification,
                "stages": [
                    {"stage": stage, "actions": [
                        {"ancilla": anc, "flips": list(flips)} for anc, flips in actions
                    ]}
                    for stage, actions in out.stage_trace
                ],
            }


def _cmd_simulate(args) -> int:
    if args.cycles < 1:
        raise ConfigError(f"cycles must be >= 1, got {args.cycles}")
    lat = build_checked(args.distance)
    config = _noise_config(args, parse_rate(args.rate))
    if args.decoder == "both":
        cells = list(harness.run_pair(lat, config, args.cycles,
                                      backend=args.backend, workers=args.workers))
    else:
        cells = [harness.run_cell(lat, config, args.decoder, args.cycles,
                                  backend=args.backend, workers=args.workers)]
    _emit_cells(cells, args)
    if args.trace:
        names = ("l1", "l2") if args.decoder == "both" else (args.decoder,)
        with open(args.trace, "w", newline="") as fh:
            for row in _trace_rows(lat, config, names, args.cycles):
                fh.write(json.dumps(row) + "\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.cycles < 1:
        raise ConfigError(f"cycles must be >= 1, got {args.cycles}")
    distances = parse_distances(args.distances)
    rates = parse_rates(args.rates)
    if not rates:
        raise ConfigError("no rates given")
    decoders = tuple(tok.strip() for tok in args.decoders.split(",") if tok.strip())
    if not decoders or any(d not in ("l1", "l2") for d in decoders):
        raise ConfigError(f"decoders must be a subset of l1,l2, got {args.decoders!r}")
    cells = []
    for d in distances:
        lat = build_checked(d)
        for rate in rates:
            config = _noise_config(args, rate)
            if decoders == ("l1", "l2"):
                cells.extend(harness.run_pair(lat, config, args.cycles,
                                              backend=args.backend, workers=args.workers))
            else:
                for name in decoders:
                    cells.append(harness.run_cell(lat, config, name, args.cycles,
                                                  backend=args.backend,
                                                  workers=args.workers))
    _emit_cells(cells, args)
    return EXIT_OK


def _cmd_verify(args) -> int:
    lat = build_checked(args.distance)
    rate = parse_rate(args.rate)
    try:
        result = exact_offload_probability(lat, args.decoder, rate, args.max_weight)
    except EnumerationBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENUMERATION
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    n = lat.n_data
    print(f"exhaustive check: d={args.distance}, decoder={args.decoder}, "
          f"weights 0..{args.max_weight}")
    print("weight  patterns  offload  local")
    total_off = 0
    for w, n_off in result.offload_by_weight:
        patterns = math.comb(n, w)
        total_off += n_off
        print(f"{w:6d}  {patterns:8d}  {n_off:7d}  {patterns - n_off:6d}")
    print(f"offload probability at rate {rate}: {result.probability:.6g} "
          f"(+ tail bound {result.tail_bound:.3g} above weight {args.max_weight})")
    if total_off == 0:
        print(f"verdict: every pattern up to weight {args.max_weight} decodes locally")
    else:
        print(f"verdict: {total_off} patterns up to weight {args.max_weight} offload")
    return EXIT_OK


def _cmd_extrapolate(args) -> int:
    try:
        cells = harness.read_cells_csv(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rate = parse_rate(args.rate) if args.rate is not None else None
    selected = [
        c
        for c in cells
        if (args.decoder is None or c.decoder == args.decoder)
        and (args.model is None or c.model == args.model)
        and (rate is None or c.rate == rate)
        and (args.rounds is None or c.rounds == args.rounds)
    ]
    if not selected:
        raise ConfigError("no rows match the series selection")
    keys = {(c.rate, c.model, c.decoder, c.rounds) for c in selected}
    if len(keys) != 1:
        raise ConfigError(
            f"selection is ambiguous across {len(keys)} series; "
            "narrow with --decoder/--model/--rate/--rounds"
        )
    predict = tuple(int(tok) for tok in args.predict.split(",") if tok.strip())
    try:
        fit, preds = harness.logistic_extrapolate(
            selected, predict, fit_min=args.fit_min, fit_max=args.fit_max
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    srate, smodel, sdecoder, srounds = next(iter(keys))
    doc = {
        "series": {"model": smodel, "rate": srate, "decoder": sdecoder, "rounds": srounds},
        "intercept": fit.intercept,
        "slope": fit.slope,
        "fitted_range": list(fit.fitted_range),
        "extrapolated_range": list(fit.extrapolated_range) if fit.extrapolated_range else None,
        "residuals": list(fit.residuals),
        "excluded": list(fit.excluded),
        "predictions": {str(d): preds[d] for d in predict},
    }
    _write_output(args.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


_COMMANDS = {
    "lattice": _cmd_lattice,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "extrapolate": _cmd_extrapolate,
}


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
