"""Command-line front end.

Subcommands: ``run``, ``sweep``, ``spectrum``, ``verify`` and ``replay``.
Exit codes: 0 success, 1 usage or I/O error, 2 algorithmic non-result
(no peak found, too few points to fit).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from pathlib import Path
from typing import Sequence

from . import __version__
from .io import SCHEMAS, write_json, write_spectrum_csv, write_sweep_csv, write_trace_csv
from .lattice import LatticeSpec
from .oracle import MAX_ORACLE_SIDE
from .search import FitError, NoPeakWarning, SearchConfig, auto_cos_delta, fit_scaling, run_search, run_sweep
from .spectral import spectrum_summary, spectrum_table

OUTPUT_DIR_ENV = "TRISEARCH_OUTPUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_NORESULT = 0, 1, 2

DETERMINISM_NOTE = (
    "no random numbers are used by the engine; outputs depend only on the recorded arguments "
    "and are independent of --threads"
)


class UsageError(Exception):
    pass


def _side(text: str) -> int:
    try:
        side = int(text)
    except ValueError:
        raise UsageError(f"side must be an integer, got {text!r}") from None
    if side < 2:
        raise UsageError("side must be ≥ 2")
    return side


def parse_target(text: str, side: int):
    try:
        n1, n2 = (int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"malformed target {text!r}; expected n1,n2") from None
    spec = LatticeSpec(side)
    if not (0 <= n1 < side and 0 <= n2 < side):
        raise UsageError(f"target ({n1},{n2}) outside a side-{side} lattice")
    return spec.site(n1, n2)


def parse_sides(text: str) -> list[int]:
    """``"10,14,20"``, ``"10..40"`` or ``"10..40:2"``."""
    try:
        if ".." in text:
            span, _, step = text.partition(":")
            lo, hi = (int(p) for p in span.split(".."))
            return list(range(lo, hi + 1, int(step) if step else 1))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"malformed sides {text!r}") from None


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUTPUT_DIR_ENV) or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {out}: {exc}") from None
    if not os.access(out, os.W_OK):
        raise UsageError(f"output directory {out} is not writable")
    return out


def _manifest(args, argv: Sequence[str], config: dict, outputs: dict, started: float, **extra) -> dict:
    return {
        "engine": "trisearch",
        "engine_version": __version__,
        "subcommand": args.command,
        "argv": list(argv),
        "config": config,
        "determinism": DETERMINISM_NOTE,
        "outputs": {k: str(v) for k, v in outputs.items()},
        "schemas": SCHEMAS,
        "wall_clock_seconds": time.perf_counter() - started,
        **extra,
    }


def _threads(args) -> int:
    return args.threads if args.threads is not None else (os.cpu_count() or 1)


def cmd_run(args, argv) -> int:
    started = time.perf_counter()
    side = _side(args.side)
    spec = LatticeSpec(side)
    target = parse_target(args.target, side) if args.target else None
    config = SearchConfig(
        spec,
        target=target,
        variant=args.variant,
        delta=args.delta,
        c_delta=args.c_delta,
        max_steps=args.max_steps,
        stop_at_peak=not args.full,
        threads=_threads(args),
    )
    out = _out_dir(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoPeakWarning)
        trace = run_search(config)
    trace_path = write_trace_csv(out / "trace.csv", trace.probs, trace.coin_uniform)
    result = {"t_max": trace.t_max, "p_max": trace.p_max, "peak_found": trace.peak_found, "steps": len(trace.probs) - 1}
    write_json(out / "manifest.json", _manifest(args, argv, config.describe(), {"trace": trace_path}, started, result=result))
    if not trace.peak_found:
        print(f"no peak within {config.resolved_max_steps} steps", file=sys.stderr)
        return EXIT_NORESULT
    print(f"t_max={trace.t_max} p_max={trace.p_max:.17g}")
    return EXIT_OK


def cmd_sweep(args, argv) -> int:
    started = time.perf_counter()
    sides = parse_sides(args.sides)
    if any(s < 4 for s in sides):
        raise UsageError("every side in a sweep must be ≥ 4")
    if sides != sorted(set(sides)):
        raise UsageError("sides must be strictly ascending")
    out = _out_dir(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoPeakWarning)
        traces = run_sweep(sides, args.variant, args.delta, args.c_delta, threads=_threads(args))
    rows = [(tr.config.spec.side, tr.config.spec.n_sites, tr.t_max, tr.p_max) for tr in traces]
    sweep_path = write_sweep_csv(out / "sweep.csv", rows)
    p_values = [p for *_, p in rows if p is not None]
    plateau = {
        "p_max": p_values,
        "relative_spread": (max(p_values) - min(p_values)) / (sum(p_values) / len(p_values)) if p_values else None,
    }
    config = {
        "sides": sides,
        "variant": args.variant,
        "delta_rule": "explicit" if args.delta is not None else "auto",
        "delta": args.delta,
        "c_delta": args.c_delta,
        "log_base": 2,
    }
    outputs = {"sweep": sweep_path}
    try:
        fit = fit_scaling(traces)
    except FitError as exc:
        write_json(out / "manifest.json", _manifest(args, argv, config, outputs, started, plateau=plateau))
        print(str(exc), file=sys.stderr)
        return EXIT_NORESULT
    fit_json = {**fit.to_dict(), "delta_rule": config["delta_rule"], "c_delta": args.c_delta, "variant": args.variant, "plateau": plateau}
    outputs["fit"] = write_json(out / "fit.json", fit_json)
    write_json(out / "manifest.json", _manifest(args, argv, config, outputs, started))
    print(f"r_squared={fit.r_squared:.17g} slope={fit.slope:.17g} intercept={fit.intercept:.17g}")
    return EXIT_OK


def cmd_spectrum(args, argv) -> int:
    started = time.perf_counter()
    spec = LatticeSpec(_side(args.side))
    if args.delta is not None:
        delta = args.delta
    else:
        delta = math.acos(auto_cos_delta(spec.n_sites, args.c_delta))
    out = _out_dir(args)
    csv_path = write_spectrum_csv(out / "spectrum.csv", spectrum_table(spec))
    summary = spectrum_summary(spec, delta)
    json_path = write_json(out / "summary.json", summary)
    config = {"side": spec.side, "delta": delta, "c_delta": args.c_delta}
    write_json(out / "manifest.json", _manifest(args, argv, config, {"spectrum": csv_path, "summary": json_path}, started))
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_verify(args, argv) -> int:
    from .verify import run_checks

    side = _side(args.side)
    if side > MAX_ORACLE_SIDE:
        print(f"oracle limited to side ≤ {MAX_ORACLE_SIDE}", file=sys.stderr)
        return EXIT_USAGE
    results = run_checks(LatticeSpec(side), n_states=args.states)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_USAGE


def cmd_replay(args, argv) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text())
        recorded = manifest["argv"]
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read manifest {args.manifest}: {exc}") from None
    return main(recorded)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trisearch", description="Quantum-walk search on a triangular lattice.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, delta=True):
        p.add_argument("--out", help=f"output directory (default ${OUTPUT_DIR_ENV} or .)")
        p.add_argument("--threads", type=int, default=None, help="worker threads per step (default: all cores)")
        if delta:
            p.add_argument("--delta", type=float, default=None, help="explicit ancilla angle in radians")
            p.add_argument("--c-delta", type=float, default=1.0, help="auto rule: cos d = min(1, c/sqrt(log2 N))")

    p = sub.add_parser("run", help="single search run, writes a trace CSV")
    p.add_argument("--side", required=True)
    p.add_argument("--variant", choices=("marked", "tulsi"), default="tulsi")
    p.add_argument("--target", help="marked site as n1,n2 (default 0,0)")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--full", action="store_true", help="keep stepping to --max-steps after the peak")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="t_max scaling fit and p_max plateau over several sides")
    p.add_argument("--sides", required=True, help="comma list or range a..b[:step]")
    p.add_argument("--variant", choices=("marked", "tulsi"), default="tulsi")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectrum", help="dispersion table and lattice-sum summary")
    p.add_argument("--side", required=True)
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="dense-oracle equivalence and invariant checks")
    p.add_argument("--side", required=True)
    p.add_argument("--states", type=int, default=20, help="random states per operator")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="re-run the invocation recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("--threads must be ≥ 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, argv)
    except (UsageError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
