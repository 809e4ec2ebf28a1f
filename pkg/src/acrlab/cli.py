"""Command line entry point: ``acrlab run | region | verify | plot``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .engine import EngineError, NumericError
from .experiment import (
    ConfigError, SchemaError, emit_plot_script, format_float, load_config, run_experiment,
    verification_csv,
)
from .metrics import MetricsError
from .objectives import ObjectiveError, classify_region_1d, get_objective, sublevel_intervals_1d

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("acrlab")


def _cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read {args.config}: {exc}", file=sys.stderr)
        return EXIT_IO
    config = load_config(text)
    if args.workers is not None:
        from dataclasses import replace

        config = replace(config, workers=args.workers)
    result = run_experiment(config, out=args.out)
    for p in result.series_paths:
        log.info("wrote %s", p)
    log.info("wrote %s", result.checkpoint_path)
    sys.stdout.write(result.checkpoint_path.read_text())
    return EXIT_OK


def _cmd_region(args) -> int:
    spec = get_objective(args.objective)
    intervals = sublevel_intervals_1d(spec, args.x)
    print("lo,hi")
    for lo, hi in intervals:
        print(f"{format_float(lo)},{format_float(hi)}")
    if args.classify:
        tag = classify_region_1d(spec, args.x) if len(intervals) else None
        print(f"# region={tag.value if tag else 'optimum'}", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .checks import verify_all

    results = verify_all(args.seed)
    report = verification_csv(results)
    if args.out:
        Path(args.out).write_text(report)
    sys.stdout.write(report)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def _cmd_plot(args) -> int:
    path = emit_plot_script(args.series, args.out)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acrlab", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment config and write CSV series")
    p.add_argument("config", help="JSON experiment config")
    p.add_argument("--out", type=Path, default=None, help="override the config's output directory")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("region", help="print the 1-D Rastrigin sublevel intervals through x")
    p.add_argument("x", type=float)
    p.add_argument("--objective", default="rastrigin1d")
    p.add_argument("--classify", action="store_true", help="also report the region tag on stderr")
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("verify", help="run the numerical check battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("plot", help="emit a matplotlib script for series CSVs")
    p.add_argument("series", nargs="+", type=Path)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, SchemaError, EngineError, MetricsError, ObjectiveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
