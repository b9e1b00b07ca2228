"""Command line front end for the benchmark runner.

Exit codes: 0 on success, 2 for configuration problems (unreadable or
invalid config files, bad flags), 3 when a run aborts at runtime (the
partial trace is still written, with a trailing "# abort:" marker).
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .runner import BenchAbort, compare_to_csv, run_experiment, write_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Run composite-optimization benchmarks and write trace CSVs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment from a key=value config")
    p_run.add_argument("--config", required=True,
                       help="path to the key=value config file")
    p_run.add_argument("--out", help="trace CSV path (overrides out= in the config)")
    p_run.add_argument("--seed", type=int, help="override the config seed")
    p_run.add_argument("--budget", type=int,
                       help="override the gradient-evaluation budget")

    p_cmp = sub.add_parser(
        "compare",
        help="run several configs on the same problem and merge their traces")
    p_cmp.add_argument("--configs", required=True,
                       help="comma-separated config files to run")
    p_cmp.add_argument("--out", required=True, help="merged CSV path")
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.budget is not None:
        overrides["budget"] = args.budget
    if overrides:
        cfg = cfg.with_overrides(**overrides)
    out = args.out if args.out is not None else cfg.out
    if out is None:
        raise ConfigError("no output path: pass --out or set out= in the config")
    try:
        outcome = run_experiment(cfg)
    except BenchAbort as exc:
        write_csv(out, exc.rows, abort=str(exc))
        print("abort: %s (partial trace in %s)" % (exc, out), file=sys.stderr)
        return 3
    write_csv(out, outcome.rows, abort=outcome.abort)
    if outcome.abort is not None:
        print("abort: %s (partial trace in %s)" % (outcome.abort, out),
              file=sys.stderr)
        return 3
    print("wrote %s (%d rows)" % (out, len(outcome.rows)))
    return 0


def _cmd_compare(args) -> int:
    paths = [p for p in (s.strip() for s in args.configs.split(",")) if p]
    if len(paths) < 2:
        raise ConfigError("compare needs at least two configs")
    compare_to_csv(paths, args.out)
    print("wrote %s" % args.out)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_compare(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except BenchAbort as exc:
        print("abort: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
