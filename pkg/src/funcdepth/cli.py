"""Command line interface: ``funcdepth {depth,estimate,simulate,benchmark}``.

Data goes to standard output (or ``--output``); diagnostics go to standard
error. Exit status: 0 success, 2 usage or configuration error, 3 I/O
failure, 4 invalid input data, 1 any other failure.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys

from .core import FunctionalDataError, make_grid
from .depths import DepthMethod, compute_depths
from .estimators import TrimSpec, depth_order, depth_trimmed_mean, untrimmed_mean
from .evaluation import BenchmarkConfig, ReplicationError, run_benchmark
from .files import (
    ConfigError,
    ParseError,
    load_config,
    parse_sample_csv,
    write_curve_csv,
    write_depths_csv,
    write_results,
    write_sample_csv,
)
from .simulation import ModelSpec, generate_model, make_rng

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4

DEPTHS = ("hrd", "fmj", "bd", "mbd", "fsd", "hmode")
ESTIMATORS = ("hrd", "fmj", "bd", "mbd", "fsd", "mean")

log = logging.getLogger("funcdepth")


class UsageError(Exception):
    pass


def _bandwidth(text):
    if text == "quantile":
        return text
    try:
        h = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("bandwidth must be 'quantile' or a positive number")
    if not h > 0:
        raise argparse.ArgumentTypeError("bandwidth must be positive")
    return h


def _alpha(text):
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}")
    if not 0 <= a < 1:
        raise argparse.ArgumentTypeError("alpha must lie in [0, 1)")
    return a


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="funcdepth",
        description="Functional depths, depth-trimmed means and the robustness benchmark.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def band_opts(p):
        p.add_argument("--band-order", type=int, default=3, metavar="J",
                       help="largest band size for bd (default 3)")
        p.add_argument("--mbd-order", type=int, default=2, metavar="j",
                       help="band size for mbd (default 2)")

    p = sub.add_parser("depth", help="depth of every curve in a sample file")
    p.add_argument("--input", required=True, help="sample CSV ('-' for stdin)")
    p.add_argument("--method", required=True, choices=DEPTHS, type=str.lower)
    band_opts(p)
    p.add_argument("--bandwidth", type=_bandwidth, default="quantile",
                   help="hmode bandwidth: 'quantile' (default) or a number")
    p.add_argument("--sorted", action="store_true", help="list curves deepest first")
    p.add_argument("--output")

    p = sub.add_parser("estimate", help="depth-trimmed mean of a sample file")
    p.add_argument("--input", required=True, help="sample CSV ('-' for stdin)")
    p.add_argument("--method", required=True, choices=ESTIMATORS, type=str.lower)
    p.add_argument("--alpha", type=_alpha, default=0.2)
    band_opts(p)
    p.add_argument("--output")

    p = sub.add_parser("simulate", help="draw one sample from a contamination model")
    p.add_argument("--model", type=int, required=True, choices=range(6), metavar="{0..5}")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--q", type=float, default=0.1)
    p.add_argument("--T", type=int, default=30)
    p.add_argument("--K", type=float, default=25.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")

    p = sub.add_parser("benchmark", help="Monte Carlo ISE table")
    p.add_argument("--config", help="JSON config; missing keys take the defaults")
    p.add_argument("--output")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: CPU count); results do not depend on it")
    return parser


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _depth_method(args, n, **kw):
    try:
        method = DepthMethod(args.method, band_order=args.band_order,
                             mbd_order=args.mbd_order, **kw)
    except FunctionalDataError as exc:
        raise UsageError(str(exc)) from None
    if method.name == "bd" and method.band_order > n:
        raise UsageError(f"--band-order {method.band_order} exceeds the {n} curves in the input")
    if method.name == "mbd" and method.mbd_order > n:
        raise UsageError(f"--mbd-order {method.mbd_order} exceeds the {n} curves in the input")
    return method


def _cmd_depth(args):
    sample = parse_sample_csv(args.input)
    method = _depth_method(args, sample.n, bandwidth=args.bandwidth)
    depths = compute_depths(sample, method).values
    order = depth_order(depths) if args.sorted else None
    with _output(args.output) as fh:
        write_depths_csv(depths, fh, order)


def _cmd_estimate(args):
    sample = parse_sample_csv(args.input)
    if args.method == "mean":
        curve = untrimmed_mean(sample)
    else:
        method = _depth_method(args, sample.n)
        curve = depth_trimmed_mean(sample, compute_depths(sample, method), TrimSpec(args.alpha))
    with _output(args.output) as fh:
        write_curve_csv(sample.grid, curve, fh)


def _cmd_simulate(args):
    try:
        spec = ModelSpec(args.model, n=args.n, q=args.q, K=args.K, grid=make_grid(args.T))
    except FunctionalDataError as exc:
        raise UsageError(str(exc)) from None
    sample = generate_model(spec, make_rng(args.seed))
    with _output(args.output) as fh:
        write_sample_csv(sample, fh, labels=True)


def _cmd_benchmark(args):
    config = load_config(args.config) if args.config else BenchmarkConfig()
    if args.workers is not None and args.workers < 1:
        raise UsageError("--workers must be at least 1")
    log.info("benchmark: S=%d, models=%s, methods=%s", config.S, config.models, config.methods)
    table = run_benchmark(config, workers=args.workers)
    with _output(args.output) as fh:
        write_results(table, fh, args.format, config)


COMMANDS = {
    "depth": _cmd_depth,
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "benchmark": _cmd_benchmark,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"funcdepth {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, FunctionalDataError) as exc:
        print(f"funcdepth {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"funcdepth {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ReplicationError as exc:
        print(f"funcdepth {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
