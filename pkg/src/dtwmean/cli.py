"""Command line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 refused by a size guard.
"""
import argparse
import os
import sys

import numpy as np

from . import data
from .dtw import dtw
from .errors import DataError, GuardError
from .exact import exact_mean_dp
from .geometry import CENTRALITY_TOL, correctness_eval, driftout_eval
from .heuristics import HeuristicConfig, dba, ssg

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _nonneg_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return v


def _methods(values):
    out = []
    for v in values:
        out += [m for m in v.split(",") if m]
    bad = [m for m in out if m not in ("dba", "ssg", "exact")]
    if bad or not out:
        raise UsageError(f"--methods accepts dba, ssg, exact; got {' '.join(values)}")
    return tuple(dict.fromkeys(out))


def _add_guard(p):
    p.add_argument("--max-n", type=_positive_int, help="override the exact-mean length limit")
    p.add_argument("--allow-slow", action="store_true", help="disable the exact-mean length limit")


def _add_heuristic(p, seed=True):
    p.add_argument("--max-iter", type=_positive_int, default=200)
    p.add_argument("--eta0", type=float, default=0.2)
    p.add_argument("--eta1", type=float, default=0.02)
    if seed:
        p.add_argument("--seed", type=_seed, default=0)


def _add_datasets(p):
    p.add_argument(
        "--dataset",
        action="append",
        default=[],
        metavar="NAME=PATH[,PATH]",
        help="UCR files for one dataset (train then test); repeatable",
    )
    p.add_argument("--ucr-root", help="directory holding UCR NAME_TRAIN/NAME_TEST files")
    p.add_argument("--names", nargs="+", default=[], help="dataset names to load from --ucr-root")
    p.add_argument("--synthetic", type=_positive_int, metavar="K", help="use K seeded random-walk datasets")
    p.add_argument("--length", type=_positive_int, default=24, help="synthetic series length")
    p.add_argument("--count", type=_positive_int, default=200, help="synthetic series per dataset")
    p.add_argument("--normalize", action="store_true", help="z-normalize every loaded series")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--output", help="report path")
    p.add_argument("--format", choices=("csv", "json"), help="report format (default: from extension, else csv)")
    _add_guard(p)


def build_parser():
    parser = _Parser(prog="dtwmean", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("dist", help="dtw-distance of two series files")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--path", action="store_true", help="also print an optimal warping path")

    p = sub.add_parser("mean-exact", help="exact mean of two or three series")
    p.add_argument("files", nargs="+")
    _add_guard(p)

    for name, helptext in (("mean-dba", "DBA approximation"), ("mean-ssg", "SSG approximation")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("files", nargs="+")
        _add_heuristic(p)
        p.add_argument("--tol", type=_nonneg_float, default=1e-12, help="DBA stop threshold")
        p.add_argument("--init", default="medoid", help="'medoid', a member index, or a series file")

    p = sub.add_parser("eval-correctness", help="err_eq / err_mid of exact means of random pairs")
    _add_datasets(p)

    p = sub.add_parser("eval-driftout", help="drift-out rates of heuristic means of random triples")
    _add_datasets(p)
    _add_heuristic(p, seed=False)
    p.add_argument("--tol", type=_nonneg_float, default=CENTRALITY_TOL, help="centrality tolerance")
    p.add_argument("--methods", nargs="+", default=["dba", "ssg"])

    p = sub.add_parser("gen-synthetic", help="write seeded random-walk datasets in UCR format")
    p.add_argument("--output", required=True, help="target directory")
    p.add_argument("--datasets", type=_positive_int, default=3)
    p.add_argument("--count", type=_positive_int, default=200)
    p.add_argument("--length", type=_positive_int, default=24)
    p.add_argument("--seed", type=_seed, default=0)
    return parser


def _fmt_series(v):
    return " ".join(f"{x:.6f}" for x in v)


def _load_datasets(args):
    sets = []
    for spec in args.dataset:
        name, sep, paths = spec.partition("=")
        if not sep or not name or not paths:
            raise UsageError(f"--dataset expects NAME=PATH[,PATH], got {spec!r}")
        sets.append(data.load_ucr(paths.split(","), name=name, normalize=args.normalize))
    if args.names and not args.ucr_root:
        raise UsageError("--names requires --ucr-root")
    for name in args.names:
        sets.append(data.load_ucr(data.find_ucr_files(args.ucr_root, name), name=name, normalize=args.normalize))
    if args.synthetic:
        for i in range(args.synthetic):
            d = data.random_walks(args.count, args.length, seed=args.seed, name=f"synthetic{i:02d}")
            if args.normalize:
                d = data.Dataset(d.name, d.labels, data.znormalize(d.values))
            sets.append(d)
    if not sets:
        raise UsageError("no datasets given (use --dataset, --ucr-root/--names or --synthetic)")
    return sets


def _write(summaries, args):
    print(data.render_csv(summaries).replace(",", "\t"), end="")
    if args.output:
        fmt = args.format or ("json" if args.output.endswith(".json") else "csv")
        data.write_report(summaries, fmt, args.output)
        print(f"report written to {args.output}")


def _cmd_dist(args):
    d, path = dtw(data.load_series(args.x), data.load_series(args.y))
    print(f"distance {d!r}")
    if args.path:
        print(" ".join(f"({i},{j})" for i, j in path.points))


def _cmd_mean_exact(args):
    S = [data.load_series(f) for f in args.files]
    if len(S) not in (2, 3):
        raise UsageError("mean-exact needs two or three series files")
    res = exact_mean_dp(S, max_n=args.max_n, allow_slow=args.allow_slow)
    print(f"frechet {res.frechet_value!r}")
    print(f"length {res.mean.size}")
    print(f"mean {_fmt_series(res.mean)}")


def _heuristic_config(args, init="medoid", tol=1e-12, seed=0):
    try:
        return HeuristicConfig(args.max_iter, args.eta0, args.eta1, tol, seed, init)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _cmd_mean_heuristic(args):
    S = [data.load_series(f) for f in args.files]
    init = args.init
    if init != "medoid":
        init = int(init) if init.lstrip("-").isdigit() else data.load_series(init)
        if isinstance(init, int) and not 0 <= init < len(S):
            raise UsageError(f"--init index {init} out of range")
    cfg = _heuristic_config(args, init, args.tol, args.seed)
    res = (dba if args.command == "mean-dba" else ssg)(S, cfg)
    print(f"frechet {res.frechet_value!r}")
    print(f"iterations {res.iterations} converged {res.converged}")
    print(f"mean {_fmt_series(res.mean)}")


def _cmd_eval(args):
    sets = _load_datasets(args)
    out = []
    if args.command == "eval-correctness":
        for d in sets:
            out.append(correctness_eval(d, args.trials, args.seed, args.jobs, args.max_n, args.allow_slow))
    else:
        methods = _methods(args.methods)
        cfg = _heuristic_config(args)
        for d in sets:
            out.append(
                driftout_eval(d, args.trials, args.seed, methods, cfg, args.tol, args.jobs, args.max_n, args.allow_slow)
            )
    _write(out, args)


def _cmd_gen(args):
    os.makedirs(args.output, exist_ok=True)
    for i in range(args.datasets):
        d = data.random_walks(args.count, args.length, seed=args.seed, name=f"synthetic{i:02d}")
        path = os.path.join(args.output, f"{d.name}.tsv")
        data.write_ucr(d, path)
        print(path)


COMMANDS = {
    "dist": _cmd_dist,
    "mean-exact": _cmd_mean_exact,
    "mean-dba": _cmd_mean_heuristic,
    "mean-ssg": _cmd_mean_heuristic,
    "eval-correctness": _cmd_eval,
    "eval-driftout": _cmd_eval,
    "gen-synthetic": _cmd_gen,
}


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dtwmean: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardError as exc:
        print(f"dtwmean: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (DataError, OSError) as exc:
        print(f"dtwmean: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"dtwmean: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
