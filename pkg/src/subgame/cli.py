"""Command-line frontend: instance generation, solving, and experiments.

Exit codes are a stable contract: 0 success, 2 bad flags or infeasible
parameters, 3 malformed input file, 4 a bounded claim failed its threshold,
1 other I/O failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from .core import (
    QueryLedger,
    SubgameFormatError,
    deserialize,
    serialize,
    solve_classical,
    solve_classical_instrumented,
    stats,
)
from .experiments import (
    METHODS,
    estimate_lemma1,
    fit_loglog_slope,
    measure_error_rate,
    run_census,
    run_scaling,
    write_census_csv,
    write_error_rate_csv,
    write_lemma1_csv,
    write_scaling_csv,
)
from .quantum import solve_quantum
from .sampling import LsbConfig, RngSeed, sample_iid, sample_lsb, substream

__all__ = ["main", "entrypoint", "build_parser"]

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_BAD_INPUT = 3
EXIT_CLAIM_FAILED = 4

_SOLVE_METHODS = ("classical", "quantum-model", "quantum-sim")


def _fail(message: str) -> None:
    raise ValueError(message)


def _default_k(n: int, k: "int | None") -> int:
    # smallest slack that keeps the win-count interval non-empty
    return n % 2 if k is None else k


def _write_text(path: str, text: str) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        fh.write(text)


def cmd_gen(args) -> int:
    seed = RngSeed(args.seed)
    if args.model == "iid":
        if args.p is None:
            _fail("--model iid requires --p")
        game = sample_iid(args.n, args.p, seed)
    else:
        game = sample_lsb(LsbConfig(args.n, _default_k(args.n, args.k)), seed)
    _write_text(args.output, serialize(game))
    line = f"n={game.n} edge_count={stats(game).edge_count}"
    if args.model == "lsb":
        table = solve_classical(game)
        line += f" win_count={int(table.w[1:].sum())}"
    print(line)
    return EXIT_OK


def cmd_solve(args) -> int:
    if args.trials < 1:
        _fail("--trials must be >= 1")
    # undecodable bytes become replacement characters and fail format checks
    with open(args.input, "r", encoding="utf-8", errors="replace") as fh:
        game = deserialize(fh.read())

    if args.method == "classical":
        ledger = QueryLedger()
        table = solve_classical_instrumented(game, ledger)
        win = table.win_bit
        queries = ledger.gamma_queries
        repetitions = None
        trials = 1
        frequency = float(win)
    else:
        if args.seed is None:
            _fail("quantum methods require --seed")
        mode = "model" if args.method == "quantum-model" else "statevector"
        root = RngSeed(args.seed)
        trials = args.trials
        reports = [solve_quantum(game, mode, substream(root, t)) for t in range(trials)]
        # errors are one-sided (never a false 1), so any winning trial decides
        win = int(any(r.win_bit for r in reports))
        queries = sum(r.gamma_queries for r in reports)
        repetitions = reports[0].repetitions
        frequency = sum(r.win_bit for r in reports) / trials

    if args.json:
        print(
            json.dumps(
                {
                    "n": game.n,
                    "method": args.method,
                    "win": win,
                    "queries": queries,
                    "repetitions": repetitions,
                    "seed": args.seed,
                    "trials": trials,
                    "win_frequency": frequency,
                }
            )
        )
    elif args.method == "classical":
        print(f"n={game.n} method={args.method} win={win} queries={queries}")
    else:
        print(
            f"n={game.n} method={args.method} win={win} queries={queries} "
            f"repetitions={repetitions} trials={trials} win_frequency={frequency}"
        )
    return EXIT_OK


def _verdict(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def cmd_lemma1(args) -> int:
    k = _default_k(args.n, args.k)
    est = estimate_lemma1(args.n, args.samples, k, RngSeed(args.seed))
    write_lemma1_csv(args.output, args.n, k, args.samples, args.seed, est)
    print(f"wrote {args.output}")
    print(
        f"lemma1: n={args.n} k={k} samples={args.samples} mean={est.mean} "
        f"stderr={est.stderr} threshold={est.threshold} {_verdict(est.passed)}"
    )
    return EXIT_OK if est.passed else EXIT_CLAIM_FAILED


def cmd_census(args) -> int:
    k = _default_k(args.n, args.k)
    records = run_census(args.n, args.samples, k, RngSeed(args.seed), model=args.model)
    write_census_csv(args.output, args.n, k, args.seed, records)
    print(f"wrote {args.output}")
    mean_crucial = sum(r.crucial_count for r in records) / len(records)
    mean_fraction = sum(r.fraction for r in records) / len(records)
    if args.model == "zero":
        print(
            f"census: n={args.n} samples={args.samples} "
            f"mean_crucial={mean_crucial} mean_fraction={mean_fraction}"
        )
        return EXIT_OK
    threshold = args.n * (args.n + 1) / 48  # half the asymptotic 1/24 fraction
    passed = mean_crucial >= threshold
    print(
        f"census: n={args.n} k={k} samples={args.samples} mean_crucial={mean_crucial} "
        f"mean_fraction={mean_fraction} threshold={threshold} "
        f"asymptotic_fraction={1 / 24} {_verdict(passed)}"
    )
    return EXIT_OK if passed else EXIT_CLAIM_FAILED


def cmd_error_rate(args) -> int:
    k = _default_k(args.n, args.k)
    est = measure_error_rate(args.n, args.games, args.runs, args.mode, k, RngSeed(args.seed))
    write_error_rate_csv(args.output, args.n, args.mode, args.games, args.runs, args.seed, est)
    print(f"wrote {args.output}")
    print(
        f"error-rate: n={args.n} mode={args.mode} games={args.games} runs_per_game={args.runs} "
        f"error_rate={est.mean} stderr={est.stderr} threshold={est.threshold} "
        f"{_verdict(est.passed)}"
    )
    return EXIT_OK if est.passed else EXIT_CLAIM_FAILED


def cmd_scaling(args) -> int:
    n_list = [int(part) for part in args.n_list.split(",") if part]
    methods = [part for part in args.methods.split(",") if part]
    k = args.k if args.k is not None else 0
    points = run_scaling(
        n_list, methods, args.trials, k, RngSeed(args.seed), statevector_cap=args.statevector_cap
    )
    write_scaling_csv(args.output, args.seed, points)
    print(f"wrote {args.output}")
    for method in methods:
        cells = [(pt.n, pt.mean_queries) for pt in points if pt.method == method]
        if len(cells) >= 3:
            slope = fit_loglog_slope(cells)
            line = f"scaling: method={method} loglog_slope={slope}"
            if method.startswith("quantum"):
                divided = [(n, q / math.log2(n)) for n, q in cells]
                line += f" loglog_slope_per_log2n={fit_loglog_slope(divided)}"
            print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subgame",
        description="Generate, solve, and benchmark one-heap subtraction games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="sample a game and write a SUBGAME/1 file")
    gen.add_argument("--n", type=int, required=True, help="initial heap size")
    gen.add_argument("--model", choices=("iid", "lsb"), required=True)
    gen.add_argument("--p", type=float, help="bit probability for --model iid")
    gen.add_argument("--k", type=int, help="balance slack for --model lsb (default: n mod 2)")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("-o", "--output", required=True, help="destination file")
    gen.set_defaults(handler=cmd_gen)

    solve = sub.add_parser("solve", help="solve a game from a SUBGAME/1 file")
    solve.add_argument("-i", "--input", required=True)
    solve.add_argument("--method", choices=_SOLVE_METHODS, required=True)
    solve.add_argument("--seed", type=int, help="required for quantum methods")
    solve.add_argument("--trials", type=int, default=1, help="quantum repetitions to report")
    solve.add_argument("--json", action="store_true", help="machine-readable output")
    solve.set_defaults(handler=cmd_solve)

    lemma1 = sub.add_parser("lemma1", help="single-bit-flip win-rate experiment (bound 1/24)")
    lemma1.add_argument("--n", type=int, required=True)
    lemma1.add_argument("--samples", type=int, required=True)
    lemma1.add_argument("--k", type=int, help="balance slack (default: n mod 2)")
    lemma1.add_argument("--seed", type=int, required=True)
    lemma1.add_argument("-o", "--output", default="lemma1.csv")
    lemma1.set_defaults(handler=cmd_lemma1)

    census = sub.add_parser("census", help="crucial-bit census over sampled games")
    census.add_argument("--n", type=int, required=True)
    census.add_argument("--samples", type=int, required=True)
    census.add_argument("--k", type=int, help="balance slack (default: n mod 2)")
    census.add_argument("--seed", type=int, required=True)
    census.add_argument("--model", choices=("lsb", "zero"), default="lsb")
    census.add_argument("-o", "--output", default="census.csv")
    census.set_defaults(handler=cmd_census)

    error_rate = sub.add_parser("error-rate", help="quantum-solver error rate (bound 2/n)")
    error_rate.add_argument("--n", type=int, required=True)
    error_rate.add_argument("--games", type=int, required=True)
    error_rate.add_argument("--runs", type=int, required=True, help="runs per game")
    error_rate.add_argument("--mode", choices=("model", "statevector"), required=True)
    error_rate.add_argument("--k", type=int, help="balance slack (default: n mod 2)")
    error_rate.add_argument("--seed", type=int, required=True)
    error_rate.add_argument("-o", "--output", default="error_rate.csv")
    error_rate.set_defaults(handler=cmd_error_rate)

    scaling = sub.add_parser("scaling", help="mean charged queries per method and heap size")
    scaling.add_argument("--n-list", required=True, help="comma-separated ascending sizes")
    scaling.add_argument(
        "--methods", required=True, help=f"comma-separated subset of {','.join(METHODS)}"
    )
    scaling.add_argument("--trials", type=int, required=True)
    scaling.add_argument("--k", type=int, help="balance slack (default: 0)")
    scaling.add_argument("--seed", type=int, required=True)
    scaling.add_argument("--statevector-cap", type=int, default=512)
    scaling.add_argument("-o", "--output", default="scaling.csv")
    scaling.set_defaults(handler=cmd_scaling)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already reported; normalize to an int
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except SubgameFormatError as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    raise SystemExit(main())
