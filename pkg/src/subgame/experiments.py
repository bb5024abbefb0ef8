"""Monte-Carlo drivers for the package's quantitative claims.

Four experiments, each a pure function of its configuration including the
root seed (re-runs are byte-identical, regardless of worker count):

* ``estimate_lemma1``: flip one random move bit of a losing/sensitive/
  balanced game and measure how often the flipped game becomes winning;
  the lower bound under test is 1/24.
* ``run_census`` / ``crucial_bit_census``: exhaustively count the bits whose
  flip inverts the game value.
* ``measure_error_rate``: disagreement rate of the quantum solver against the
  exact solver; the bound under test is 2/n.
* ``run_scaling``: mean charged queries per solver method across heap sizes,
  for exponent fitting via ``fit_loglog_slope``.

Sample ``i`` of an experiment always draws from the substream keyed by ``i``,
so samples may be computed concurrently (``SUBGAME_THREADS`` caps the worker
count; 0 or unset picks the CPU count) without affecting any output.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import Game, QueryLedger, solve_classical, solve_classical_instrumented, triangle_size
from .core import _solve_bits
from .quantum import MODES, solve_quantum
from .sampling import LsbConfig, flip_random_bit, sample_lsb
from .seeding import RngSeed, substream

__all__ = [
    "Estimate",
    "ScalingPoint",
    "CensusRecord",
    "METHODS",
    "LEMMA1_THRESHOLD",
    "estimate_lemma1",
    "crucial_bit_census",
    "run_census",
    "measure_error_rate",
    "run_scaling",
    "fit_loglog_slope",
    "write_lemma1_csv",
    "write_census_csv",
    "write_error_rate_csv",
    "write_scaling_csv",
]

METHODS = ("classical-full", "classical-early-exit", "quantum-model", "quantum-statevector")

LEMMA1_THRESHOLD = 1.0 / 24.0

# substream tags: 0 = instance generation, 1 = solver randomness
_GEN, _RUN = 0, 1


@dataclass(frozen=True)
class Estimate:
    """One-sided Monte-Carlo estimate against a threshold.

    ``stderr`` is the sample standard deviation divided by sqrt(samples).
    For lower-bound tests ``passed`` means mean >= threshold - 3*stderr; for
    upper-bound tests (error rates) it means mean <= threshold + 3*stderr.
    """

    mean: float
    stderr: float
    samples: int
    threshold: float
    passed: bool


@dataclass(frozen=True)
class ScalingPoint:
    """Query statistics of one (heap size, method) cell."""

    n: int
    method: str
    trials: int
    mean_queries: float
    stddev_queries: float


@dataclass(frozen=True)
class CensusRecord:
    """Crucial-bit count of one sampled game."""

    sample_index: int
    crucial_count: int
    total_bits: int
    fraction: float


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return mean, stderr


def _worker_count() -> int:
    raw = os.environ.get("SUBGAME_THREADS", "").strip()
    if raw:
        count = int(raw)
        if count < 0:
            raise ValueError(f"SUBGAME_THREADS must be >= 0, got {count}")
        if count > 0:
            return count
    return os.cpu_count() or 1


def _run_tasks(fn, payloads: list) -> list:
    """Map fn over payloads in order, with processes when workers > 1."""
    workers = _worker_count()
    if workers <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    chunk = max(1, len(payloads) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads, chunksize=chunk))


def _chunk_ranges(total: int, pieces: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(total / pieces))
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


# --- single-bit-flip win-rate estimate -------------------------------------


def _lemma1_chunk(payload) -> list[int]:
    seed, stream_id, n, k, lo, hi = payload
    root = RngSeed(seed, stream_id)
    cfg = LsbConfig(n, k)
    out = []
    for s in range(lo, hi):
        game = sample_lsb(cfg, substream(root, _GEN, s))
        flipped, _ = flip_random_bit(game, substream(root, _RUN, s))
        out.append(solve_classical(flipped).win_bit)
    return out


def estimate_lemma1(n: int, samples: int, k: int, seed: RngSeed) -> Estimate:
    """Probability that flipping one random bit of an LSB game makes it winning.

    Sampled games are losing by construction, so the measured mean is exactly
    the flip-changes-the-outcome rate.  Tested one-sidedly against 1/24.
    """
    if n < 2:
        raise ValueError(f"flip experiment requires n >= 2, got {n}")
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    LsbConfig(n, k)  # fail fast on infeasible configurations
    chunks = _chunk_ranges(samples, _worker_count() * 4)
    payloads = [(seed.seed, seed.stream_id, n, k, lo, hi) for lo, hi in chunks]
    wins = np.array([b for block in _run_tasks(_lemma1_chunk, payloads) for b in block])
    mean, stderr = _mean_stderr(wins)
    return Estimate(
        mean=mean,
        stderr=stderr,
        samples=samples,
        threshold=LEMMA1_THRESHOLD,
        passed=mean >= LEMMA1_THRESHOLD - 3.0 * stderr,
    )


# --- crucial-bit census -----------------------------------------------------


def crucial_bit_census(game: Game, *, incremental: bool = False) -> int:
    """Number of meaningful bits whose flip inverts the game value.

    Each flip is re-solved exactly; with ``incremental`` the re-solve starts
    at the flipped row (positions below it cannot change), which halves the
    work on average and is validated against the from-scratch path in tests.
    The input game is left untouched.
    """
    n = game.n
    if n == 0:
        return 0
    bits = game.bits.copy()
    base = _solve_bits(bits, n)
    reference = int(base[n])
    count = 0
    flat = 0
    for j in range(1, n + 1):
        for _ in range(j):
            bits[flat] ^= 1
            if incremental:
                table = _solve_bits(bits, n, prefix=base[:j])
            else:
                table = _solve_bits(bits, n)
            if int(table[n]) != reference:
                count += 1
            bits[flat] ^= 1
            flat += 1
    return count


def _census_sample(payload) -> tuple[int, int]:
    seed, stream_id, n, k, model, s, incremental = payload
    if model == "zero":
        game = Game.zero(n)
    else:
        game = sample_lsb(LsbConfig(n, k), substream(RngSeed(seed, stream_id), _GEN, s))
    return crucial_bit_census(game, incremental=incremental), triangle_size(n)


def run_census(
    n: int,
    samples: int,
    k: int,
    seed: RngSeed,
    model: str = "lsb",
    *,
    incremental: bool = False,
) -> list[CensusRecord]:
    """Census over sampled games (``model="lsb"``) or the no-move fixture game."""
    if model not in ("lsb", "zero"):
        raise ValueError(f"census model must be 'lsb' or 'zero', got {model!r}")
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    if model == "lsb":
        LsbConfig(n, k)
    payloads = [(seed.seed, seed.stream_id, n, k, model, s, incremental) for s in range(samples)]
    results = _run_tasks(_census_sample, payloads)
    return [
        CensusRecord(
            sample_index=s,
            crucial_count=crucial,
            total_bits=total,
            fraction=crucial / total if total else 0.0,
        )
        for s, (crucial, total) in enumerate(results)
    ]


# --- quantum-solver error rate ----------------------------------------------


def _error_rate_chunk(payload) -> list[int]:
    seed, stream_id, n, k, mode, success_prob, g, r_lo, r_hi = payload
    root = RngSeed(seed, stream_id)
    game = sample_lsb(LsbConfig(n, k), substream(root, _GEN, g))
    truth = solve_classical(game).win_bit
    errors = []
    for r in range(r_lo, r_hi):
        report = solve_quantum(
            game, mode, substream(root, _RUN, g, r), model_success_prob=success_prob
        )
        errors.append(int(report.win_bit != truth))
    return errors


def measure_error_rate(
    n: int,
    game_count: int,
    runs_per_game: int,
    mode: str,
    k: int,
    seed: RngSeed,
    *,
    model_success_prob: float = 0.5,
) -> Estimate:
    """Pooled disagreement rate of the quantum solver with the exact solver.

    Upper-bound test: passes when the pooled rate is at most 2/n + 3*stderr.
    """
    if n < 2:
        raise ValueError(f"error-rate experiment requires n >= 2, got {n}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if game_count < 1 or runs_per_game < 1:
        raise ValueError("need at least one game and one run per game")
    LsbConfig(n, k)
    run_chunks = _chunk_ranges(runs_per_game, max(1, (_worker_count() * 4) // game_count))
    payloads = [
        (seed.seed, seed.stream_id, n, k, mode, model_success_prob, g, lo, hi)
        for g in range(game_count)
        for lo, hi in run_chunks
    ]
    errors = np.array([e for block in _run_tasks(_error_rate_chunk, payloads) for e in block])
    mean, stderr = _mean_stderr(errors)
    threshold = 2.0 / n
    return Estimate(
        mean=mean,
        stderr=stderr,
        samples=int(errors.size),
        threshold=threshold,
        passed=mean <= threshold + 3.0 * stderr,
    )


# --- query scaling ----------------------------------------------------------


def _scaling_task(payload) -> int:
    seed, stream_id, n, k, method, quantum_early_exit, t = payload
    root = RngSeed(seed, stream_id)
    mcode = METHODS.index(method)
    game = sample_lsb(LsbConfig(n, k), substream(root, _GEN, mcode, n, t))
    if method == "classical-full":
        ledger = QueryLedger()
        solve_classical_instrumented(game, ledger, "ascending", early_exit=False)
        return ledger.gamma_queries
    if method == "classical-early-exit":
        ledger = QueryLedger()
        solve_classical_instrumented(game, ledger, "ascending", early_exit=True)
        return ledger.gamma_queries
    mode = "model" if method == "quantum-model" else "statevector"
    report = solve_quantum(
        game, mode, substream(root, _RUN, mcode, n, t), early_exit=quantum_early_exit
    )
    return report.gamma_queries


def run_scaling(
    n_list,
    methods,
    trials: int,
    k: int,
    seed: RngSeed,
    *,
    statevector_cap: int = 512,
    quantum_early_exit: bool = True,
) -> list[ScalingPoint]:
    """Measure charged queries per method over fresh LSB games at each size."""
    n_list = list(n_list)
    if not n_list:
        raise ValueError("n_list must be non-empty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError(f"n_list must be strictly ascending, got {n_list}")
    methods = list(methods)
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if "quantum-statevector" in methods and n_list[-1] > statevector_cap:
        raise ValueError(
            f"statevector runs are capped at n={statevector_cap} to bound runtime; "
            f"got n={n_list[-1]}"
        )
    for n in n_list:
        LsbConfig(n, k)

    points = []
    for method in methods:
        for n in n_list:
            payloads = [
                (seed.seed, seed.stream_id, n, k, method, quantum_early_exit, t)
                for t in range(trials)
            ]
            queries = np.array(_run_tasks(_scaling_task, payloads), dtype=np.float64)
            points.append(
                ScalingPoint(
                    n=n,
                    method=method,
                    trials=trials,
                    mean_queries=float(queries.mean()),
                    stddev_queries=float(queries.std(ddof=1)) if trials > 1 else 0.0,
                )
            )
    return points


def fit_loglog_slope(points) -> float:
    """Ordinary least-squares slope of log(q) against log(n)."""
    pts = [(float(n), float(q)) for n, q in points]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points for a slope fit, got {len(pts)}")
    ns = [n for n, _ in pts]
    if len(set(ns)) != len(ns):
        raise ValueError("points must have distinct n values")
    if any(n <= 0 for n, _ in pts) or any(q <= 0 for _, q in pts):
        raise ValueError("log-log fit requires positive coordinates")
    log_n = np.log([n for n, _ in pts])
    log_q = np.log([q for _, q in pts])
    return float(np.polyfit(log_n, log_q, 1)[0])


# --- CSV output ---------------------------------------------------------------
# All files: exact headers below, comma separators, LF line endings, trailing LF.


def _open_csv(path):
    return open(path, "w", newline="", encoding="ascii")


def write_lemma1_csv(path, n: int, k: int, samples: int, seed: int, est: Estimate) -> None:
    with _open_csv(path) as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["n", "k", "samples", "seed", "mean", "stderr", "threshold", "pass"])
        out.writerow([n, k, samples, seed, est.mean, est.stderr, est.threshold, int(est.passed)])


def write_census_csv(path, n: int, k: int, seed: int, records: list[CensusRecord]) -> None:
    with _open_csv(path) as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["n", "k", "sample_index", "seed", "crucial_count", "total_bits", "fraction"])
        for rec in records:
            out.writerow(
                [n, k, rec.sample_index, seed, rec.crucial_count, rec.total_bits, rec.fraction]
            )


def write_error_rate_csv(
    path, n: int, mode: str, games: int, runs_per_game: int, seed: int, est: Estimate
) -> None:
    with _open_csv(path) as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(
            ["n", "mode", "games", "runs_per_game", "seed", "error_rate", "stderr", "threshold", "pass"]
        )
        out.writerow(
            [n, mode, games, runs_per_game, seed, est.mean, est.stderr, est.threshold, int(est.passed)]
        )


def write_scaling_csv(path, seed: int, points: list[ScalingPoint]) -> None:
    with _open_csv(path) as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["n", "method", "trials", "seed", "mean_queries", "stddev_queries"])
        for pt in points:
            out.writerow([pt.n, pt.method, pt.trials, seed, pt.mean_queries, pt.stddev_queries])
