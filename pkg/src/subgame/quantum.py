"""Grover-style solving of subtraction games, simulated two ways.

``solve_quantum`` runs the square-root search solver: positions are evaluated
bottom-up and, for each position j, a one-sided randomized subroutine asks
whether some legal move out of j reaches a position already known to lose.
The subroutine is repeated max(1, ceil(2*log2 n)) times so a per-position
false negative has probability at most 1/n^2.

Two implementations of the subroutine are provided:

* ``model``: an idealized coin.  Ground truth is inspected directly (not
  charged); the ledger is charged ceil(sqrt(j)) + 1 queries; the answer is 1
  with probability exactly 1/2 when a witness exists and always 0 otherwise.
* ``statevector``: a genuine amplitude simulation of Grover search driven by
  the Boyer-Brassard-Hoyer-Tapp schedule for an unknown number of marked
  items.  Every simulated oracle application and every verification costs one
  ledger query.

Both are one-sided: they never answer 1 when no witness exists.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Game, QueryLedger, WinTable, row_bounds
from .seeding import as_generator

__all__ = [
    "GroverOutcome",
    "QuantumRunReport",
    "MODES",
    "grover_success_probability",
    "grover_search_sim",
    "grover_is_zero_among",
    "solve_quantum",
    "repetition_count",
    "model_query_cost",
    "ceil_sqrt",
]

MODES = ("model", "statevector")

# BBHT schedule: iteration bound grows by 6/5 per failed round, capped at
# sqrt(M); a whole invocation stops once it has spent more than 9*sqrt(M)
# oracle calls.
_BBHT_GROWTH = 6.0 / 5.0
_BBHT_BUDGET_FACTOR = 9.0


@dataclass(slots=True)
class GroverOutcome:
    """Result of one simulated Grover run.

    ``found`` is the measured index when its verification oracle call
    succeeded, else None; ``oracle_calls`` is k iterations plus the one
    verification call.
    """

    found: "int | None"
    oracle_calls: int
    verified: bool


@dataclass(slots=True)
class QuantumRunReport:
    """Outcome of one full quantum-solver run."""

    win_bit: int
    w: WinTable
    gamma_queries: int
    repetitions: int
    mode: str


def repetition_count(n: int) -> int:
    """Repetitions of the search subroutine per position: max(1, ceil(2*log2 n))."""
    if n < 1:
        raise ValueError(f"heap size must be >= 1, got {n}")
    return max(1, math.ceil(2.0 * math.log2(n)))


def ceil_sqrt(m: int) -> int:
    """ceil(sqrt(m)) in exact integer arithmetic."""
    if m < 0:
        raise ValueError("ceil_sqrt of a negative number")
    return math.isqrt(m - 1) + 1 if m else 0


def model_query_cost(n: int) -> int:
    """Charged queries of a model-mode run that never exits a repetition loop early."""
    return repetition_count(n) * sum(ceil_sqrt(j) + 1 for j in range(1, n + 1))


def _padded_size(m: int) -> int:
    """Smallest power of two >= m (the simulated state-space size)."""
    return 1 << (m - 1).bit_length()


def grover_success_probability(m: int, t: int, k: int) -> float:
    """Closed-form probability that k Grover iterations measure a marked item.

    sin^2((2k+1) * arcsin(sqrt(t/m))) over a domain of m states with t marked;
    0 when nothing is marked, 1 when everything is.
    """
    if m < 1:
        raise ValueError(f"domain size must be >= 1, got {m}")
    if not 0 <= t <= m:
        raise ValueError(f"marked count must lie in 0..{m}, got {t}")
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    if t == 0:
        return 0.0
    if t == m:
        return 1.0
    return math.sin((2 * k + 1) * math.asin(math.sqrt(t / m))) ** 2


def grover_search_sim(oracle, m: int, k: int, seed) -> GroverOutcome:
    """One Grover run at a fixed iteration count, simulated exactly.

    ``oracle`` is a predicate over ``0..m-1`` (a callable, or a bool/bit array
    of length >= m).  The state space is padded to ``M = 2**ceil(log2 m)``;
    padding indices are never marked and fail verification.  The state starts
    uniform, each iteration phase-flips the marked amplitudes and inverts
    about the mean, and one index is sampled from the exact final
    distribution, then re-checked with one more oracle call; ``oracle_calls``
    is always k + 1.
    """
    if m < 1:
        raise ValueError(f"domain size must be >= 1, got {m}")
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    rng = as_generator(seed)

    if isinstance(oracle, np.ndarray):
        marked = np.flatnonzero(oracle[:m])
        is_marked = lambda idx: bool(oracle[idx])  # noqa: E731
    else:
        marked = np.array([i for i in range(m) if oracle(i)], dtype=np.intp)
        is_marked = lambda idx: bool(oracle(idx))  # noqa: E731

    size = _padded_size(m)
    state = np.full(size, 1.0 / math.sqrt(size))
    if marked.size:  # with nothing marked both steps are exactly the identity
        for _ in range(k):
            state[marked] = -state[marked]
            mean = state.mean()
            np.subtract(2.0 * mean, state, out=state)

    probs = state * state
    cum = np.cumsum(probs)
    measured = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    if measured >= size:  # guard against rounding at the top edge
        measured = size - 1

    verified = measured < m and is_marked(measured)
    return GroverOutcome(
        found=measured if verified else None,
        oracle_calls=k + 1,
        verified=verified,
    )


def grover_is_zero_among(
    game: Game,
    w_prefix,
    j: int,
    mode: str,
    seed,
    ledger: QueryLedger,
    *,
    model_success_prob: float = 0.5,
) -> int:
    """One-sided check for a move out of position j into a known-losing position.

    The search predicate over ``i in 0..j-1`` is "the move (j, i) is legal and
    ``w_prefix[i] == 0``".  Returns 1 only if a witness exists (never a false
    positive); when one exists, returns 1 with probability exactly 1/2 in
    model mode and at least 1/2 in statevector mode.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if not 1 <= j <= game.n:
        raise ValueError(f"row {j} out of range for n={game.n}")
    prefix = np.asarray(w_prefix, dtype=np.uint8)
    if prefix.shape != (j,):
        raise ValueError(f"w_prefix must hold exactly {j} bits, got shape {prefix.shape}")
    rng = as_generator(seed)
    start, stop = row_bounds(j)
    row = game.bits[start:stop]

    if mode == "model":
        ledger.charge(ceil_sqrt(j) + 1)
        has_witness = bool(np.count_nonzero(row > prefix))  # direct inspection, not charged
        if has_witness and rng.random() < model_success_prob:
            return 1
        return 0

    mask = row > prefix  # each oracle evaluation of this predicate reads one game bit
    size = _padded_size(j)
    budget = _BBHT_BUDGET_FACTOR * math.sqrt(size)
    cap = math.sqrt(size)
    g = 1.0
    spent = 0
    while True:
        k = int(rng.integers(math.ceil(g)))
        outcome = grover_search_sim(mask, j, k, rng)
        ledger.charge(outcome.oracle_calls)
        spent += outcome.oracle_calls
        if outcome.verified:
            return 1
        g = min(g * _BBHT_GROWTH, cap)
        if spent > budget:
            return 0


def solve_quantum(
    game: Game,
    mode: str,
    seed,
    *,
    early_exit: bool = True,
    model_success_prob: float = 0.5,
) -> QuantumRunReport:
    """Full square-root search solve of a game.

    Evaluates positions 1..n in order; each position's bit starts at 0 and is
    set to 1 as soon as one of the max(1, ceil(2*log2 n)) subroutine
    repetitions finds a move into a known-losing position.  With
    ``early_exit`` the repetition loop stops once the bit is set (identical
    output, lower cost); without it every repetition runs, giving the exact
    closed-form model cost :func:`model_query_cost`.

    Per position the error is one-sided: the computed bit can be wrongly 0
    (given the computed prefix), never wrongly 1.
    """
    if game.n < 1:
        raise ValueError(f"quantum solver requires n >= 1, got n={game.n}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    rng = as_generator(seed)
    ledger = QueryLedger()
    n = game.n
    reps = repetition_count(n)
    w = np.zeros(n + 1, dtype=np.uint8)
    for j in range(1, n + 1):
        for _ in range(reps):
            if grover_is_zero_among(
                game, w[:j], j, mode, rng, ledger, model_success_prob=model_success_prob
            ):
                w[j] = 1
                if early_exit:
                    break
    return QuantumRunReport(
        win_bit=int(w[n]),
        w=WinTable(w),
        gamma_queries=ledger.gamma_queries,
        repetitions=reps,
        mode=mode,
    )
