"""Random game instances: i.i.d. bits, the losing/sensitive/balanced family,
and single-bit perturbations.

The LSB sampler builds games that are simultaneously losing (the starting
position loses), sensitive (every position has at most one move into a losing
position), and k-balanced (winning and losing position counts differ by at
most k).  It is a constructive sampler, not an exact-uniform one: labels are
drawn first, then every winning position gets exactly one move into a random
earlier losing position, and moves into winning positions are filled in as
fair coin flips.  The drawn labels are the exact solution of the returned
game by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .core import Game, flat_index, triangle_size
from .seeding import RngSeed, as_generator, substream

__all__ = [
    "RngSeed",
    "substream",
    "LsbConfig",
    "BitFlip",
    "FeasibilityError",
    "sample_iid",
    "sample_lsb",
    "flip_random_bit",
    "flip_bit",
    "hamming_ball_1",
]


class FeasibilityError(ValueError):
    """No game can satisfy the requested configuration."""


@dataclass(frozen=True)
class LsbConfig:
    """Target shape of a losing/sensitive/balanced sample.

    ``win_count`` may be an exact count, an inclusive ``(lo, hi)`` interval,
    or ``None`` for the widest interval the balance slack ``k`` allows,
    ``ceil(n/2 - k/2) .. floor(n/2 + k/2)``.  Position ``n`` is always losing,
    so the interval is additionally clamped to ``0 .. n-1``.
    """

    n: int
    k: int = 0
    win_count: "int | tuple[int, int] | None" = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"heap size must be >= 1, got {self.n}")
        if self.k < 0:
            raise ValueError(f"balance slack must be non-negative, got {self.k}")
        self.win_count_interval()

    def win_count_interval(self) -> tuple[int, int]:
        """Validated inclusive interval the winning-position count is drawn from.

        The k-balance interval, intersected with any user-given target and
        with ``0 .. n-1``; every drawable count keeps the game k-balanced.
        """
        n, k = self.n, self.k
        lo, hi = -((k - n) // 2), (n + k) // 2  # ceil((n-k)/2), floor((n+k)/2)
        if isinstance(self.win_count, tuple):
            lo, hi = max(lo, self.win_count[0]), min(hi, self.win_count[1])
        elif self.win_count is not None:
            wc = int(self.win_count)
            lo, hi = max(lo, wc), min(hi, wc)
        lo, hi = max(lo, 0), min(hi, n - 1)
        if lo > hi:
            raise FeasibilityError(
                f"no feasible winning-position count for n={n}, k={k}, "
                f"win_count={self.win_count!r} (position n must lose)"
            )
        return lo, hi


@dataclass(frozen=True)
class BitFlip:
    """Record of a single-bit perturbation; the result differs only at (j, i)."""

    j: int
    i: int
    old_value: int
    new_value: int


def sample_iid(n: int, p: float, seed) -> Game:
    """Game whose meaningful bits are independent Bernoulli(p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"bit probability must lie in [0, 1], got {p}")
    rng = as_generator(seed)
    bits = (rng.random(triangle_size(n)) < p).view(np.uint8)
    return Game(n, bits)


def sample_lsb(config: LsbConfig, seed) -> Game:
    """Draw one losing/sensitive/balanced game.

    Construction: (a) label positions 1..n-1 win/lose with a uniformly drawn
    win count from the allowed interval (position n loses); (b) each winning
    position gets one move into a uniformly chosen earlier losing position
    (position 0 counts as losing); (c) every move into a winning position is
    an independent fair coin; (d) all other move bits are zero.  The drawn
    labels equal ``solve_classical`` of the result.
    """
    rng = as_generator(seed)
    n = config.n
    lo, hi = config.win_count_interval()
    win_count = int(rng.integers(lo, hi + 1))

    # labels[j] == 1 iff position j is winning; 0 and n are always losing
    labels = np.zeros(n + 1, dtype=np.uint8)
    if win_count:
        labels[rng.permutation(n - 1)[:win_count] + 1] = 1

    # (c): coin-flip bits everywhere, then keep only winning-target columns
    bits = rng.integers(0, 2, size=triangle_size(n), dtype=np.uint8)
    if n > 1:
        col_is_win = np.concatenate([labels[:j] for j in range(1, n + 1)])
        bits &= col_is_win
    else:
        bits[:] = 0

    # (b): the unique winning move of every winning position
    win_rows = np.flatnonzero(labels[1:]) + 1
    if win_rows.size:
        lose_pos = np.flatnonzero(labels[:n] == 0)  # ascending, includes 0
        n_choices = np.searchsorted(lose_pos, win_rows)  # losing positions below j
        picks = (rng.random(win_rows.size) * n_choices).astype(np.int64)
        targets = lose_pos[picks]
        bits[win_rows * (win_rows - 1) // 2 + targets] = 1

    return Game(n, bits)


def flip_random_bit(game: Game, seed) -> tuple[Game, BitFlip]:
    """Flip one uniformly chosen meaningful bit; returns the new game and the flip."""
    total = triangle_size(game.n)
    if total == 0:
        raise ValueError("game has no meaningful bits to flip (n=0)")
    rng = as_generator(seed)
    flat = int(rng.integers(total))
    j = (isqrt(8 * flat + 1) + 1) // 2
    i = flat - j * (j - 1) // 2
    return _flip_flat(game, flat, j, i)


def flip_bit(game: Game, j: int, i: int) -> tuple[Game, BitFlip]:
    """Flip the specific meaningful bit (j, i)."""
    if not (0 <= i < j <= game.n):
        raise IndexError(f"bit index (j={j}, i={i}) out of range for n={game.n}")
    return _flip_flat(game, flat_index(j, i), j, i)


def _flip_flat(game: Game, flat: int, j: int, i: int) -> tuple[Game, BitFlip]:
    bits = game.bits.copy()
    old = int(bits[flat])
    bits[flat] = 1 - old
    return Game(game.n, bits), BitFlip(j=j, i=i, old_value=old, new_value=1 - old)


def hamming_ball_1(game: Game) -> list[Game]:
    """The game itself followed by all single-bit-flip neighbors, flat-index order.

    Holds (n(n+1)/2 + 1) games in memory; intended for small instances.
    """
    out = [game]
    for j in range(1, game.n + 1):
        for i in range(j):
            out.append(_flip_flat(game, flat_index(j, i), j, i)[0])
    return out
