"""Subtraction games: representation, exact solvers, and game predicates.

A subtraction game on an initial heap of ``n`` stones is fully described by a
lower-triangular bit matrix: ``game[j, i] == 1`` means a player facing ``j``
stones may remove ``j - i`` of them, leaving ``i``.  Only the n(n+1)/2 entries
with ``0 <= i < j <= n`` are meaningful; they are stored flat, row-major
(row j=1 first, ``i`` ascending within a row).

A position is winning when some legal move leads to a losing position; a
player with no legal move loses.  ``solve_classical`` evaluates that
recurrence bottom-up; ``solve_classical_instrumented`` does the same while
counting every matrix-bit read through a :class:`QueryLedger`, the cost unit
used by all benchmarking in this package.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .seeding import as_generator

__all__ = [
    "Game",
    "WinTable",
    "GameStats",
    "QueryLedger",
    "SubgameFormatError",
    "MalformedHeaderError",
    "BadLengthError",
    "NonHexDigitError",
    "TrailingGarbageError",
    "triangle_size",
    "flat_index",
    "row_bounds",
    "bit_get",
    "bit_get_counted",
    "solve_classical",
    "solve_classical_instrumented",
    "is_balanced",
    "is_sensitive",
    "is_losing",
    "stats",
    "serialize",
    "deserialize",
]

SCAN_ORDERS = ("ascending", "descending", "seeded-random")

_HEADER = "SUBGAME/1"
_N_LINE = re.compile(r"^n=(0|[1-9][0-9]*)$")
_HEX_LINE = re.compile(r"^[0-9A-F]*$")


def triangle_size(n: int) -> int:
    """Number of meaningful move bits for heap size ``n``."""
    return n * (n + 1) // 2


def flat_index(j: int, i: int) -> int:
    """Flat position of move bit (j, i); inverse of the row-major layout."""
    return j * (j - 1) // 2 + i


def row_bounds(j: int) -> tuple[int, int]:
    """Half-open flat-index range [start, stop) covering row ``j``."""
    start = j * (j - 1) // 2
    return start, start + j


class Game:
    """Immutable subtraction game: heap size ``n`` plus the flat move bits."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits) -> None:
        if n < 0:
            raise ValueError(f"heap size must be non-negative, got {n}")
        arr = np.ascontiguousarray(bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.shape[0] != triangle_size(n):
            raise ValueError(
                f"expected {triangle_size(n)} move bits for n={n}, got shape {arr.shape}"
            )
        if arr.size and arr.max() > 1:
            raise ValueError("move bits must be 0 or 1")
        arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", arr)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Game is immutable")

    @classmethod
    def zero(cls, n: int) -> "Game":
        """Game with no legal moves at all."""
        return cls(n, np.zeros(triangle_size(n), dtype=np.uint8))

    @classmethod
    def full(cls, n: int) -> "Game":
        """Game where every move is legal (all-ones lower triangle)."""
        return cls(n, np.ones(triangle_size(n), dtype=np.uint8))

    @classmethod
    def from_subtraction_set(cls, n: int, amounts) -> "Game":
        """Classic subtraction game: removing ``d`` stones is legal iff ``d`` in ``amounts``."""
        allowed = {int(d) for d in amounts}
        if any(d < 1 for d in allowed):
            raise ValueError("subtraction amounts must be positive")
        bits = np.zeros(triangle_size(n), dtype=np.uint8)
        for j in range(1, n + 1):
            start, _ = row_bounds(j)
            for d in allowed:
                if 1 <= d <= j:
                    bits[start + (j - d)] = 1
        return cls(n, bits)

    def row(self, j: int) -> np.ndarray:
        """Read-only view of row ``j`` (bits for moves out of position ``j``)."""
        if not 1 <= j <= self.n:
            raise IndexError(f"row {j} out of range for n={self.n}")
        start, stop = row_bounds(j)
        return self.bits[start:stop]

    def bit(self, j: int, i: int) -> int:
        return bit_get(self, j, i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Game(n={self.n})"


class WinTable:
    """Win/lose bit per position: ``w[j] == 1`` iff ``j`` stones is a winning position."""

    __slots__ = ("w",)

    def __init__(self, w) -> None:
        arr = np.ascontiguousarray(w, dtype=np.uint8)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("win table must be a non-empty 1-d bit sequence")
        if arr.max() > 1:
            raise ValueError("win table entries must be 0 or 1")
        if arr[0] != 0:
            raise ValueError("position 0 has no moves and must be losing")
        arr.setflags(write=False)
        object.__setattr__(self, "w", arr)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("WinTable is immutable")

    @property
    def n(self) -> int:
        return self.w.size - 1

    @property
    def win_bit(self) -> int:
        """Value of the full game (the initial position)."""
        return int(self.w[-1])

    def __len__(self) -> int:
        return self.w.size

    def __getitem__(self, j: int) -> int:
        return int(self.w[j])

    def __eq__(self, other) -> bool:
        if not isinstance(other, WinTable):
            return NotImplemented
        return np.array_equal(self.w, other.w)

    __hash__ = None

    def __repr__(self) -> str:
        if self.w.size <= 24:
            return f"WinTable({self.w.tolist()})"
        return f"WinTable(n={self.n}, wins={int(self.w.sum(dtype=np.int64))})"


@dataclass
class GameStats:
    """Out-degrees per position (j = 1..n) and the total move count."""

    degrees: np.ndarray
    edge_count: int


class QueryLedger:
    """Counter of move-matrix bit reads; single-owner, one per running solver."""

    __slots__ = ("gamma_queries",)

    def __init__(self) -> None:
        self.gamma_queries = 0

    def charge(self, count: int = 1) -> None:
        if count < 0:
            raise ValueError("cannot charge a negative query count")
        self.gamma_queries += count

    def __repr__(self) -> str:
        return f"QueryLedger(gamma_queries={self.gamma_queries})"


def bit_get(game: Game, j: int, i: int) -> int:
    """Raw read of move bit (j, i); touches no ledger."""
    if not (0 <= i < j <= game.n):
        raise IndexError(f"bit index (j={j}, i={i}) out of range for n={game.n}")
    return int(game.bits[flat_index(j, i)])


def bit_get_counted(game: Game, ledger: QueryLedger, j: int, i: int) -> int:
    """Oracle read of move bit (j, i): charges the ledger exactly 1 per call.

    Repeated reads of the same bit each cost 1; there is no caching at the
    oracle layer.
    """
    value = bit_get(game, j, i)
    ledger.charge(1)
    return value


def _solve_bits(bits: np.ndarray, n: int, prefix: "np.ndarray | None" = None) -> np.ndarray:
    """Bottom-up solve on a raw flat bit array; shared by solver and census.

    With ``prefix`` (a correct win table for positions 0..len(prefix)-1) the
    evaluation resumes after it, which is valid because a position's value
    only depends on earlier positions.
    """
    w = np.zeros(n + 1, dtype=np.uint8)
    first = 1
    if prefix is not None:
        w[: prefix.size] = prefix
        first = prefix.size
    start = first * (first - 1) // 2
    for j in range(first, n + 1):
        # "legal move into a loser" == bit 1 over table 0; > avoids a second temp
        if np.count_nonzero(bits[start : start + j] > w[:j]):
            w[j] = 1
        start += j
    return w


def solve_classical(game: Game) -> WinTable:
    """Exact bottom-up evaluation: position j wins iff some move reaches a loser."""
    return WinTable(_solve_bits(game.bits, game.n))


def solve_classical_instrumented(
    game: Game,
    ledger: QueryLedger,
    scan_order: str = "ascending",
    seed=None,
    *,
    early_exit: bool = True,
) -> WinTable:
    """Exact solve that charges one query per bit examined.

    Each row is scanned bit by bit in ``scan_order``; with ``early_exit`` the
    scan stops at the first move into a known losing position (deciding
    ``w[j] = 1``), otherwise every bit of every row is read exactly once and
    the total is always n(n+1)/2.  The returned table is identical to
    :func:`solve_classical` for every game and order.
    """
    if scan_order not in SCAN_ORDERS:
        raise ValueError(f"scan_order must be one of {SCAN_ORDERS}, got {scan_order!r}")
    rng = None
    if scan_order == "seeded-random":
        if seed is None:
            raise ValueError("seeded-random scan order requires a seed")
        rng = as_generator(seed)

    n = game.n
    w = np.zeros(n + 1, dtype=np.uint8)
    bits = game.bits
    total = 0
    start = 0
    for j in range(1, n + 1):
        hits = bits[start : start + j] > w[:j]
        if scan_order == "descending":
            hits = hits[::-1]
        elif rng is not None:
            hits = hits[rng.permutation(j)]
        if not early_exit:
            total += j
            if hits.any():
                w[j] = 1
        elif hits.any():
            # position (in scan order) of the first winning probe, inclusive
            total += int(np.argmax(hits)) + 1
            w[j] = 1
        else:
            total += j
        start += j
    ledger.charge(total)
    return WinTable(w)


def is_balanced(game: Game, table: WinTable, k: int) -> bool:
    """Whether winning and losing position counts differ by at most ``k``.

    Evaluated in exact integer arithmetic (|n - 2*wins| <= k) so half-integer
    midpoints never hit floating-point tolerances.
    """
    if k < 0:
        raise ValueError(f"balance slack must be non-negative, got {k}")
    n = game.n
    wins = int(table.w[1:].sum(dtype=np.int64))
    return abs(n - 2 * wins) <= k


def is_sensitive(game: Game, table: WinTable) -> bool:
    """Whether every position has at most one move into a losing position."""
    w = table.w
    bits = game.bits
    start = 0
    for j in range(1, game.n + 1):
        if np.count_nonzero(bits[start : start + j] > w[:j]) > 1:
            return False
        start += j
    return True


def is_losing(table: WinTable) -> bool:
    """Whether the game as a whole is lost for the player to move."""
    return table.win_bit == 0


def stats(game: Game) -> GameStats:
    """Exact out-degrees and move count."""
    n = game.n
    if n == 0:
        return GameStats(degrees=np.zeros(0, dtype=np.int64), edge_count=0)
    bits64 = game.bits.astype(np.int64)
    row_starts = np.array([row_bounds(j)[0] for j in range(1, n + 1)], dtype=np.intp)
    degrees = np.add.reduceat(bits64, row_starts)
    return GameStats(degrees=degrees, edge_count=int(degrees.sum()))


class SubgameFormatError(ValueError):
    """Malformed SUBGAME/1 text."""


class MalformedHeaderError(SubgameFormatError):
    """Header line, n= line, or bits= line does not match the format."""


class BadLengthError(SubgameFormatError):
    """Hex payload length inconsistent with the declared heap size."""


class NonHexDigitError(SubgameFormatError):
    """Payload contains characters outside 0-9A-F."""


class TrailingGarbageError(SubgameFormatError):
    """Content after the payload, including set padding bits."""


def serialize(game: Game) -> str:
    """Render a game in the SUBGAME/1 text format.

    Three LF-terminated lines: the literal header, ``n=<decimal>``, and
    ``bits=<hex>`` where the flat bit string is zero-padded to a byte
    boundary and rendered MSB-first as uppercase hex.
    """
    payload = np.packbits(game.bits).tobytes().hex().upper() if game.n else ""
    return f"{_HEADER}\nn={game.n}\nbits={payload}\n"


def deserialize(text: str) -> Game:
    """Parse SUBGAME/1 text; strict inverse of :func:`serialize`.

    Only the canonical form round-trips, so lowercase hex and non-canonical
    integers are rejected rather than normalized.
    """
    lines = text.split("\n")
    if len(lines) < 3:
        raise MalformedHeaderError("expected three lines: header, n=, bits=")
    if lines[0] != _HEADER:
        raise MalformedHeaderError(f"first line must be {_HEADER!r}, got {lines[0]!r}")
    m = _N_LINE.match(lines[1])
    if m is None:
        raise MalformedHeaderError(f"second line must be 'n=<decimal>', got {lines[1]!r}")
    n = int(m.group(1))
    if not lines[2].startswith("bits="):
        raise MalformedHeaderError(f"third line must start with 'bits=', got {lines[2]!r}")
    extra = [ln for ln in lines[3:] if ln != ""]
    if extra or len(lines) > 4:
        raise TrailingGarbageError(f"unexpected content after bits line: {lines[3:]!r}")

    payload = lines[2][len("bits=") :]
    if not _HEX_LINE.match(payload):
        raise NonHexDigitError(f"payload contains non-hex characters: {payload!r}")
    nbits = triangle_size(n)
    expected = 2 * ((nbits + 7) // 8)
    if len(payload) != expected:
        raise BadLengthError(
            f"expected {expected} hex digits for n={n}, got {len(payload)}"
        )
    if nbits == 0:
        return Game(n, np.zeros(0, dtype=np.uint8))
    raw = np.frombuffer(bytes.fromhex(payload), dtype=np.uint8)
    unpacked = np.unpackbits(raw)
    if unpacked[nbits:].any():
        raise TrailingGarbageError("padding bits beyond the move matrix must be zero")
    return Game(n, unpacked[:nbits])
