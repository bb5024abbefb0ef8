"""Reproducible random streams.

Every randomized operation in this package takes a seed argument that may be
an :class:`RngSeed`, a ``numpy.random.Generator``, or a plain int.  The
``RngSeed`` form is the canonical configuration object: identical
``(seed, stream_id)`` pairs always yield identical streams, and distinct
``stream_id`` values yield streams that are independent for all practical
purposes (they feed distinct ``SeedSequence`` entropy).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RngSeed", "substream", "as_generator"]

_MAX_SEED = 2**64


@dataclass(frozen=True)
class RngSeed:
    """Root seed plus a stream id for per-task derivation."""

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < _MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream_id < 0:
            raise ValueError(f"stream_id must be non-negative, got {self.stream_id}")

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence((self.seed, self.stream_id)))


def substream(seed: RngSeed, *key: int) -> np.random.Generator:
    """Generator for a derived stream, keyed by a tuple of loop indices.

    Used by the experiment drivers so that sample ``i`` of an experiment gets
    the same stream no matter how many workers execute it or in what order.
    """
    return np.random.default_rng(np.random.SeedSequence((seed.seed, seed.stream_id, *key)))


def as_generator(seed: "RngSeed | np.random.Generator | int") -> np.random.Generator:
    """Coerce any accepted seed form into a ``numpy.random.Generator``."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, RngSeed):
        return seed.generator()
    if isinstance(seed, (int, np.integer)):
        return RngSeed(int(seed)).generator()
    raise TypeError(f"expected RngSeed, numpy Generator, or int, got {type(seed).__name__}")
