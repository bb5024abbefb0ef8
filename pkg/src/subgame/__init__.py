"""Solver laboratory for one-heap subtraction games.

Exact dynamic-programming solvers with per-bit query accounting, a simulated
square-root-search solver in two fidelities (idealized coin and full
statevector amplitudes), random-instance samplers including the
losing/sensitive/balanced family, and Monte-Carlo experiment drivers that
measure flip sensitivity, crucial-bit counts, solver error rates, and
query-count scaling.
"""

from .core import (
    BadLengthError,
    Game,
    GameStats,
    MalformedHeaderError,
    NonHexDigitError,
    QueryLedger,
    SubgameFormatError,
    TrailingGarbageError,
    WinTable,
    bit_get,
    bit_get_counted,
    deserialize,
    flat_index,
    is_balanced,
    is_losing,
    is_sensitive,
    row_bounds,
    serialize,
    solve_classical,
    solve_classical_instrumented,
    stats,
    triangle_size,
)
from .experiments import (
    METHODS,
    CensusRecord,
    Estimate,
    ScalingPoint,
    crucial_bit_census,
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
from .quantum import (
    MODES,
    GroverOutcome,
    QuantumRunReport,
    ceil_sqrt,
    grover_is_zero_among,
    grover_search_sim,
    grover_success_probability,
    model_query_cost,
    repetition_count,
    solve_quantum,
)
from .sampling import (
    BitFlip,
    FeasibilityError,
    LsbConfig,
    RngSeed,
    flip_bit,
    flip_random_bit,
    hamming_ball_1,
    sample_iid,
    sample_lsb,
    substream,
)

__version__ = "0.1.0"

__all__ = [
    "Game",
    "WinTable",
    "GameStats",
    "QueryLedger",
    "RngSeed",
    "LsbConfig",
    "BitFlip",
    "GroverOutcome",
    "QuantumRunReport",
    "Estimate",
    "ScalingPoint",
    "CensusRecord",
    "SubgameFormatError",
    "MalformedHeaderError",
    "BadLengthError",
    "NonHexDigitError",
    "TrailingGarbageError",
    "FeasibilityError",
    "MODES",
    "METHODS",
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
    "sample_iid",
    "sample_lsb",
    "flip_random_bit",
    "flip_bit",
    "hamming_ball_1",
    "substream",
    "grover_success_probability",
    "grover_search_sim",
    "grover_is_zero_among",
    "solve_quantum",
    "repetition_count",
    "model_query_cost",
    "ceil_sqrt",
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
    "__version__",
]
