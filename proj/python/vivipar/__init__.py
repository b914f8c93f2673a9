"""Portfolio CDCL SAT solver with learned-clause minimization strategies."""

from ._vivipar import (
    ConfigError,
    Formula,
    ParseError,
    TooLarge,
    brute_force,
    csv_columns,
    default_num_workers,
    gen_random_3sat,
    implied,
    parse_dimacs,
    parse_dimacs_file,
    phase_transition_clauses,
    pigeonhole,
    solve,
    verify_model,
)

MODES = ("none", "pcm", "lpcm", "ecm")

__all__ = [
    "MODES",
    "ConfigError",
    "Formula",
    "ParseError",
    "TooLarge",
    "brute_force",
    "csv_columns",
    "default_num_workers",
    "gen_random_3sat",
    "implied",
    "parse_dimacs",
    "parse_dimacs_file",
    "phase_transition_clauses",
    "pigeonhole",
    "solve",
    "verify_model",
]
