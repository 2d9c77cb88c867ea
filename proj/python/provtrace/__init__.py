"""Edge-embedded provenance recovery with path-aware OMP (Python bindings)."""

from ._provtrace import (
    ALGORITHMS,
    DomainError,
    brute_force_path_oracle,
    column_to_edge,
    complexity_estimate,
    complexity_grid,
    edge_to_column,
    embed_provenance,
    generate_signatures,
    is_path,
    missing_link_check,
    recover,
    run_trials,
    sample_path,
)

__all__ = [
    "ALGORITHMS",
    "DomainError",
    "brute_force_path_oracle",
    "column_to_edge",
    "complexity_estimate",
    "complexity_grid",
    "edge_to_column",
    "embed_provenance",
    "generate_signatures",
    "is_path",
    "missing_link_check",
    "recover",
    "run_trials",
    "sample_path",
]
