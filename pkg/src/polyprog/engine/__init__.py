"""Rewriting engine: matching, rule application, normalization, semantics."""

from .rewrite import (
    DEFAULT_FUEL,
    LEFTMOST,
    STRATEGIES,
    STRUCTURE_EAGER,
    FuelExhausted,
    Match,
    RewriteEvent,
    StaleMatch,
    Trace,
    apply_match,
    find_redexes,
    normalize,
)
from .semantics import (
    CompletenessReport,
    OrthogonalityReport,
    Overlap,
    Undefined,
    application,
    check_completeness,
    check_orthogonal,
    evaluate,
    run,
    values_up_to,
)

__all__ = [
    "DEFAULT_FUEL", "LEFTMOST", "STRATEGIES", "STRUCTURE_EAGER", "FuelExhausted", "Match",
    "RewriteEvent", "StaleMatch", "Trace", "apply_match", "find_redexes", "normalize",
    "CompletenessReport", "OrthogonalityReport", "Overlap", "Undefined", "application",
    "check_completeness", "check_orthogonal", "evaluate", "run", "values_up_to",
]
