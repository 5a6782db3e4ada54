"""Current and heat interpretations, their checks, and certificates."""

from .certify import Certificate, RuleVerdicts, certify
from .checks import (
    COUNTEREXAMPLE,
    CURRENT,
    DEFAULT_BOUND,
    HEAT,
    MAXHEAT,
    PROVED,
    STRUCTURE_HEAT,
    VERIFIED,
    Verdict,
    check_additive,
    check_cartesian,
    check_compatible,
    check_monotone,
    compare_diagrams,
)
from .domains import POSITIVE, DomainViolation, FiniteSet, Progression, parse_domain
from .dsl import InterpSyntaxError, load_interp, parse_interp
from .interpretation import (
    MAX,
    SUM,
    DifferentialInterp,
    FunctorialInterp,
    Interpretation,
    MissingEntry,
    current_of_value,
    derived_max,
    eval_current,
    eval_heat,
    size_interpretation,
    structure_heat,
    symbolic_current,
    symbolic_heat,
)

__all__ = [
    "Certificate", "RuleVerdicts", "certify", "COUNTEREXAMPLE", "CURRENT", "DEFAULT_BOUND", "HEAT",
    "MAXHEAT", "PROVED", "STRUCTURE_HEAT", "VERIFIED", "Verdict", "check_additive", "check_cartesian",
    "check_compatible", "check_monotone", "compare_diagrams", "POSITIVE", "DomainViolation",
    "FiniteSet", "Progression", "parse_domain", "InterpSyntaxError", "load_interp", "parse_interp",
    "MAX", "SUM", "DifferentialInterp", "FunctorialInterp", "Interpretation", "MissingEntry",
    "current_of_value", "derived_max", "eval_current", "eval_heat", "size_interpretation",
    "structure_heat", "symbolic_current", "symbolic_heat",
]
