"""Polygraphic programs: diagram rewriting with explicit structure gates,
interpretations certifying termination and polynomial bounds, and a Turing
machine compiler."""

from .signature import (
    COMPUTATION,
    CONSTRUCTOR,
    FUNCTION,
    STRUCTURE,
    BoundaryMismatch,
    Diagram,
    MalformedDiagram,
    Polygraph,
    ThreeCell,
    TwoCell,
    compose0,
    compose1,
    exchange_normal_form,
    size,
    tensor,
    validate_polygraph,
)

__version__ = "0.1.0"
