"""Declare constraint semantics, checking, and discovery."""

from devmine.declare.model import (  # noqa: F401
    ALL_TEMPLATES,
    BINARY_TEMPLATES,
    UNARY_TEMPLATES,
    ActivationRecord,
    CheckOutcome,
    Comparison,
    Constraint,
    DataCondition,
    Template,
    parse_condition,
    parse_constraint,
)
from devmine.declare.checking import activations, check, eval_condition, has_activations  # noqa: F401
