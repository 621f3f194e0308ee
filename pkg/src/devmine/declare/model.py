"""Declare constraint model: templates, data conditions, constraints, and
their canonical text form.

The canonical form round-trips losslessly, e.g.::

    Response(a,b)
    Existence(2,a)
    Response(a,b | resource = "D" and g > 1 or g <= 0)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from devmine._text import quote, split_args, unquote

EXISTENCE = "Existence"
ABSENCE = "Absence"
INIT = "Init"
END = "End"
RESPONDED_EXISTENCE = "RespondedExistence"
RESPONSE = "Response"
ALTERNATE_RESPONSE = "AlternateResponse"
CHAIN_RESPONSE = "ChainResponse"
PRECEDENCE = "Precedence"
ALTERNATE_PRECEDENCE = "AlternatePrecedence"
CHAIN_PRECEDENCE = "ChainPrecedence"
CO_EXISTENCE = "CoExistence"
SUCCESSION = "Succession"
ALTERNATE_SUCCESSION = "AlternateSuccession"
CHAIN_SUCCESSION = "ChainSuccession"
NOT_CO_EXISTENCE = "NotCoExistence"
NOT_SUCCESSION = "NotSuccession"
NOT_CHAIN_SUCCESSION = "NotChainSuccession"

UNARY_TEMPLATES = (EXISTENCE, ABSENCE, INIT, END)
COUNTED_TEMPLATES = (EXISTENCE, ABSENCE)
BINARY_TEMPLATES = (
    RESPONDED_EXISTENCE,
    RESPONSE,
    ALTERNATE_RESPONSE,
    CHAIN_RESPONSE,
    PRECEDENCE,
    ALTERNATE_PRECEDENCE,
    CHAIN_PRECEDENCE,
    CO_EXISTENCE,
    SUCCESSION,
    ALTERNATE_SUCCESSION,
    CHAIN_SUCCESSION,
    NOT_CO_EXISTENCE,
    NOT_SUCCESSION,
    NOT_CHAIN_SUCCESSION,
)
ALL_TEMPLATES = UNARY_TEMPLATES + BINARY_TEMPLATES


@dataclass(frozen=True)
class Template:
    """One of the 18 template rows. `count` is n for Existence (occurs at
    least n times) and m+1 for Absence (occurs at most m times)."""

    name: str
    count: int | None = None

    def __post_init__(self):
        if self.name not in ALL_TEMPLATES:
            raise ValueError(f"unknown template {self.name!r}")
        if self.name in COUNTED_TEMPLATES:
            if self.count is None or self.count < 1:
                raise ValueError(f"{self.name} needs a count >= 1")
        elif self.count is not None:
            raise ValueError(f"{self.name} takes no count")

    @property
    def arity(self) -> int:
        return 1 if self.name in UNARY_TEMPLATES else 2


# Comparison operators usable inside data conditions.
CONDITION_OPS = ("=", "!=", "<=", ">")


@dataclass(frozen=True)
class Comparison:
    """An atomic payload comparison. A missing attribute evaluates to false."""

    key: str
    op: str
    value: object

    def __post_init__(self):
        if self.op not in CONDITION_OPS:
            raise ValueError(f"unknown operator {self.op!r}")

    def render(self) -> str:
        if isinstance(self.value, bool):
            lit = "true" if self.value else "false"
        elif isinstance(self.value, str):
            lit = '"' + self.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
        else:
            lit = repr(self.value)
        return f"{self.key} {self.op} {lit}"


@dataclass(frozen=True)
class DataCondition:
    """Disjunction of conjunctions of atomic comparisons."""

    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        if not clauses or any(not c for c in clauses):
            raise ValueError("condition clauses must be non-empty")
        object.__setattr__(self, "clauses", clauses)

    def render(self) -> str:
        return " or ".join(" and ".join(c.render() for c in clause) for clause in self.clauses)


@dataclass(frozen=True)
class Constraint:
    """A template instantiated on activities, optionally data-aware."""

    template: Template
    activities: tuple
    condition: DataCondition | None = None

    def __post_init__(self):
        activities = tuple(self.activities)
        if len(activities) != self.template.arity:
            raise ValueError(
                f"{self.template.name} takes {self.template.arity} activities, got {len(activities)}"
            )
        if any(not a for a in activities):
            raise ValueError("activities must be non-empty")
        object.__setattr__(self, "activities", activities)

    def base(self) -> "Constraint":
        """The data-agnostic version of this constraint."""
        return Constraint(self.template, self.activities) if self.condition else self

    def canonical(self) -> str:
        args = [quote(a) for a in self.activities]
        if self.template.count is not None:
            args.insert(0, str(self.template.count))
        inner = ",".join(args)
        if self.condition is None:
            return f"{self.template.name}({inner})"
        return f"{self.template.name}({inner} | {self.condition.render()})"


_NUM = re.compile(r"^-?\d+(\.\d+)?$")


def _parse_literal(text: str):
    text = text.strip()
    if text.startswith('"'):
        return unquote(text)
    if text == "true":
        return True
    if text == "false":
        return False
    if _NUM.match(text):
        return float(text) if "." in text else int(text)
    raise ValueError(f"cannot parse literal {text!r}")


def parse_condition(text: str) -> DataCondition:
    clauses = []
    for clause_text in re.split(r"\s+or\s+", text.strip()):
        atoms = []
        for atom_text in re.split(r"\s+and\s+", clause_text.strip()):
            m = re.match(r"^(.*?)\s*(!=|<=|>|=)\s*(.*)$", atom_text.strip())
            if not m:
                raise ValueError(f"cannot parse comparison {atom_text!r}")
            key, op, lit = m.group(1).strip(), m.group(2), m.group(3)
            atoms.append(Comparison(unquote(key), op, _parse_literal(lit)))
        clauses.append(tuple(atoms))
    return DataCondition(tuple(clauses))


def parse_constraint(text: str) -> Constraint:
    """Parse the canonical text form back into a Constraint."""
    m = re.match(r"^\s*([A-Za-z]+)\s*\((.*)\)\s*$", text, re.DOTALL)
    if not m:
        raise ValueError(f"cannot parse constraint {text!r}")
    name, inner = m.group(1), m.group(2)
    if name not in ALL_TEMPLATES:
        raise ValueError(f"unknown template {name!r}")
    condition = None
    pipe_parts = split_args(inner, sep="|")
    if len(pipe_parts) == 2:
        args_text, cond_text = pipe_parts
        condition = parse_condition(cond_text)
    elif len(pipe_parts) == 1:
        args_text = inner
    else:
        raise ValueError(f"cannot parse constraint {text!r}")
    args = [unquote(a) for a in split_args(args_text)]
    count = None
    if name in COUNTED_TEMPLATES:
        if len(args) == 2 and _NUM.match(args[0]):
            count = int(args[0])
            args = args[1:]
        else:
            count = 1
    activities = tuple(args)
    return Constraint(Template(name, count), activities, condition)


@dataclass(frozen=True)
class CheckOutcome:
    """Result of checking one constraint on one trace."""

    status: str  # 'violated' | 'vacuous' | 'satisfied'
    activations: int = 0

    def __post_init__(self):
        if self.status not in ("violated", "vacuous", "satisfied"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "satisfied" and self.activations < 1:
            raise ValueError("a satisfied outcome needs >= 1 activation")
        if self.status != "satisfied" and self.activations != 0:
            raise ValueError("only satisfied outcomes carry activation counts")

    def encoded(self) -> int:
        """Map to the declarative encoding values: -1, 0, or n."""
        if self.status == "violated":
            return -1
        if self.status == "vacuous":
            return 0
        return self.activations


def violated() -> CheckOutcome:
    return CheckOutcome("violated")


def vacuous() -> CheckOutcome:
    return CheckOutcome("vacuous")


def satisfied(n: int) -> CheckOutcome:
    return CheckOutcome("satisfied", n)


@dataclass(frozen=True)
class ActivationRecord:
    """One activation event with its fulfilled/violated verdict."""

    event_index: int
    payload: dict
    fulfilled: bool
