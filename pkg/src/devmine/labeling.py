"""Trace labeling into deviant (1) / non-deviant (0) classes.

Four labeling families are supported: a non-vacuous conjunction of Declare
constraints, a contiguous activity subsequence, a per-activity occurrence
threshold (the "in any order, with interleaving" reading), and a trace or
event attribute equality.
"""

from __future__ import annotations

from dataclasses import dataclass

from devmine.declare import checking as dcheck
from devmine.declare.model import Constraint
from devmine.errors import DegenerateLabelingError
from devmine.logmodel import AttributeValue, EventLog, LabeledLog, Trace


@dataclass(frozen=True)
class DeclLabeling:
    """Deviant iff every constraint is satisfied with >= 1 activation."""

    constraints: tuple

    def __post_init__(self):
        constraints = tuple(self.constraints)
        if not constraints:
            raise ValueError("at least one constraint required")
        if any(not isinstance(c, Constraint) for c in constraints):
            raise TypeError("DeclLabeling takes Constraint instances")
        object.__setattr__(self, "constraints", constraints)


@dataclass(frozen=True)
class SubsequenceLabeling:
    """Deviant iff the activity list occurs contiguously at least once."""

    activities: tuple

    def __post_init__(self):
        activities = tuple(self.activities)
        if not activities:
            raise ValueError("at least one activity required")
        object.__setattr__(self, "activities", activities)


@dataclass(frozen=True)
class InterleavedLabeling:
    """Deviant iff every listed activity occurs at least `times` times."""

    activities: frozenset
    times: int = 2

    def __post_init__(self):
        object.__setattr__(self, "activities", frozenset(self.activities))
        if not self.activities:
            raise ValueError("at least one activity required")
        if self.times < 1:
            raise ValueError("times must be >= 1")


@dataclass(frozen=True)
class AttributeLabeling:
    """Deviant iff a trace attribute equals `value`, or (event scope) some
    event payload key equals it."""

    scope: str  # 'trace' | 'event'
    key: str
    value: AttributeValue

    def __post_init__(self):
        if self.scope not in ("trace", "event"):
            raise ValueError("scope must be 'trace' or 'event'")
        if not self.key:
            raise ValueError("key must be non-empty")


def _attr_equal(a: AttributeValue | None, b: AttributeValue) -> bool:
    if a is None:
        return False
    if a.is_numeric and b.is_numeric:
        return a.as_float() == b.as_float()
    return a.tag == b.tag and a.value == b.value


def _contains_contiguous(trace: Trace, needle) -> bool:
    acts = trace.activities
    m = len(needle)
    return any(acts[i:i + m] == needle for i in range(len(acts) - m + 1))


def _label_trace(trace: Trace, spec) -> int:
    if isinstance(spec, DeclLabeling):
        for constraint in spec.constraints:
            outcome = dcheck.check(trace, constraint)
            if outcome.status != "satisfied" or outcome.activations < 1:
                return 0
        return 1
    if isinstance(spec, SubsequenceLabeling):
        return 1 if _contains_contiguous(trace, tuple(spec.activities)) else 0
    if isinstance(spec, InterleavedLabeling):
        acts = trace.activities
        return 1 if all(acts.count(a) >= spec.times for a in spec.activities) else 0
    if isinstance(spec, AttributeLabeling):
        if spec.scope == "trace":
            return 1 if _attr_equal(trace.attributes.get(spec.key), spec.value) else 0
        return 1 if any(_attr_equal(e.payload.get(spec.key), spec.value) for e in trace.events) else 0
    raise TypeError(f"unknown labeling spec {type(spec).__name__}")


def label_log(log: EventLog, spec) -> LabeledLog:
    """Label every trace. Raises DegenerateLabelingError when the result
    contains a single class."""
    labels = tuple(_label_trace(t, spec) for t in log.traces)
    if len(set(labels)) < 2:
        only = "deviant" if labels and labels[0] == 1 else "non-deviant"
        raise DegenerateLabelingError(
            f"labeling produced a single class (every trace {only}); nothing to discriminate"
        )
    return LabeledLog(log=log, labels=labels)


def split_by_label(labeled: LabeledLog):
    """Partition into (deviant, normal) sub-logs, preserving order."""
    deviant = [t for t, y in zip(labeled.log.traces, labeled.labels) if y == 1]
    normal = [t for t, y in zip(labeled.log.traces, labeled.labels) if y == 0]
    if not deviant or not normal:
        raise DegenerateLabelingError("both classes must be non-empty")
    return EventLog(traces=tuple(deviant)), EventLog(traces=tuple(normal))
