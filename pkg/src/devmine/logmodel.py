"""Event-log data model.

Logs are immutable after construction: traces hold tuples of events, event
payloads are plain dicts by convention never mutated after parsing. Event
order within a trace follows document order, which is authoritative even when
timestamps disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Elementary attribute tags (XES: string/int/float/boolean/date/id).
TEXT = "text"
INTEGER = "integer"
REAL = "real"
BOOLEAN = "boolean"
TIMESTAMP = "timestamp"  # milliseconds since epoch, UTC
IDENTIFIER = "identifier"

_TAGS = (TEXT, INTEGER, REAL, BOOLEAN, TIMESTAMP, IDENTIFIER)
NUMERIC_TAGS = (INTEGER, REAL, TIMESTAMP)


@dataclass(frozen=True)
class AttributeValue:
    """A typed attribute payload value."""

    tag: str
    value: object

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown attribute tag {self.tag!r}")
        v = self.value
        ok = {
            TEXT: lambda: isinstance(v, str),
            IDENTIFIER: lambda: isinstance(v, str),
            INTEGER: lambda: isinstance(v, int) and not isinstance(v, bool),
            REAL: lambda: isinstance(v, float) and math.isfinite(v),
            BOOLEAN: lambda: isinstance(v, bool),
            TIMESTAMP: lambda: isinstance(v, int) and not isinstance(v, bool) and v >= 0,
        }[self.tag]()
        if not ok:
            raise ValueError(f"value {v!r} does not match tag {self.tag!r}")

    @property
    def is_numeric(self) -> bool:
        return self.tag in NUMERIC_TAGS

    def as_float(self) -> float:
        if not self.is_numeric:
            raise TypeError(f"attribute of tag {self.tag!r} is not numeric")
        return float(self.value)


def text(v: str) -> AttributeValue:
    return AttributeValue(TEXT, v)


def integer(v: int) -> AttributeValue:
    return AttributeValue(INTEGER, v)


def real(v: float) -> AttributeValue:
    return AttributeValue(REAL, float(v))


def boolean(v: bool) -> AttributeValue:
    return AttributeValue(BOOLEAN, v)


def timestamp(ms: int) -> AttributeValue:
    return AttributeValue(TIMESTAMP, ms)


def identifier(v: str) -> AttributeValue:
    return AttributeValue(IDENTIFIER, v)


@dataclass(frozen=True)
class Event:
    """One observed activity execution with its payload."""

    activity: str
    timestamp: int | None = None
    lifecycle: str | None = None
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.activity:
            raise ValueError("event activity must be non-empty")


@dataclass(frozen=True)
class Trace:
    """One process execution: an ordered event sequence plus trace attributes."""

    id: str
    attributes: dict = field(default_factory=dict)
    events: tuple = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("trace id must be non-empty")
        object.__setattr__(self, "events", tuple(self.events))

    @property
    def activities(self) -> tuple:
        return tuple(e.activity for e in self.events)

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class EventLog:
    """A collection of traces for one process. At least one trace."""

    traces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "traces", tuple(self.traces))
        if not self.traces:
            raise ValueError("an event log needs at least one trace")

    @property
    def alphabet(self) -> frozenset:
        return frozenset(e.activity for t in self.traces for e in t.events)

    def __len__(self) -> int:
        return len(self.traces)


@dataclass(frozen=True)
class LabeledLog:
    """An event log with a per-trace deviance label (1 deviant, 0 normal)."""

    log: EventLog
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        if len(self.labels) != len(self.log.traces):
            raise ValueError("one label per trace required")
        if any(x not in (0, 1) for x in self.labels):
            raise ValueError("labels must be 0 or 1")

    @property
    def deviant_count(self) -> int:
        return sum(self.labels)

    @property
    def normal_count(self) -> int:
        return len(self.labels) - self.deviant_count
