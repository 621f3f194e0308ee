"""Seeded synthetic labeled-log generator with planted signals.

Deviant traces receive each planted signal with probability `class_bias`,
non-deviant traces with `1 - class_bias`; filler activities are drawn from an
alphabet disjoint from every planted activity, so planted signals are the
only systematic class difference. `noise_rate` flips labels after content
generation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from devmine.declare import model as dm
from devmine.errors import ConfigError
from devmine.logmodel import AttributeValue, Event, EventLog, LabeledLog, Trace

# templates a planted adjacent activation->target pair satisfies non-vacuously
_PLANTABLE = (
    dm.RESPONDED_EXISTENCE, dm.RESPONSE, dm.ALTERNATE_RESPONSE, dm.CHAIN_RESPONSE,
    dm.PRECEDENCE, dm.ALTERNATE_PRECEDENCE, dm.CHAIN_PRECEDENCE,
    dm.CO_EXISTENCE, dm.SUCCESSION, dm.ALTERNATE_SUCCESSION, dm.CHAIN_SUCCESSION,
)
_ACTIVATES_ON_SECOND = (dm.PRECEDENCE, dm.ALTERNATE_PRECEDENCE, dm.CHAIN_PRECEDENCE)

_BASE_MS = 1_700_000_000_000
_TRACE_STEP_MS = 3_600_000
_EVENT_STEP_MS = 60_000


@dataclass(frozen=True)
class PlantedSignal:
    """One planted class signal.

    kind 'mr': insert `body` once; 'tr': insert `body` `repeats` times
    consecutively; 'declare': insert an adjacent activation->target pair of
    `constraint` (misses plant a lone activation or nothing); 'payload': set
    attribute `key` to `deviant_value` / `normal_value` (trace scope, or on
    one random event).
    """

    kind: str
    body: tuple = ()
    repeats: int = 2
    constraint: dm.Constraint | None = None
    key: str | None = None
    deviant_value: AttributeValue | None = None
    normal_value: AttributeValue | None = None
    scope: str = "trace"
    class_bias: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))
        if self.kind not in ("mr", "tr", "declare", "payload"):
            raise ConfigError(f"unknown planted kind {self.kind!r}")
        if not 0.0 <= self.class_bias <= 1.0:
            raise ConfigError("class_bias must be in [0, 1]")
        if self.kind in ("mr", "tr") and not self.body:
            raise ConfigError(f"planted {self.kind} needs a body")
        if self.kind == "tr" and self.repeats < 2:
            raise ConfigError("planted tandem repeats need repeats >= 2")
        if self.kind == "declare":
            c = self.constraint
            if c is None or c.template.name not in _PLANTABLE:
                raise ConfigError("planted constraint must be a positive relation template")
        if self.kind == "payload":
            if not self.key or self.deviant_value is None or self.normal_value is None:
                raise ConfigError("planted payload needs key, deviant_value, normal_value")
            if self.scope not in ("trace", "event"):
                raise ConfigError("payload scope must be 'trace' or 'event'")

    def activities(self) -> tuple:
        if self.kind in ("mr", "tr"):
            return self.body
        if self.kind == "declare":
            return self.constraint.activities
        return ()


@dataclass(frozen=True)
class SynthSpec:
    trace_count: int
    length_range: tuple = (8, 14)
    alphabet_size: int = 10
    planted: tuple = ()
    noise_rate: float = 0.0
    deviant_fraction: float = 0.5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "planted", tuple(self.planted))
        object.__setattr__(self, "length_range", tuple(self.length_range))
        if self.trace_count < 2:
            raise ConfigError("need at least two traces")
        lo, hi = self.length_range
        if lo < 1 or hi < lo:
            raise ConfigError("length_range must satisfy 1 <= lo <= hi")
        if self.alphabet_size < 1:
            raise ConfigError("alphabet_size must be >= 1")
        if not 0.0 <= self.noise_rate < 1.0:
            raise ConfigError("noise_rate must be in [0, 1)")
        if not 0.0 < self.deviant_fraction < 1.0:
            raise ConfigError("deviant_fraction must be in (0, 1)")


def _filler_alphabet(spec: SynthSpec) -> list:
    reserved = {a for signal in spec.planted for a in signal.activities()}
    out = []
    i = 0
    while len(out) < spec.alphabet_size:
        name = f"f{i:02d}"
        if name not in reserved:
            out.append(name)
        i += 1
    return out


def generate(spec: SynthSpec) -> LabeledLog:
    """Deterministic labeled log for the given spec and seed.

    Every trace draws from its own derived generator, so changing one knob
    (e.g. the noise rate) never shifts the random stream of other traces.
    """
    fillers = _filler_alphabet(spec)
    traces = []
    labels = []
    for t in range(spec.trace_count):
        rng = random.Random(f"{spec.seed}:{t}")
        deviant = rng.random() < spec.deviant_fraction
        length = rng.randint(*spec.length_range)
        base_acts = [rng.choice(fillers) for _ in range(length)]
        attributes = {}
        event_payload_plants = []  # (key, value) to put on one random event
        # planted blocks occupy slots between filler positions, so a later
        # block can sit next to an earlier one but never split it
        slots = {}
        for signal in spec.planted:
            hit = rng.random() < (signal.class_bias if deviant else 1.0 - signal.class_bias)
            if signal.kind in ("mr", "tr"):
                if hit:
                    block = list(signal.body) * (signal.repeats if signal.kind == "tr" else 1)
                    slots.setdefault(rng.randint(0, length), []).append(block)
            elif signal.kind == "declare":
                a, b = signal.constraint.activities
                if hit:
                    slots.setdefault(rng.randint(0, length), []).append([a, b])
                elif rng.random() < 0.5:
                    # plant a dangling activation: a violation, not vacuity
                    lone = b if signal.constraint.template.name in _ACTIVATES_ON_SECOND else a
                    slots.setdefault(rng.randint(0, length), []).append([lone])
            else:  # payload
                value = signal.deviant_value if hit else signal.normal_value
                if signal.scope == "trace":
                    attributes[signal.key] = value
                else:
                    event_payload_plants.append((signal.key, value))
        activities = []
        for pos in range(length + 1):
            for block in slots.get(pos, []):
                activities.extend(block)
            if pos < length:
                activities.append(base_acts[pos])

        base = _BASE_MS + t * _TRACE_STEP_MS
        events = []
        for i, activity in enumerate(activities):
            events.append(Event(activity=activity, timestamp=base + i * _EVENT_STEP_MS,
                                lifecycle="complete"))
        for key, value in event_payload_plants:
            at = rng.randrange(len(events))
            e = events[at]
            payload = dict(e.payload)
            payload[key] = value
            events[at] = Event(activity=e.activity, timestamp=e.timestamp,
                               lifecycle=e.lifecycle, payload=payload)

        label = 1 if deviant else 0
        if spec.noise_rate and rng.random() < spec.noise_rate:
            label = 1 - label
        traces.append(Trace(id=f"t{t:04d}", attributes=attributes, events=tuple(events)))
        labels.append(label)

    if len(set(labels)) < 2:  # pathological seed/bias combination
        labels[-1] = 1 - labels[-1]
    return LabeledLog(log=EventLog(traces=tuple(traces)), labels=tuple(labels))
