import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from devmine.logmodel import Event, EventLog, LabeledLog, Trace


def make_trace(activities, tid="t", attributes=None, payloads=None, timestamps=None):
    """Trace from an activity iterable; payloads is an optional per-event list
    of attribute dicts."""
    events = []
    for i, a in enumerate(activities):
        payload = payloads[i] if payloads else {}
        ts = timestamps[i] if timestamps else None
        events.append(Event(activity=a, timestamp=ts, payload=dict(payload)))
    return Trace(id=tid, attributes=dict(attributes or {}), events=tuple(events))


def make_log(*traces):
    return EventLog(traces=tuple(traces))


def make_labeled(activity_lists, labels):
    traces = tuple(make_trace(acts, tid=f"t{i}") for i, acts in enumerate(activity_lists))
    return LabeledLog(log=EventLog(traces=traces), labels=tuple(labels))
