"""XES parsing and serialization.

Covers the flat XES subset used throughout: string/date/int/float/boolean/id
attributes on traces and events. Nested ``list``/``container`` attributes are
flattened with dotted keys; anything else is counted and skipped. Traces whose
events lack ``concept:name`` are dropped and recorded in the diagnostics.
"""

from __future__ import annotations

import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone

from devmine import logmodel as lm
from devmine.errors import XesParseError

_TYPE_BY_XES = {
    "string": lm.TEXT,
    "int": lm.INTEGER,
    "float": lm.REAL,
    "boolean": lm.BOOLEAN,
    "date": lm.TIMESTAMP,
    "id": lm.IDENTIFIER,
}
_XES_BY_TYPE = {v: k for k, v in _TYPE_BY_XES.items()}
_NESTED = ("list", "container")


@dataclass
class XesDiagnostics:
    """Non-fatal findings collected while parsing."""

    dropped_traces: list = field(default_factory=list)
    skipped_attributes: int = 0
    warnings: list = field(default_factory=list)


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _parse_timestamp_ms(raw: str) -> int:
    text = raw.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return round(dt.timestamp() * 1000)


def _parse_value(kind: str, raw: str) -> lm.AttributeValue:
    tag = _TYPE_BY_XES[kind]
    if tag == lm.TEXT or tag == lm.IDENTIFIER:
        return lm.AttributeValue(tag, raw)
    if tag == lm.INTEGER:
        return lm.integer(int(raw))
    if tag == lm.REAL:
        return lm.real(float(raw))
    if tag == lm.BOOLEAN:
        return lm.boolean(raw.strip().lower() == "true")
    return lm.timestamp(_parse_timestamp_ms(raw))


def _collect_attributes(element, diagnostics: XesDiagnostics, prefix: str = "") -> dict:
    out = {}
    for child in element:
        kind = _local(child.tag)
        if kind == "event":
            continue
        key = child.get("key")
        if key is None:
            diagnostics.skipped_attributes += 1
            continue
        key = prefix + key
        if kind in _TYPE_BY_XES:
            raw = child.get("value", "")
            try:
                out[key] = _parse_value(kind, raw)
            except (ValueError, KeyError):
                diagnostics.skipped_attributes += 1
                diagnostics.warnings.append(f"unparsable {kind} attribute {key!r}={raw!r}")
        elif kind in _NESTED:
            out.update(_collect_attributes(child, diagnostics, prefix=key + "."))
        elif kind == "values":
            # XES list wrapper element
            out.update(_collect_attributes(child, diagnostics, prefix=prefix))
        else:
            diagnostics.skipped_attributes += 1
    return out


def _build_event(elem, diagnostics: XesDiagnostics) -> lm.Event | None:
    attrs = _collect_attributes(elem, diagnostics)
    name = attrs.pop("concept:name", None)
    if name is None or not isinstance(name.value, str) or not name.value:
        return None
    ts_attr = attrs.pop("time:timestamp", None)
    ts = ts_attr.value if ts_attr is not None and ts_attr.tag == lm.TIMESTAMP else None
    life_attr = attrs.pop("lifecycle:transition", None)
    life = life_attr.value if life_attr is not None and isinstance(life_attr.value, str) else None
    return lm.Event(activity=name.value, timestamp=ts, lifecycle=life, payload=attrs)


def parse_xes(source, diagnostics: XesDiagnostics | None = None) -> lm.EventLog:
    """Parse an XES document (bytes, str, path or file object) into an EventLog.

    Traces appear in document order; ``concept:name`` maps to trace ids and
    event activities. Pass a :class:`XesDiagnostics` to collect dropped-trace
    and skipped-attribute information.
    """
    diagnostics = diagnostics if diagnostics is not None else XesDiagnostics()
    if isinstance(source, bytes):
        stream = io.BytesIO(source)
    elif isinstance(source, str) and source.lstrip().startswith("<"):
        stream = io.StringIO(source)
    elif hasattr(source, "read"):
        stream = source
    else:
        stream = open(source, "rb")
    try:
        root = ET.parse(stream).getroot()
    except ET.ParseError as exc:
        line, column = exc.position if exc.position else (None, None)
        raise XesParseError(f"malformed XES document: {exc.msg if hasattr(exc, 'msg') else exc}",
                            line=line, column=column) from exc
    finally:
        if stream is not source and hasattr(stream, "close"):
            stream.close()

    if _local(root.tag) != "log":
        raise XesParseError(f"expected a <log> root element, found <{_local(root.tag)}>")

    traces = []
    for idx, trace_elem in enumerate(e for e in root if _local(e.tag) == "trace"):
        trace_attrs = _collect_attributes(trace_elem, diagnostics)
        name = trace_attrs.pop("concept:name", None)
        trace_id = name.value if name is not None and isinstance(name.value, str) and name.value else f"trace_{idx}"
        events = []
        ok = True
        for event_elem in (e for e in trace_elem if _local(e.tag) == "event"):
            event = _build_event(event_elem, diagnostics)
            if event is None:
                ok = False
                break
            events.append(event)
        if not ok:
            diagnostics.dropped_traces.append(trace_id)
            continue
        traces.append(lm.Trace(id=trace_id, attributes=trace_attrs, events=tuple(events)))

    if not traces:
        raise XesParseError("document contains no usable traces")
    return lm.EventLog(traces=tuple(traces))


def _format_timestamp(ms: int) -> str:
    dt = datetime.fromtimestamp(ms / 1000.0, tz=timezone.utc)
    return dt.isoformat(timespec="milliseconds").replace("+00:00", "+00:00")


def _format_value(attr: lm.AttributeValue) -> str:
    if attr.tag == lm.TIMESTAMP:
        return _format_timestamp(attr.value)
    if attr.tag == lm.BOOLEAN:
        return "true" if attr.value else "false"
    if attr.tag == lm.REAL:
        return repr(attr.value)
    return str(attr.value)


def _escape(value: str) -> str:
    return (
        value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


def _attr_lines(attrs: dict, pad: str, out: list) -> None:
    for key in attrs:
        attr = attrs[key]
        out.append(
            f'{pad}<{_XES_BY_TYPE[attr.tag]} key="{_escape(key)}" value="{_escape(_format_value(attr))}"/>'
        )


def write_xes(log) -> str:
    """Serialize an EventLog or LabeledLog to an XES string.

    For a LabeledLog the per-trace class is written as the reserved integer
    trace attribute ``label``. Output is deterministic for identical input.
    """
    labels = None
    if isinstance(log, lm.LabeledLog):
        labels = log.labels
        log = log.log
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    out.append('<log xes.version="1.0" xmlns="http://www.xes-standard.org/">')
    for i, trace in enumerate(log.traces):
        out.append("  <trace>")
        out.append(f'    <string key="concept:name" value="{_escape(trace.id)}"/>')
        if labels is not None:
            out.append(f'    <int key="label" value="{labels[i]}"/>')
        _attr_lines(trace.attributes, "    ", out)
        for event in trace.events:
            out.append("    <event>")
            out.append(f'      <string key="concept:name" value="{_escape(event.activity)}"/>')
            if event.timestamp is not None:
                out.append(
                    f'      <date key="time:timestamp" value="{_format_timestamp(event.timestamp)}"/>'
                )
            if event.lifecycle is not None:
                out.append(
                    f'      <string key="lifecycle:transition" value="{_escape(event.lifecycle)}"/>'
                )
            _attr_lines(event.payload, "      ", out)
            out.append("    </event>")
        out.append("  </trace>")
    out.append("</log>")
    out.append("")
    return "\n".join(out)
