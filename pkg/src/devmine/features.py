"""Feature pipeline: pure data features, Fisher ranking, coverage selection,
and trace-to-vector encoding for all feature families.

Families and their fixed concatenation order in hybrid matrices:
IA, sequential patterns, Declare, data-aware Declare, pure data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from devmine._text import quote
from devmine.errors import ConsistencyError
from devmine.logmodel import BOOLEAN, IDENTIFIER, NUMERIC_TAGS, TEXT, LabeledLog, Trace

FAMILY_IA = "ia"
FAMILY_SEQ = "seq"
FAMILY_DECL = "decl"
FAMILY_DECLD = "decld"
FAMILY_DATA = "data"
FAMILY_ORDER = {FAMILY_IA: 0, FAMILY_SEQ: 1, FAMILY_DECL: 2, FAMILY_DECLD: 3, FAMILY_DATA: 4}

# categorical cardinality cap; excess values fold into OTHER
MAX_CATEGORY_VALUES = 64
OTHER = "…other"

# reserved trace attributes never turned into features (trace identity and the
# ground-truth deviance marker)
RESERVED_TRACE_KEYS = ("concept:name", "label")

_CATEGORICAL_TAGS = (TEXT, IDENTIFIER, BOOLEAN)


@dataclass(frozen=True)
class DataDescriptor:
    """What a pure data feature measures.

    kind: trace | first | last | count | max | min | avg | has | trace_has |
    length | duration. For categorical trace/first/last features `value`
    selects the indicator value; `kept` carries the non-OTHER value set when
    `value` is the OTHER bucket.
    """

    kind: str
    key: str | None = None
    value: object = None
    kept: tuple = ()


@dataclass(frozen=True)
class Feature:
    """One matrix column: family, canonical name, backing payload."""

    family: str
    name: str
    payload: object = None
    indicator: bool = False

    def __post_init__(self):
        if self.family not in FAMILY_ORDER:
            raise ValueError(f"unknown feature family {self.family!r}")


def _display(attr) -> object:
    # categorical display value; bools stay bools so conditions can round-trip
    return attr.value


def _value_token(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return quote(str(value))


def _descriptor_name(d: DataDescriptor) -> str:
    if d.kind == "length":
        return "data:length"
    if d.kind == "duration":
        return "data:duration_ms"
    if d.kind == "has":
        return f"data:has({quote(d.key)})"
    if d.kind == "trace_has":
        return f"data:trace.has({quote(d.key)})"
    if d.kind == "count":
        return f"data:count({quote(d.key)}={_value_token(d.value)})"
    base = f"data:{d.kind}({quote(d.key)})"
    if d.value is None:
        return base
    return f"{base}={_value_token(d.value)}"


def _top_values(counter: dict) -> list:
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], str(kv[0])))
    return [v for v, _ in ranked[:MAX_CATEGORY_VALUES]]


def _data_feature(kind, key=None, value=None, kept=(), indicator=False) -> Feature:
    d = DataDescriptor(kind=kind, key=key, value=value, kept=tuple(kept))
    return Feature(family=FAMILY_DATA, name=_descriptor_name(d), payload=d, indicator=indicator)


def discover_data_features(log) -> list:
    """Data features supported by a log: trace attributes directly, event
    attributes through first/last (any type), count (categorical), and
    max/min/avg (numeric), plus trace length and duration. Numeric attributes
    missing from some trace get a companion presence indicator."""
    trace_numeric = {}
    trace_categorical = {}
    event_numeric = {}
    event_categorical = {}
    for trace in log.traces:
        for key, attr in trace.attributes.items():
            if key in RESERVED_TRACE_KEYS:
                continue
            if attr.tag in NUMERIC_TAGS:
                trace_numeric[key] = trace_numeric.get(key, 0) + 1
            elif attr.tag in _CATEGORICAL_TAGS:
                values = trace_categorical.setdefault(key, {})
                v = _display(attr)
                values[v] = values.get(v, 0) + 1
        for event in trace.events:
            for key, attr in event.payload.items():
                if attr.tag in NUMERIC_TAGS:
                    event_numeric.setdefault(key, set()).add(trace.id)
                elif attr.tag in _CATEGORICAL_TAGS:
                    values = event_categorical.setdefault(key, {})
                    v = _display(attr)
                    values[v] = values.get(v, 0) + 1

    features = []
    n = len(log.traces)
    for key in sorted(trace_numeric):
        features.append(_data_feature("trace", key))
        if trace_numeric[key] < n:
            features.append(_data_feature("trace_has", key, indicator=True))
    for key in sorted(trace_categorical):
        kept = _top_values(trace_categorical[key])
        for v in sorted(kept, key=str):
            features.append(_data_feature("trace", key, value=v, indicator=True))
        if len(trace_categorical[key]) > len(kept):
            features.append(_data_feature("trace", key, value=OTHER, kept=kept, indicator=True))
    for key in sorted(event_numeric):
        for kind in ("first", "last", "max", "min", "avg"):
            features.append(_data_feature(kind, key))
        if len(event_numeric[key]) < n:
            features.append(_data_feature("has", key, indicator=True))
    for key in sorted(event_categorical):
        kept = _top_values(event_categorical[key])
        for v in sorted(kept, key=str):
            features.append(_data_feature("count", key, value=v))
            features.append(_data_feature("first", key, value=v, indicator=True))
            features.append(_data_feature("last", key, value=v, indicator=True))
        if len(event_categorical[key]) > len(kept):
            features.append(_data_feature("count", key, value=OTHER, kept=kept))
            features.append(_data_feature("first", key, value=OTHER, kept=kept, indicator=True))
            features.append(_data_feature("last", key, value=OTHER, kept=kept, indicator=True))
    features.append(_data_feature("length"))
    features.append(_data_feature("duration"))
    return features


def _matches_bucket(value, descriptor: DataDescriptor) -> bool:
    if descriptor.value == OTHER:
        return value not in descriptor.kept
    return value == descriptor.value


def data_feature_value(trace: Trace, feature: Feature) -> float:
    """Row-local value of a pure data feature (missing numerics become 0;
    the companion presence indicators mark absence)."""
    d = feature.payload
    if d.kind == "length":
        return float(len(trace.events))
    if d.kind == "duration":
        stamps = [e.timestamp for e in trace.events if e.timestamp is not None]
        return float(stamps[-1] - stamps[0]) if len(stamps) >= 2 else 0.0
    if d.kind in ("trace", "trace_has"):
        attr = trace.attributes.get(d.key)
        if d.kind == "trace_has":
            return 1.0 if attr is not None else 0.0
        if d.value is None:
            return attr.as_float() if attr is not None and attr.is_numeric else 0.0
        if attr is None or attr.tag not in _CATEGORICAL_TAGS:
            return 0.0
        return 1.0 if _matches_bucket(_display(attr), d) else 0.0

    occurrences = [e.payload[d.key] for e in trace.events if d.key in e.payload]
    if d.kind == "has":
        return 1.0 if occurrences else 0.0
    if d.kind == "count":
        return float(sum(
            1 for attr in occurrences
            if attr.tag in _CATEGORICAL_TAGS and _matches_bucket(_display(attr), d)
        ))
    if d.kind in ("first", "last"):
        if not occurrences:
            return 0.0
        attr = occurrences[0] if d.kind == "first" else occurrences[-1]
        if d.value is None:
            return attr.as_float() if attr.is_numeric else 0.0
        if attr.tag not in _CATEGORICAL_TAGS:
            return 0.0
        return 1.0 if _matches_bucket(_display(attr), d) else 0.0
    numeric = [a.as_float() for a in occurrences if a.is_numeric]
    if not numeric:
        return 0.0
    if d.kind == "max":
        return max(numeric)
    if d.kind == "min":
        return min(numeric)
    if d.kind == "avg":
        return sum(numeric) / len(numeric)
    raise ConsistencyError(f"unknown data descriptor kind {d.kind!r}")


def extract_data_features(labeled: LabeledLog):
    """(features, matrix) of all pure data features over a labeled log."""
    features = discover_data_features(labeled.log)
    columns = np.zeros((len(labeled.log.traces), len(features)))
    for j, feature in enumerate(features):
        for i, trace in enumerate(labeled.log.traces):
            columns[i, j] = data_feature_value(trace, feature)
    return features, columns


def fisher_score(column, labels) -> float:
    """Between-class over within-class scatter with population variances.

    Zero denominator with positive numerator ranks as +inf; the 0/0 case of a
    constant column scores 0.
    """
    column = np.asarray(column, dtype=float)
    labels = np.asarray(labels, dtype=int)
    classes = np.unique(labels)
    if len(classes) < 2:
        raise ValueError("fisher score needs both classes")
    mu = column.mean()
    numerator = 0.0
    denominator = 0.0
    for cls in classes:
        part = column[labels == cls]
        n_i = len(part)
        mu_i = part.mean()
        var_i = part.var()  # population variance
        numerator += n_i * (mu_i - mu) ** 2
        denominator += n_i * var_i
    if denominator == 0.0:
        return float("inf") if numerator > 0.0 else 0.0
    return float(numerator / denominator)


def rank_by_fisher(columns, labels) -> list:
    """Column indices sorted by descending Fisher score (stable on ties)."""
    columns = np.asarray(columns, dtype=float)
    scores = [fisher_score(columns[:, j], labels) for j in range(columns.shape[1])]
    return sorted(range(len(scores)), key=lambda j: (-scores[j], j))


def coverage_select(ranked_features, columns, labels=None, c: int = 5) -> list:
    """Greedy coverage walk down an already-ranked feature list.

    A feature covers a trace when its value there is nonzero. Walking in rank
    order, a feature is selected iff it covers at least one trace whose cover
    count is still below `c`; the walk stops when every trace reached `c` or
    features ran out. Returns selected positions within `ranked_features`.
    """
    del labels  # coverage is label-free; parameter kept for interface symmetry
    if c < 1:
        raise ValueError("coverage threshold must be >= 1")
    columns = np.asarray(columns)
    n_traces = columns.shape[0]
    cover = np.zeros(n_traces, dtype=int)
    selected = []
    for pos in range(len(ranked_features)):
        covers = columns[:, pos] != 0
        if np.any(covers & (cover < c)):
            selected.append(pos)
            cover[covers] += 1
            if np.all(cover >= c):
                break
    return selected


@dataclass
class FeatureMatrix:
    """Dense trace-by-feature matrix with labels and column descriptors."""

    values: np.ndarray
    labels: np.ndarray
    features: list

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.values.shape != (len(self.labels), len(self.features)):
            raise ConsistencyError("matrix shape must be (traces, features)")
        if not np.isfinite(self.values).all():
            raise ConsistencyError("feature matrix contains non-finite values")

    @property
    def names(self) -> list:
        return [f.name for f in self.features]

    def to_csv(self) -> str:
        header = ",".join([quote(n) if "," in n else n for n in self.names] + ["label"])
        lines = [header]
        for row, label in zip(self.values, self.labels):
            lines.append(",".join(f"{v:.10g}" for v in row) + f",{label}")
        return "\n".join(lines) + "\n"


def encode(labeled: LabeledLog, selected_features, supports=None, checks=None) -> FeatureMatrix:
    """Encode every trace against the selected features.

    Sequential/IA columns read the support matrix; Declare columns read the
    per-feature CheckOutcome lists in `checks` (encoded -1 / 0 / n); data
    columns are computed from the trace itself. Families land in the fixed
    order IA, Seq, Decl, DeclD, Data.
    """
    ordered = sorted(
        selected_features,
        key=lambda f: FAMILY_ORDER[f.family],
    )
    n = len(labeled.log.traces)
    values = np.zeros((n, len(ordered)))
    for j, feature in enumerate(ordered):
        if feature.family in (FAMILY_IA, FAMILY_SEQ):
            if supports is None or feature.payload not in supports.patterns:
                raise ConsistencyError(f"no support column for {feature.name}")
            values[:, j] = supports.column(feature.payload)
        elif feature.family in (FAMILY_DECL, FAMILY_DECLD):
            if checks is None or feature not in checks:
                raise ConsistencyError(f"no check outcomes for {feature.name}")
            outcomes = checks[feature]
            if len(outcomes) != n:
                raise ConsistencyError(f"check table for {feature.name} has wrong length")
            values[:, j] = [o.encoded() for o in outcomes]
        elif feature.family == FAMILY_DATA:
            for i, trace in enumerate(labeled.log.traces):
                values[i, j] = data_feature_value(trace, feature)
        else:
            raise ConsistencyError(f"unknown family {feature.family!r}")
    return FeatureMatrix(values=values, labels=np.asarray(labeled.labels), features=ordered)
