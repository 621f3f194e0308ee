"""Constraint discovery over labeled logs and data-aware enrichment.

Candidates are instantiated from activity sets frequent in the deviant or in
the non-deviant sub-log (Apriori, level-wise with subset pruning); each
candidate must then be non-vacuously satisfied in at least a `theta` fraction
of the traces of its originating sub-log.
"""

from __future__ import annotations

import numpy as np

from devmine.declare import checking as dcheck
from devmine.declare import model as dm
from devmine.features import MAX_CATEGORY_VALUES, FeatureMatrix
from devmine.labeling import split_by_label
from devmine.learners.rules import Hyperparams
from devmine.learners.tree import Leaf, train_tree
from devmine.logmodel import NUMERIC_TAGS, EventLog, LabeledLog

# templates instantiated during discovery; counted ones get default bounds
DEFAULT_COUNTS = {dm.EXISTENCE: 1, dm.ABSENCE: 2}


def frequent_activity_sets(log: EventLog, theta: float, max_size: int = 2) -> dict:
    """Activity sets contained in at least a `theta` fraction of traces,
    keyed by size. Candidate k+1 sets join frequent k-sets and are pruned
    when any k-subset is infrequent."""
    if not 0 < theta <= 1:
        raise ValueError("theta must be in (0, 1]")
    trace_sets = [frozenset(t.activities) for t in log.traces]
    n = len(trace_sets)

    def support(items: frozenset) -> float:
        return sum(1 for s in trace_sets if items <= s) / n

    result = {}
    current = [frozenset([a]) for a in sorted({a for s in trace_sets for a in s})
               if support(frozenset([a])) >= theta]
    size = 1
    while current and size <= max_size:
        result[size] = current
        if size == max_size:
            break
        frequent = set(current)
        seen = set()
        nxt = []
        for i, left in enumerate(current):
            for right in current[i + 1:]:
                candidate = left | right
                if len(candidate) != size + 1 or candidate in seen:
                    continue
                seen.add(candidate)
                if any(candidate - {a} not in frequent for a in candidate):
                    continue  # an infrequent subset rules it out
                if support(candidate) >= theta:
                    nxt.append(candidate)
        current = sorted(nxt, key=lambda s: tuple(sorted(s)))
        size += 1
    return result


def _instantiate(singles, pairs, templates) -> list:
    out = []
    for name in templates:
        if name in dm.UNARY_TEMPLATES:
            count = DEFAULT_COUNTS.get(name)
            for items in singles:
                (a,) = tuple(items)
                out.append(dm.Constraint(dm.Template(name, count), (a,)))
        else:
            for items in pairs:
                a, b = sorted(items)
                out.append(dm.Constraint(dm.Template(name), (a, b)))
                out.append(dm.Constraint(dm.Template(name), (b, a)))
    return out


def _satisfied_fraction(traces, constraint) -> float:
    hits = sum(1 for t in traces if dcheck.check(t, constraint).status == "satisfied")
    return hits / len(traces)


def discover_constraints(labeled: LabeledLog, theta: float = 0.3, templates=None,
                         max_size: int = 2) -> list:
    """Constraints frequent in at least one class sub-log, ordered
    lexicographically by template name then activities."""
    if templates is None:
        templates = dm.ALL_TEMPLATES
    unknown = [t for t in templates if t not in dm.ALL_TEMPLATES]
    if unknown:
        raise ValueError(f"unknown templates: {unknown}")
    deviant, normal = split_by_label(labeled)

    kept = {}
    for sub in (deviant, normal):
        sets = frequent_activity_sets(sub, theta, max_size=max_size)
        singles = sets.get(1, [])
        pairs = sets.get(2, [])
        for constraint in _instantiate(singles, pairs, templates):
            key = constraint.canonical()
            if key in kept:
                continue
            if _satisfied_fraction(sub.traces, constraint) >= theta:
                kept[key] = constraint
    return sorted(kept.values(), key=lambda c: (c.template.name, c.activities))


def _payload_columns(payloads):
    """Column layout for activation payload vectors: numeric attributes as-is,
    categorical ones one-hot (top values only, capped)."""
    numeric_keys = set()
    categorical = {}
    for payload in payloads:
        for key, attr in payload.items():
            if attr.tag in NUMERIC_TAGS:
                numeric_keys.add(key)
            else:
                values = categorical.setdefault(key, {})
                v = attr.value
                values[v] = values.get(v, 0) + 1
    columns = []  # (key, kind, value)
    for key in sorted(numeric_keys):
        columns.append((key, "numeric", None))
    for key in sorted(categorical):
        ranked = sorted(categorical[key].items(), key=lambda kv: (-kv[1], str(kv[0])))
        for value, _ in ranked[:MAX_CATEGORY_VALUES]:
            columns.append((key, "onehot", value))
    return columns


class _PayloadColumn:
    # minimal feature descriptor for the condition tree
    def __init__(self, name, indicator):
        self.name = name
        self.indicator = indicator


def _tree_condition(tree, columns) -> dm.DataCondition | None:
    """Disjunction of the root-to-deviant-leaf conjunctions."""
    clauses = []

    def translate(feature, op, threshold):
        key, kind, value = columns[feature]
        if kind == "numeric":
            return dm.Comparison(key, op if op == "<=" else ">", threshold)
        if op == ">":
            return dm.Comparison(key, "=", value)
        return dm.Comparison(key, "!=", value)

    def walk(node, atoms):
        if isinstance(node, Leaf):
            if node.label == 1:
                clauses.append(tuple(atoms))
            return
        walk(node.left, atoms + [translate(node.feature, "<=", node.threshold)])
        walk(node.right, atoms + [translate(node.feature, ">", node.threshold)])

    walk(tree.root, [])
    if not clauses or not any(clause for clause in clauses):
        return None
    # a deviant leaf at the root would mean an unconditional (empty) clause
    if any(len(clause) == 0 for clause in clauses):
        return None
    return dm.DataCondition(tuple(clauses))


def enrich_with_data(constraint: dm.Constraint, labeled: LabeledLog,
                     max_depth: int = 3, min_leaf: int = 5) -> dm.Constraint:
    """Attach a payload condition separating deviant from non-deviant
    activations: collect fulfilled activations, encode their payloads, fit a
    small tree (Gini, shallow, wide leaves, to keep conditions readable), and
    take the disjunction of the deviant-leaf paths.

    Returns the constraint unchanged when it cannot be enriched: no defined
    activation, already data-aware, single-class activations, or no deviant
    leaf in the fitted tree.
    """
    if constraint.condition is not None or not dcheck.has_activations(constraint.template):
        return constraint
    payloads = []
    labels = []
    for trace, label in zip(labeled.log.traces, labeled.labels):
        for record in dcheck.activations(trace, constraint):
            if record.fulfilled:
                payloads.append(record.payload)
                labels.append(label)
    if not payloads or len(set(labels)) < 2:
        return constraint

    columns = _payload_columns(payloads)
    if not columns:
        return constraint
    values = np.zeros((len(payloads), len(columns)))
    for i, payload in enumerate(payloads):
        for j, (key, kind, value) in enumerate(columns):
            attr = payload.get(key)
            if attr is None:
                continue
            if kind == "numeric":
                values[i, j] = attr.as_float() if attr.is_numeric else 0.0
            else:
                values[i, j] = 1.0 if attr.value == value else 0.0

    matrix = FeatureMatrix(
        values=values,
        labels=np.asarray(labels),
        features=[_PayloadColumn(f"{k}:{v}" if v is not None else k, kind == "onehot")
                  for k, kind, v in columns],
    )
    tree = train_tree(matrix, Hyperparams(max_depth=max_depth, min_leaf=min_leaf))
    condition = _tree_condition(tree, columns)
    if condition is None:
        return constraint
    return dm.Constraint(constraint.template, constraint.activities, condition)
