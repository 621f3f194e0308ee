"""Conjunctive rules, ordered rule sets, and their text/JSON forms.

Rule sets are ordered: the first matching rule fires, otherwise the default
class 0 applies. Text form, one line per rule::

    (f1 <= 2000.0) and (f2 > 8.0) => Label=1 (12/1)
     => Label=0 (40/2)

where (p/n) are positives/negatives covered on the rule's evaluation set and
the default line reports (correct/incorrect) among uncovered rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

_OPS = ("<=", ">", "==", "!=")
_DISPLAY = {"<=": "<=", ">": ">", "==": "=", "!=": "!="}


@dataclass(frozen=True)
class AtomicCondition:
    feature: int
    op: str
    threshold: float

    def __post_init__(self):
        if self.op not in _OPS:
            raise ValueError(f"unknown operator {self.op!r}")

    def mask(self, X: np.ndarray) -> np.ndarray:
        col = X[:, self.feature]
        if self.op == "<=":
            return col <= self.threshold
        if self.op == ">":
            return col > self.threshold
        if self.op == "==":
            return col == self.threshold
        return col != self.threshold

    def matches_row(self, row) -> bool:
        v = row[self.feature]
        if self.op == "<=":
            return v <= self.threshold
        if self.op == ">":
            return v > self.threshold
        if self.op == "==":
            return v == self.threshold
        return v != self.threshold

    def render(self, names=None) -> str:
        name = names[self.feature] if names is not None else f"f{self.feature}"
        value = self.threshold
        if self.op in ("==", "!=") and float(value).is_integer():
            value = int(value)
        return f"({name} {_DISPLAY[self.op]} {value})"


def simplify_conditions(conditions) -> tuple:
    """Merge conditions on the same feature and drop subsumed ones.

    For each feature the tightest <= (minimum) and > (maximum) survive;
    == / != literals are deduplicated. Output order follows first appearance
    of each feature.
    """
    order = []
    per = {}
    for c in conditions:
        if c.feature not in per:
            per[c.feature] = {"<=": None, ">": None, "==": [], "!=": []}
            order.append(c.feature)
        slot = per[c.feature]
        if c.op == "<=":
            slot["<="] = c.threshold if slot["<="] is None else min(slot["<="], c.threshold)
        elif c.op == ">":
            slot[">"] = c.threshold if slot[">"] is None else max(slot[">"], c.threshold)
        elif c.threshold not in slot[c.op]:
            slot[c.op].append(c.threshold)
    out = []
    for f in order:
        slot = per[f]
        if slot[">"] is not None:
            out.append(AtomicCondition(f, ">", slot[">"]))
        if slot["<="] is not None:
            out.append(AtomicCondition(f, "<=", slot["<="]))
        for v in slot["=="]:
            out.append(AtomicCondition(f, "==", v))
        for v in slot["!="]:
            out.append(AtomicCondition(f, "!=", v))
    return tuple(out)


@dataclass
class Rule:
    """A conjunction predicting class 1, with coverage stats (p, n) measured
    on its evaluation set."""

    conditions: tuple = ()
    p: int = 0
    n: int = 0

    def mask(self, X: np.ndarray) -> np.ndarray:
        out = np.ones(len(X), dtype=bool)
        for c in self.conditions:
            out &= c.mask(X)
        return out

    def matches_row(self, row) -> bool:
        return all(c.matches_row(row) for c in self.conditions)

    def laplace(self) -> float:
        return (self.p + 1) / (self.p + self.n + 2)

    def __len__(self) -> int:
        return len(self.conditions)


@dataclass
class RuleSet:
    """Ordered class-1 rules plus the implicit default class 0."""

    rules: list = field(default_factory=list)
    default_p: int = 0  # uncovered positives on the evaluation set
    default_n: int = 0  # uncovered negatives

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros(len(X), dtype=int)
        for rule in self.rules:
            out |= rule.mask(X).astype(int)
        return out

    def scores(self, X: np.ndarray) -> np.ndarray:
        """Per-row probability-like score for class 1: Laplace accuracy of the
        first matching rule, or the uncovered-positive Laplace for the default."""
        out = np.full(len(X), (self.default_p + 1) / (self.default_p + self.default_n + 2))
        assigned = np.zeros(len(X), dtype=bool)
        for rule in self.rules:
            hit = rule.mask(X) & ~assigned
            out[hit] = rule.laplace()
            assigned |= hit
        return out

    def set_stats(self, X: np.ndarray, y: np.ndarray) -> None:
        """Recompute first-match (p, n) per rule and the default stats."""
        remaining = np.ones(len(X), dtype=bool)
        for rule in self.rules:
            hit = rule.mask(X) & remaining
            rule.p = int(y[hit].sum())
            rule.n = int(hit.sum() - y[hit].sum())
            remaining &= ~hit
        self.default_p = int(y[remaining].sum())
        self.default_n = int(remaining.sum() - y[remaining].sum())

    def to_text(self, names=None) -> str:
        lines = []
        for rule in self.rules:
            conj = " and ".join(c.render(names) for c in rule.conditions) or "(true)"
            lines.append(f"{conj} => Label=1 ({rule.p}/{rule.n})")
        lines.append(f" => Label=0 ({self.default_n}/{self.default_p})")
        return "\n".join(lines)

    def to_json(self, names=None) -> str:
        doc = {
            "rules": [
                {
                    "conditions": [
                        {
                            "feature": c.feature,
                            "name": names[c.feature] if names is not None else None,
                            "op": c.op,
                            "threshold": c.threshold,
                        }
                        for c in rule.conditions
                    ],
                    "label": 1,
                    "p": rule.p,
                    "n": rule.n,
                }
                for rule in self.rules
            ],
            "default": {"label": 0, "correct": self.default_n, "incorrect": self.default_p},
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RuleSet":
        doc = json.loads(text)
        rules = [
            Rule(
                conditions=tuple(
                    AtomicCondition(c["feature"], c["op"], c["threshold"])
                    for c in r["conditions"]
                ),
                p=r.get("p", 0),
                n=r.get("n", 0),
            )
            for r in doc["rules"]
        ]
        return cls(rules=rules, default_p=doc["default"].get("incorrect", 0),
                   default_n=doc["default"].get("correct", 0))


@dataclass(frozen=True)
class Hyperparams:
    """Knobs for both learners."""

    max_depth: int | None = None
    min_leaf: int = 1
    criterion: str = "gini"  # 'gini' | 'infogain'
    k: int = 2  # RIPPER optimization rounds
    prune_fraction: float = 1 / 3
    seed: int = 0

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be >= 1 or None")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if self.criterion not in ("gini", "infogain"):
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if not 0 < self.prune_fraction < 1:
            raise ValueError("prune_fraction must be in (0, 1)")
