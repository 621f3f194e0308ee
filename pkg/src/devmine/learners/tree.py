"""From-scratch binary classification tree with rule extraction.

Splits are axis-aligned (value <= threshold goes left), thresholds are
midpoints between consecutive distinct sorted values, and the best split by
Gini impurity or information gain is taken greedily. While a node is impure
and depth / minimum-leaf-size limits allow, the node is split even when the
impurity decrease is zero: parity problems need the follow-up splits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from devmine.learners.rules import AtomicCondition, Rule, RuleSet, simplify_conditions


@dataclass
class Leaf:
    n0: int
    n1: int

    @property
    def label(self) -> int:
        return 1 if self.n1 > self.n0 else 0

    @property
    def score(self) -> float:
        total = self.n0 + self.n1
        return self.n1 / total if total else 0.0


@dataclass
class Split:
    feature: int
    threshold: float
    left: object
    right: object


@dataclass
class DecisionTree:
    root: object
    n_features: int

    def _leaf_for(self, row):
        node = self.root
        while isinstance(node, Split):
            node = node.left if row[node.feature] <= node.threshold else node.right
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.array([self._leaf_for(row).label for row in X], dtype=int)

    def scores(self, X: np.ndarray) -> np.ndarray:
        return np.array([self._leaf_for(row).score for row in X])

    def depth(self) -> int:
        def d(node):
            if isinstance(node, Leaf):
                return 0
            return 1 + max(d(node.left), d(node.right))

        return d(self.root)

    def n_leaves(self) -> int:
        def c(node):
            if isinstance(node, Leaf):
                return 1
            return c(node.left) + c(node.right)

        return c(self.root)


def _node_impurities(left_pos, left_n, pos, total, criterion):
    """Weighted child impurity for every candidate boundary (vectorized)."""
    right_n = total - left_n
    right_pos = pos - left_pos
    if criterion == "gini":
        def gini(p, n):
            with np.errstate(invalid="ignore", divide="ignore"):
                f = p / n
            f = np.where(n > 0, f, 0.0)
            return 1.0 - f ** 2 - (1.0 - f) ** 2

        return (left_n * gini(left_pos, left_n) + right_n * gini(right_pos, right_n)) / total

    def entropy(p, n):
        with np.errstate(invalid="ignore", divide="ignore"):
            f = p / n
        f = np.where(n > 0, f, 0.0)
        out = np.zeros_like(f)
        for q in (f, 1.0 - f):
            term = np.where(q > 0, q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
            out -= term
        return out

    return (left_n * entropy(left_pos, left_n) + right_n * entropy(right_pos, right_n)) / total


def _best_split(X, y, rows, min_leaf, criterion):
    total = len(rows)
    pos = int(y[rows].sum())
    best = None  # (impurity, feature, threshold)
    for j in range(X.shape[1]):
        col = X[rows, j]
        order = np.argsort(col, kind="stable")
        sv = col[order]
        sy = y[rows][order]
        boundaries = np.nonzero(sv[:-1] < sv[1:])[0]
        if boundaries.size == 0:
            continue
        left_n = boundaries + 1
        valid = (left_n >= min_leaf) & (total - left_n >= min_leaf)
        if not valid.any():
            continue
        boundaries = boundaries[valid]
        left_n = left_n[valid]
        left_pos = np.cumsum(sy)[boundaries]
        imp = _node_impurities(left_pos, left_n, pos, total, criterion)
        k = int(np.argmin(imp))  # first minimum = lowest threshold
        if best is None or imp[k] < best[0]:
            thr = (sv[boundaries[k]] + sv[boundaries[k] + 1]) / 2.0
            best = (float(imp[k]), j, float(thr))
    return best


def _grow(X, y, rows, depth, hyper):
    n1 = int(y[rows].sum())
    n0 = len(rows) - n1
    if n0 == 0 or n1 == 0:
        return Leaf(n0, n1)
    if hyper.max_depth is not None and depth >= hyper.max_depth:
        return Leaf(n0, n1)
    found = _best_split(X, y, rows, hyper.min_leaf, hyper.criterion)
    if found is None:
        return Leaf(n0, n1)
    _, feature, threshold = found
    go_left = X[rows, feature] <= threshold
    left = _grow(X, y, rows[go_left], depth + 1, hyper)
    right = _grow(X, y, rows[~go_left], depth + 1, hyper)
    return Split(feature, threshold, left, right)


def train_tree(matrix, hyper) -> DecisionTree:
    """Train on a FeatureMatrix (or any object with .values / .labels)."""
    X = np.asarray(matrix.values, dtype=float)
    y = np.asarray(matrix.labels, dtype=int)
    if X.size == 0 or len(X) == 0:
        raise ValueError("cannot train on an empty matrix")
    if len(set(y.tolist())) < 2:
        raise ValueError("training data must contain both classes")
    root = _grow(X, y, np.arange(len(X)), 0, hyper)
    return DecisionTree(root=root, n_features=X.shape[1])


def _indicator_flags(features, n_features):
    if features is None:
        return [False] * n_features
    return [bool(getattr(f, "indicator", False)) for f in features]


def extract_rules(tree: DecisionTree, features=None) -> RuleSet:
    """One rule per deviant leaf: the conjunction of the split conditions on
    the root-to-leaf path, merged and with subsumed conditions removed.
    Conditions on indicator (0/1) columns become equality literals."""
    indicator = _indicator_flags(features, tree.n_features)
    ruleset = RuleSet()
    default_p = 0
    default_n = 0

    def convert(feature, op, threshold):
        if indicator[feature]:
            return AtomicCondition(feature, "==", 1.0 if op == ">" else 0.0)
        return AtomicCondition(feature, op, threshold)

    def walk(node, conds):
        nonlocal default_p, default_n
        if isinstance(node, Leaf):
            if node.label == 1:
                ruleset.rules.append(
                    Rule(conditions=simplify_conditions(conds), p=node.n1, n=node.n0)
                )
            else:
                default_p += node.n1
                default_n += node.n0
            return
        walk(node.left, conds + [convert(node.feature, "<=", node.threshold)])
        walk(node.right, conds + [convert(node.feature, ">", node.threshold)])

    walk(tree.root, [])
    ruleset.default_p = default_p
    ruleset.default_n = default_n
    return ruleset
