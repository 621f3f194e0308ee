import itertools
import random

import numpy as np
import pytest

from devmine.features import Feature, FeatureMatrix, DataDescriptor, FAMILY_DATA
from devmine.learners import Hyperparams, extract_rules, train_tree
from devmine.learners.rules import AtomicCondition, simplify_conditions
from devmine.learners.tree import Leaf, Split


def matrix(values, labels, indicators=None):
    values = np.asarray(values, dtype=float)
    indicators = indicators or [False] * values.shape[1]
    features = [
        Feature(family=FAMILY_DATA, name=f"f{j}",
                payload=DataDescriptor(kind="length"), indicator=ind)
        for j, ind in enumerate(indicators)
    ]
    return FeatureMatrix(values=values, labels=np.asarray(labels), features=features)


def test_single_perfect_split():
    m = matrix([[0], [0], [1], [1]], [0, 0, 1, 1], indicators=[True])
    tree = train_tree(m, Hyperparams())
    assert tree.depth() == 1
    assert (tree.predict(m.values) == m.labels).all()


def test_single_class_rejected():
    m = matrix([[0], [1]], [1, 1])
    with pytest.raises(ValueError):
        train_tree(m, Hyperparams())


def test_xor_needs_depth_two():
    m = matrix([[0, 0], [0, 1], [1, 0], [1, 1]], [0, 1, 1, 0],
               indicators=[True, True])
    tree = train_tree(m, Hyperparams(max_depth=2))
    assert tree.depth() == 2
    assert (tree.predict(m.values) == m.labels).all()
    # exhaustive split-pair oracle: some (first, second) split pair classifies
    # XOR perfectly, and no single split does
    rows = m.values
    singles = []
    for j, thr in itertools.product(range(2), [0.5]):
        pred = (rows[:, j] > thr).astype(int)
        singles.append(max((pred == m.labels).mean(), (1 - pred == m.labels).mean()))
    assert max(singles) < 1.0


def test_max_depth_and_min_leaf_respected():
    rng = random.Random(0)
    values = [[rng.random(), rng.random()] for _ in range(40)]
    labels = [int(v[0] + v[1] > 1) for v in values]
    m = matrix(values, labels)
    tree = train_tree(m, Hyperparams(max_depth=2, min_leaf=5))
    assert tree.depth() <= 2

    def leaf_sizes(node):
        if isinstance(node, Leaf):
            return [node.n0 + node.n1]
        return leaf_sizes(node.left) + leaf_sizes(node.right)

    assert min(leaf_sizes(tree.root)) >= 5


def test_extract_rules_three_condition_path():
    tree_root = Split(0, 2000.0,
                      Split(1, 8.0,
                            Leaf(5, 0),
                            Split(2, 0.5, Leaf(4, 0), Leaf(0, 6))),
                      Leaf(3, 1))
    from devmine.learners.tree import DecisionTree

    tree = DecisionTree(root=tree_root, n_features=3)
    features = [None, None, None]
    rules = extract_rules(tree, None)
    assert len(rules.rules) == 1
    rule = rules.rules[0]
    assert len(rule.conditions) == 3
    rendered = [c.render(["salary", "credit", "mortgage"]) for c in rule.conditions]
    assert rendered == ["(salary <= 2000.0)", "(credit > 8.0)", "(mortgage > 0.5)"]
    assert (rule.p, rule.n) == (6, 0)
    assert (rules.default_p, rules.default_n) == (1, 12)


def test_subsumed_conditions_merge():
    conds = (AtomicCondition(0, "<=", 5.0), AtomicCondition(1, ">", 2.0),
             AtomicCondition(0, "<=", 3.0))
    merged = simplify_conditions(conds)
    assert merged == (AtomicCondition(0, "<=", 3.0), AtomicCondition(1, ">", 2.0))


def test_depth_one_deviant_right():
    m = matrix([[0.0], [1.0]], [0, 1])
    tree = train_tree(m, Hyperparams())
    rules = extract_rules(tree, m.features)
    assert len(rules.rules) == 1
    assert len(rules.rules[0].conditions) == 1


def test_rule_tree_equivalence_random():
    rng = random.Random(42)
    for trial in range(30):
        n = rng.randint(8, 40)
        k = rng.randint(1, 4)
        values = [[rng.choice([0.0, 1.0]) if j % 2 else rng.random() for j in range(k)]
                  for _ in range(n)]
        labels = [rng.randint(0, 1) for _ in range(n)]
        if len(set(labels)) < 2:
            labels[0] = 1 - labels[0]
        ind = [bool(j % 2) for j in range(k)]
        m = matrix(values, labels, indicators=ind)
        tree = train_tree(m, Hyperparams(max_depth=rng.choice([2, 3, None]),
                                         min_leaf=rng.choice([1, 2])))
        rules = extract_rules(tree, m.features)
        assert (rules.predict(m.values) == tree.predict(m.values)).all(), trial


def test_tree_scores_are_leaf_fractions():
    m = matrix([[0.0], [0.0], [0.0], [1.0]], [1, 0, 0, 1])
    tree = train_tree(m, Hyperparams(max_depth=1))
    scores = tree.scores(m.values)
    assert scores[0] == pytest.approx(1 / 3)
    assert scores[3] == 1.0


def test_infogain_criterion_trains():
    rng = random.Random(8)
    values = [[rng.random()] for _ in range(40)]
    labels = [int(v[0] > 0.5) for v in values]
    m = matrix(values, labels)
    tree = train_tree(m, Hyperparams(criterion="infogain", max_depth=3))
    assert (tree.predict(m.values) == m.labels).all()
