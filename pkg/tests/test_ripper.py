
import random

import numpy as np
import pytest

from devmine.features import FAMILY_DATA, DataDescriptor, Feature, FeatureMatrix
from devmine.learners import Hyperparams, foil_gain, grow_rule, prune_rule, ripper_train
from devmine.learners.ripper import (
    _count_possible_literals,
    description_length,
    prune_metric,
)
from devmine.learners.rules import AtomicCondition, Rule, RuleSet

from reference.misc import foil_gain_reference, reference_description_length


def matrix(values, labels, indicators=None):
    values = np.asarray(values, dtype=float)
    indicators = indicators or [False] * values.shape[1]
    features = [
        Feature(family=FAMILY_DATA, name=f"f{j}",
                payload=DataDescriptor(kind="length"), indicator=ind)
        for j, ind in enumerate(indicators)
    ]
    return FeatureMatrix(values=values, labels=np.asarray(labels), features=features)


def test_foil_gain_examples():
    assert foil_gain(8, 10, 10, 20) == pytest.approx(5.4246, abs=5e-5)
    assert foil_gain(0, 10, 10, 20) == 0.0
    assert foil_gain(5, 10, 10, 20) == 0.0  # equal ratios
    with pytest.raises(ValueError):
        foil_gain(1, 0, 10, 20)
    with pytest.raises(ValueError):
        foil_gain(2, 2, 0, 20)


def test_foil_gain_against_reference():
    rng = random.Random(13)
    for _ in range(300):
        T = rng.randint(1, 500)
        P = rng.randint(1, T)
        t = rng.randint(1, T)
        p = rng.randint(0, min(P, t))
        got = foil_gain(p, t, P, T)
        if p == 0:
            assert got == 0.0
        else:
            assert got == pytest.approx(foil_gain_reference(p, t, P, T), abs=1e-9)


def test_grow_rule_perfect_binary_literal():
    X = [[1], [1], [1], [0], [0]]
    y = [1, 1, 1, 0, 0]
    m = matrix(X, y, indicators=[True])
    rule = grow_rule(m.values, m.labels, m.features)
    assert rule.conditions == (AtomicCondition(0, "==", 1.0),)


def test_grow_rule_one_threshold_for_separable_line():
    rng = random.Random(2)
    lows = sorted(rng.uniform(0, 1) for _ in range(10))
    highs = sorted(rng.uniform(2, 3) for _ in range(10))
    X = [[v] for v in lows + highs]
    y = [0] * 10 + [1] * 10
    rule = grow_rule(np.asarray(X), np.asarray(y))
    assert len(rule.conditions) == 1
    cond = rule.conditions[0]
    assert cond.op == ">"
    assert lows[-1] < cond.threshold < highs[0]


def test_grow_rule_corner_needs_two_literals():
    X, y = [], []
    rng = random.Random(3)
    for _ in range(30):
        a, b = rng.random(), rng.random()
        X.append([a, b])
        y.append(int(a > 0.5 and b > 0.5))
    X += [[0.9, 0.9], [0.8, 0.7], [0.7, 0.95]]
    y += [1, 1, 1]
    rule = grow_rule(np.asarray(X), np.asarray(y))
    mask = rule.mask(np.asarray(X))
    covered = np.asarray(y)[mask]
    assert covered.sum() == covered.size  # no negatives covered
    assert covered.size >= 1
    # brute-force check: no single literal separates this corner perfectly
    values = np.asarray(X)
    labels = np.asarray(y)
    for j in range(2):
        col = np.unique(values[:, j])
        for thr in (col[:-1] + col[1:]) / 2:
            for mask1 in (values[:, j] <= thr, values[:, j] > thr):
                assert not (labels[mask1].all() and labels[mask1].sum() == labels.sum())
    assert len(rule.conditions) == 2
    assert {c.feature for c in rule.conditions} == {0, 1}


def test_prune_metric_values():
    m = matrix([[1]] * 8, [1, 1, 1, 1, 1, 1, 0, 0])
    rule = Rule(conditions=())
    assert prune_metric(rule, m.values, m.labels) == pytest.approx(0.5)
    m2 = matrix([[1]] * 4, [1, 1, 0, 0])
    assert prune_metric(rule, m2.values, m2.labels) == 0.0
    never = Rule(conditions=(AtomicCondition(0, ">", 99.0),))
    assert prune_metric(never, m2.values, m2.labels) == -1.0


def test_prune_drops_literal_that_only_excludes_positives():
    # on the prune set, the second literal (f1 > 0.5) excludes only the
    # positives A and B, dragging V down; deleting it must win
    X = np.asarray([[1.0, 0.0], [1.0, 0.0], [1.0, 1.0], [1.0, 1.0], [0.0, 0.0]])
    y = np.asarray([1, 1, 1, 0, 0])
    rule = Rule(conditions=(AtomicCondition(0, ">", 0.5), AtomicCondition(1, ">", 0.5)))
    pruned = prune_rule(rule, X, y)
    assert pruned.conditions == (AtomicCondition(0, ">", 0.5),)
    # exhaustive suffix enumeration agrees that this deletion maximizes V
    options = {
        0: prune_metric(rule, X, y),
        1: prune_metric(Rule(conditions=rule.conditions[:1]), X, y),
        2: prune_metric(Rule(conditions=()), X, y),
    }
    assert options[1] == max(options.values())
    assert options[1] > options[0]


def test_prune_history_is_monotone():
    rng = random.Random(21)
    for _ in range(100):
        n = rng.randint(6, 24)
        X = np.asarray([[rng.random() for _ in range(3)] for _ in range(n)])
        y = np.asarray([rng.randint(0, 1) for _ in range(n)])
        conds = tuple(
            AtomicCondition(rng.randrange(3), rng.choice(["<=", ">"]), rng.random())
            for _ in range(rng.randint(1, 4))
        )
        history = []
        prune_rule(Rule(conditions=conds), X, y, history=history)
        assert all(b >= a for a, b in zip(history, history[1:]))


def test_description_length_empty_ruleset_all_negative():
    m = matrix([[0.0], [1.0], [2.0]], [0, 0, 0])
    assert description_length(RuleSet(), m.values, m.labels) == 0.0


def test_description_length_negative_only_rule_costs_bits():
    # 12 rows, 4 positives; a rule covering 3 negatives only must increase DL
    values = [[float(i)] for i in range(12)]
    labels = [1, 1, 1, 1] + [0] * 8
    m = matrix(values, labels)
    empty_dl = description_length(RuleSet(), m.values, m.labels)
    bad = RuleSet(rules=[Rule(conditions=(AtomicCondition(0, ">", 8.5),))])
    assert description_length(bad, m.values, m.labels) > empty_dl


def test_description_length_matches_reference_script():
    values = [[float(i), float(i % 3)] for i in range(12)]
    labels = [1, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0]
    m = matrix(values, labels)
    ruleset = RuleSet(rules=[
        Rule(conditions=(AtomicCondition(0, "<=", 4.5), AtomicCondition(1, ">", 0.5))),
        Rule(conditions=(AtomicCondition(0, ">", 7.5),)),
    ])
    X = m.values
    y = m.labels
    covered = ruleset.rules[0].mask(X) | ruleset.rules[1].mask(X)
    fp = int((covered & (y == 0)).sum())
    fn = int((~covered & (y == 1)).sum())
    n_literals = _count_possible_literals(X, [False, False])
    expected = reference_description_length(
        rule_sizes=[2, 1], n_literals=n_literals,
        covered=int(covered.sum()), fp=fp,
        uncovered=int((~covered).sum()), fn=fn)
    assert description_length(ruleset, X, y) == pytest.approx(expected, abs=1e-12)


def test_ripper_perfectly_separable():
    X = [[1.0]] * 6 + [[0.0]] * 6
    y = [1] * 6 + [0] * 6
    m = matrix(X, y, indicators=[True])
    ruleset = ripper_train(m, Hyperparams(seed=0))
    assert len(ruleset.rules) == 1
    assert (ruleset.predict(m.values) == m.labels).all()


def test_ripper_output_shape():
    X = [[1.0, 3.0]] * 4 + [[0.0, 1.0]] * 4
    y = [1] * 4 + [0] * 4
    m = matrix(X, y, indicators=[True, False])
    ruleset = ripper_train(m, Hyperparams(seed=1))
    text = ruleset.to_text([f.name for f in m.features])
    lines = text.splitlines()
    assert all("=> Label=1" in line for line in lines[:-1])
    assert lines[-1].startswith(" => Label=0")
    # every rule predicts class 1; unmatched rows get class 0
    predictions = ruleset.predict(m.values)
    covered = np.zeros(len(m.values), dtype=bool)
    for rule in ruleset.rules:
        covered |= rule.mask(m.values)
    assert (predictions[~covered] == 0).all()
    assert (predictions[covered] == 1).all()


def test_ripper_no_positives_predicts_default():
    m = matrix([[0.0], [1.0]], [0, 0])
    ruleset = ripper_train(m, Hyperparams())
    assert ruleset.rules == []
    assert (ruleset.predict(m.values) == 0).all()


def test_ripper_noisy_planted_rule():
    accs = []
    sizes = []
    for seed in range(10):
        rng = random.Random(100 + seed)
        X, y = [], []
        for _ in range(120):
            a = rng.random()
            b = rng.random()
            label = int(a > 0.6)
            if rng.random() < 0.1:
                label = 1 - label
            X.append([a, b])
            y.append(label)
        m = matrix(X[:80], y[:80])
        ruleset = ripper_train(m, Hyperparams(seed=seed))
        test_X = np.asarray(X[80:])
        test_y = np.asarray(y[80:])
        accs.append((ruleset.predict(test_X) == test_y).mean())
        sizes.append(len(ruleset.rules))
    assert sum(accs) / len(accs) >= 0.85
    assert max(sizes) <= 3


def test_default_rule_laplace_score():
    m = matrix([[1.0]] * 2 + [[0.0]] * 10, [1, 1] + [0] * 10, indicators=[True])
    ruleset = ripper_train(m, Hyperparams(seed=0))
    scores = ruleset.scores(m.values)
    # 10 uncovered rows, 0 uncovered positives -> (0+1)/(10+2)
    assert scores[-1] == pytest.approx(1 / 12)
