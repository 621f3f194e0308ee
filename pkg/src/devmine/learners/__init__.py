"""White-box rule learners: decision tree with rule extraction, and RIPPER."""

import numpy as np

from devmine.learners.rules import (  # noqa: F401
    AtomicCondition,
    Hyperparams,
    Rule,
    RuleSet,
    simplify_conditions,
)
from devmine.learners.tree import DecisionTree, extract_rules, train_tree  # noqa: F401
from devmine.learners.ripper import (  # noqa: F401
    description_length,
    foil_gain,
    grow_rule,
    prune_rule,
    ripper_train,
)


def score(model, row):
    """(predicted class, class-1 score in [0, 1]) for one feature row.

    Trees score by leaf positive fraction; rule sets by the Laplace accuracy
    of the first matching rule (default rule: uncovered-positive Laplace).
    """
    X = np.asarray([row], dtype=float)
    if isinstance(model, DecisionTree):
        return int(model.predict(X)[0]), float(model.scores(X)[0])
    if isinstance(model, RuleSet):
        return int(model.predict(X)[0]), float(model.scores(X)[0])
    raise TypeError(f"unknown model type {type(model).__name__}")
