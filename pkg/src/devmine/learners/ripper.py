"""RIPPER rule induction for the binary deviance task (positive class 1).

Building stage: repeatedly split the remaining data 2/3 grow / 1/3 prune
(stratified, seeded), grow a rule by FOIL information gain, prune it by
reduced-error pruning with V = (p - n) / (p + n), and accept it unless its
precision falls under 50% or the ruleset description length exceeds the best
seen so far by more than the budget. Optimization stage: k passes considering
a grown-from-scratch replacement and a literal-extending revision per rule,
keeping whichever minimizes total description length; stray positives are
re-covered and rules whose removal lowers the description length are deleted.
"""

from __future__ import annotations

import math
import random

import numpy as np

from devmine.learners.rules import AtomicCondition, Rule, RuleSet, simplify_conditions

DL_BUDGET_BITS = 64.0


def foil_gain(p, t, P, T) -> float:
    """p * (log2(p/t) - log2(P/T)) for coverage counts after (p, t) and
    before (P, T) adding a condition."""
    if t <= 0 or T <= 0:
        raise ValueError("coverage totals must be positive")
    if not (0 <= p <= t and 0 <= P <= T):
        raise ValueError("need 0 <= p <= t and 0 <= P <= T")
    if p == 0:
        return 0.0
    if P == 0:
        raise ValueError("log of zero: no positives covered before the condition")
    return p * (math.log2(p / t) - math.log2(P / T))


def _indicator_flags(features, n_features):
    if features is None:
        return [False] * n_features
    return [bool(getattr(f, "indicator", False)) for f in features]


def _best_literal(X, y, covered, P, T, indicators):
    """Highest-FOIL-gain literal over all (feature, operator, threshold)
    candidates; thresholds are midpoints of consecutive distinct covered
    values. Ties break to the lowest feature index, '<=' before '>',
    then the lowest threshold."""
    best_gain = 0.0
    best = None
    for j in range(X.shape[1]):
        col = X[covered, j]
        ycov = y[covered]
        if indicators[j]:
            for value in (0.0, 1.0):
                sub = col == value
                t = int(sub.sum())
                if t == 0 or t == T:
                    continue
                p = int(ycov[sub].sum())
                gain = foil_gain(p, t, P, T) if p else 0.0
                if gain > best_gain:
                    best_gain = gain
                    best = AtomicCondition(j, "==", value)
            continue
        order = np.argsort(col, kind="stable")
        sv = col[order]
        sy = ycov[order]
        boundaries = np.nonzero(sv[:-1] < sv[1:])[0]
        if boundaries.size == 0:
            continue
        cum = np.cumsum(sy)
        le_t = boundaries + 1
        le_p = cum[boundaries]
        gt_t = T - le_t
        gt_p = P - le_p
        thresholds = (sv[boundaries] + sv[boundaries + 1]) / 2.0
        for op, tt, pp in (("<=", le_t, le_p), (">", gt_t, gt_p)):
            with np.errstate(divide="ignore", invalid="ignore"):
                gains = np.where(
                    (pp > 0) & (tt > 0),
                    pp * (np.log2(np.maximum(pp, 1) / np.maximum(tt, 1)) - math.log2(P / T)),
                    0.0,
                )
            k = int(np.argmax(gains))
            if gains[k] > best_gain:
                best_gain = float(gains[k])
                best = AtomicCondition(j, op, float(thresholds[k]))
    return best, best_gain


def grow_rule(X, y, features=None, start=()) -> Rule:
    """Grow a rule on the given set by FOIL gain until it covers no negative
    example or no candidate condition has positive gain. A rule that never
    finds a gaining condition comes back with no conditions (covers all)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    indicators = _indicator_flags(features, X.shape[1])
    conds = list(start)
    rule = Rule(conditions=tuple(conds))
    covered = rule.mask(X)
    while True:
        T = int(covered.sum())
        P = int(y[covered].sum())
        if T == 0 or P == 0 or P == T:
            break  # nothing covered, hopeless, or already perfect
        literal, gain = _best_literal(X, y, covered, P, T, indicators)
        if literal is None or gain <= 0.0:
            break
        conds.append(literal)
        covered &= literal.mask(X)
    return Rule(conditions=tuple(conds))


def prune_metric(rule: Rule, X, y) -> float:
    """V = (p - n) / (p + n) on the pruning set; -1 when nothing is covered
    so pruning to vacuous truth never looks like a free win."""
    mask = rule.mask(X)
    p = int(y[mask].sum())
    n = int(mask.sum()) - p
    if p + n == 0:
        return -1.0
    return (p - n) / (p + n)


def prune_rule(rule: Rule, X, y, history=None) -> Rule:
    """Reduced-error pruning: repeatedly delete the final sequence of
    conditions whose removal maximizes V; stop when no deletion improves it."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    conds = list(rule.conditions)
    current = prune_metric(Rule(conditions=tuple(conds)), X, y)
    if history is not None:
        history.append(current)
    while conds:
        best_cut = None
        best_v = current
        for cut in range(1, len(conds) + 1):
            v = prune_metric(Rule(conditions=tuple(conds[:-cut])), X, y)
            if v > best_v:
                best_v = v
                best_cut = cut
        if best_cut is None:
            break
        conds = conds[:-best_cut]
        current = best_v
        if history is not None:
            history.append(current)
    return Rule(conditions=tuple(conds))


def _count_possible_literals(X, indicators) -> int:
    total = 0
    for j in range(X.shape[1]):
        distinct = len(np.unique(X[:, j]))
        if indicators[j]:
            total += 2 if distinct > 1 else 0
        else:
            total += 2 * max(distinct - 1, 0)
    return max(total, 2)


def _rule_bits(n_conditions: int, n_literals: int) -> float:
    # stating the literal count among the possible ones, plus one literal id
    # each; halved per the customary 50% theory-cost discount
    if n_conditions == 0:
        return 0.0
    return 0.5 * (math.log2(n_literals + 1) + n_conditions * math.log2(n_literals))


def description_length(ruleset: RuleSet, X, y, n_literals=None, features=None) -> float:
    """Total bits: per-rule encoding cost plus the exceptions cost, a binomial
    code of false positives among covered rows and false negatives among
    uncovered rows."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if n_literals is None:
        n_literals = _count_possible_literals(X, _indicator_flags(features, X.shape[1]))
    theory = sum(_rule_bits(len(rule.conditions), n_literals) for rule in ruleset.rules)
    covered = np.zeros(len(X), dtype=bool)
    for rule in ruleset.rules:
        covered |= rule.mask(X)
    c = int(covered.sum())
    u = len(X) - c
    fp = int((covered & (y == 0)).sum())
    fn = int((~covered & (y == 1)).sum())
    exceptions = math.log2(math.comb(c, fp)) + math.log2(math.comb(u, fn))
    return theory + exceptions


def _stratified_split(indices, y, grow_fraction, rng):
    grow, prune = [], []
    for cls in (0, 1):
        members = [i for i in indices if y[i] == cls]
        rng.shuffle(members)
        cut = int(round(len(members) * grow_fraction))
        grow.extend(members[:cut])
        prune.extend(members[cut:])
    return np.array(sorted(grow), dtype=int), np.array(sorted(prune), dtype=int)


def _precision(rule: Rule, X, y, rows) -> float | None:
    mask = rule.mask(X[rows])
    t = int(mask.sum())
    if t == 0:
        return None
    p = int(y[rows][mask].sum())
    return p / t


def ripper_train(matrix, hyper, dl_budget: float = DL_BUDGET_BITS) -> RuleSet:
    """Train a RIPPER rule set on a FeatureMatrix. `dl_budget` is the bits a
    candidate ruleset may exceed the best seen description length by before
    building stops."""
    X = np.asarray(matrix.values, dtype=float)
    y = np.asarray(matrix.labels, dtype=int)
    features = getattr(matrix, "features", None)
    indicators = _indicator_flags(features, X.shape[1])
    n_literals = _count_possible_literals(X, indicators)
    rng = random.Random(hyper.seed)
    grow_fraction = 1.0 - hyper.prune_fraction

    ruleset = RuleSet()
    if int(y.sum()) == 0:
        ruleset.set_stats(X, y)
        return ruleset

    def dl(rules) -> float:
        return description_length(RuleSet(rules=list(rules)), X, y, n_literals=n_literals)

    def build(rules, remaining):
        best_dl = min(dl(rules[:i]) for i in range(len(rules) + 1)) if rules else dl([])
        while remaining.any() and y[remaining].sum() > 0:
            rows = np.nonzero(remaining)[0]
            grow_rows, prune_rows = _stratified_split(rows.tolist(), y, grow_fraction, rng)
            if y[grow_rows].sum() == 0:
                break
            rule = grow_rule(X[grow_rows], y[grow_rows], features)
            rule = prune_rule(rule, X[prune_rows], y[prune_rows]) if len(prune_rows) else rule
            precision = _precision(rule, X, y, prune_rows) if len(prune_rows) else None
            if precision is None:
                precision = _precision(rule, X, y, grow_rows)
            if precision is None or precision < 0.5:
                break
            candidate = rules + [rule]
            candidate_dl = dl(candidate)
            if candidate_dl > best_dl + dl_budget:
                break
            rules.append(rule)
            best_dl = min(best_dl, candidate_dl)
            remaining &= ~rule.mask(X)
        return rules, remaining

    remaining = np.ones(len(X), dtype=bool)
    rules, remaining = build([], remaining)

    for _ in range(hyper.k):
        for i in range(len(rules)):
            others = rules[:i] + rules[i + 1:]
            covered_by_others = np.zeros(len(X), dtype=bool)
            for r in others:
                covered_by_others |= r.mask(X)
            base_rows = np.nonzero(~covered_by_others)[0]
            if len(base_rows) == 0 or y[base_rows].sum() == 0:
                continue
            grow_rows, prune_rows = _stratified_split(base_rows.tolist(), y, grow_fraction, rng)

            variants = [rules[i]]
            if y[grow_rows].sum() > 0:
                replacement = grow_rule(X[grow_rows], y[grow_rows], features)
                replacement = _prune_for_ruleset_error(
                    replacement, others, X, y, prune_rows if len(prune_rows) else grow_rows
                )
                variants.append(replacement)
            revision = grow_rule(X[base_rows], y[base_rows], features,
                                 start=rules[i].conditions)
            variants.append(revision)

            best_variant = min(variants, key=lambda r: dl(rules[:i] + [r] + rules[i + 1:]))
            rules[i] = best_variant

        still = np.ones(len(X), dtype=bool)
        for r in rules:
            still &= ~r.mask(X)
        if y[still].sum() > 0:
            rules, still = build(rules, still)

    # final cleanup: drop rules whose removal lowers the description length
    changed = True
    while changed:
        changed = False
        for i in range(len(rules)):
            without = rules[:i] + rules[i + 1:]
            if dl(without) < dl(rules):
                rules = without
                changed = True
                break

    for i, rule in enumerate(rules):
        rules[i] = Rule(conditions=simplify_conditions(rule.conditions))
    ruleset = RuleSet(rules=rules)
    ruleset.set_stats(X, y)
    return ruleset


def _prune_for_ruleset_error(rule: Rule, others, X, y, rows) -> Rule:
    """Suffix-prune `rule` to minimize whole-ruleset misclassifications on the
    given rows (replacement pruning). Ties prefer the shorter rule."""
    if not rule.conditions:
        return rule
    Xr = X[rows]
    yr = y[rows]
    base = np.zeros(len(rows), dtype=bool)
    for r in others:
        base |= r.mask(Xr)
    best_keep = None
    best_err = None
    for keep in range(1, len(rule.conditions) + 1):  # ascending: ties stay short
        cand = Rule(conditions=rule.conditions[:keep])
        pred = (base | cand.mask(Xr)).astype(int)
        err = int((pred != yr).sum())
        if best_err is None or err < best_err:
            best_err = err
            best_keep = keep
    return Rule(conditions=rule.conditions[:best_keep])
