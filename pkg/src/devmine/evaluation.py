"""Stratified cross-validation, grid search, accuracy metrics, rule
conciseness statistics, and experiment orchestration.

Everything a fold learns (patterns, constraints, data feature layout, Fisher
ranking, coverage selection, hyperparameters) is computed on the training
traces only; the held-out fold is encoded against the frozen feature set.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

import numpy as np

from devmine import features as ft
from devmine import sequential as sq
from devmine.declare import checking as dcheck
from devmine.declare import discover as ddisc
from devmine.errors import ConfigError, DegenerateLabelingError
from devmine.learners import Hyperparams, extract_rules, ripper_train, train_tree
from devmine.learners.rules import RuleSet
from devmine.logmodel import EventLog, LabeledLog

ENCODING_TOKENS = ("IA", "TR", "TRA", "MR", "MRA", "Declare", "DeclD", "Data", "H")
HYBRID_EXPANSION = ("IA", "TR", "TRA", "MR", "MRA", "Declare")
_PATTERN_KIND = {"IA": sq.IA, "TR": sq.TR, "TRA": sq.TRA, "MR": sq.MR, "MRA": sq.MRA}


def parse_encoding(spec: str) -> tuple:
    """Split an encoding spec like "Data+MR" or "H+DeclD" into family tokens
    (H expands to all control-flow families)."""
    tokens = []
    for raw in spec.split("+"):
        token = raw.strip()
        if token not in ENCODING_TOKENS:
            raise ConfigError(f"unknown encoding family {token!r} in {spec!r}")
        expansion = HYBRID_EXPANSION if token == "H" else (token,)
        for t in expansion:
            if t not in tokens:
                tokens.append(t)
    if not tokens:
        raise ConfigError("empty encoding spec")
    return tuple(tokens)


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    auc: float


def auc(labels, scores) -> float:
    """P(score+ > score-) + 0.5 P(score+ = score-) over all
    positive/negative pairs."""
    labels = np.asarray(labels, dtype=int)
    scores = np.asarray(scores, dtype=float)
    n_pos = int((labels == 1).sum())
    n_neg = int((labels == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("auc needs both classes")
    order = np.argsort(scores, kind="stable")
    wins = 0
    ties = 0
    neg_below = 0
    i = 0
    n = len(scores)
    while i < n:
        j = i
        group_pos = 0
        group_neg = 0
        while j < n and scores[order[j]] == scores[order[i]]:
            if labels[order[j]] == 1:
                group_pos += 1
            else:
                group_neg += 1
            j += 1
        wins += group_pos * neg_below
        ties += group_pos * group_neg
        neg_below += group_neg
        i = j
    return (wins + 0.5 * ties) / (n_pos * n_neg)


def compute_metrics(labels, predictions, scores) -> Metrics:
    """Precision/recall/F1 with the zero conventions (no positive predictions
    scores precision 0; undefined F1 is 0) plus rank AUC."""
    labels = np.asarray(labels, dtype=int)
    predictions = np.asarray(predictions, dtype=int)
    if len(labels) != len(predictions):
        raise ValueError("labels and predictions must have equal lengths")
    tp = int(((predictions == 1) & (labels == 1)).sum())
    fp = int(((predictions == 1) & (labels == 0)).sum())
    fn = int(((predictions == 0) & (labels == 1)).sum())
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Metrics(precision=precision, recall=recall, f1=f1, auc=auc(labels, scores))


def stratified_folds(labels, k: int = 3, seed: int = 0) -> list:
    """k disjoint index lists with per-class round-robin assignment after a
    seeded shuffle; class proportions stay within one element of global."""
    labels = list(labels)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = random.Random(seed)
    folds = [[] for _ in range(k)]
    for cls in (0, 1):
        members = [i for i, y in enumerate(labels) if y == cls]
        if len(members) < k:
            raise ValueError(f"class {cls} has {len(members)} members, fewer than k={k}")
        rng.shuffle(members)
        for pos, idx in enumerate(members):
            folds[pos % k].append(idx)
    return [sorted(f) for f in folds]


def rule_stats(ruleset: RuleSet):
    """(rule count, mean condition count) over the non-default rules."""
    if not ruleset.rules:
        return 0, 0.0
    lengths = [len(r.conditions) for r in ruleset.rules]
    return len(lengths), sum(lengths) / len(lengths)


def default_grid(classifier: str, seed: int = 0) -> list:
    if classifier == "tree":
        return [
            Hyperparams(max_depth=d, min_leaf=m, seed=seed)
            for d in (3, 5, 7, None)
            for m in (1, 5, 10)
        ]
    if classifier == "ripper":
        return [Hyperparams(k=k, seed=seed) for k in (1, 2)]
    raise ConfigError(f"unknown classifier {classifier!r}")


def _fit(matrix: ft.FeatureMatrix, classifier: str, hyper: Hyperparams):
    if classifier == "tree":
        return train_tree(matrix, hyper)
    return ripper_train(matrix, hyper)


def _model_size(model) -> float:
    if isinstance(model, RuleSet):
        return float(len(model.rules))
    return float(model.depth())


def _capacity(classifier: str, hyper: Hyperparams) -> float:
    # secondary smaller-model tie-break: prefer the tighter budget
    if classifier == "tree":
        return float("inf") if hyper.max_depth is None else float(hyper.max_depth)
    return float(hyper.k)


def grid_search(matrix: ft.FeatureMatrix, classifier: str, grid, seed: int = 0,
                inner_k: int = 3) -> Hyperparams:
    """Inner stratified CV on the training matrix; pick by mean F1, ties by
    smaller model (fewer rules / shallower tree), then grid order."""
    if not grid:
        raise ConfigError("grid must be non-empty")
    if len(grid) == 1:
        return grid[0]
    labels = matrix.labels.tolist()
    minority = min(labels.count(0), labels.count(1))
    k = min(inner_k, minority)
    if k < 2:
        return grid[0]
    folds = stratified_folds(labels, k=k, seed=seed)
    best = None
    for cell_idx, hyper in enumerate(grid):
        f1s = []
        sizes = []
        for test_idx in folds:
            train_idx = sorted(set(range(len(labels))) - set(test_idx))
            train = ft.FeatureMatrix(values=matrix.values[train_idx],
                                     labels=matrix.labels[train_idx],
                                     features=matrix.features)
            test_X = matrix.values[test_idx]
            test_y = matrix.labels[test_idx]
            model = _fit(train, classifier, hyper)
            predictions = model.predict(test_X)
            scores = model.scores(test_X)
            f1s.append(compute_metrics(test_y, predictions, scores).f1)
            sizes.append(_model_size(model))
        key = (-(sum(f1s) / len(f1s)), sum(sizes) / len(sizes),
               _capacity(classifier, hyper), cell_idx)
        if best is None or key < best[0]:
            best = (key, hyper)
    return best[1]


@dataclass
class FoldReport:
    fold: int
    n_train: int
    n_test: int
    n_features: int
    metrics: Metrics
    rule_count: int
    avg_rule_length: float
    hyper: Hyperparams
    ruleset: RuleSet
    feature_names: list
    skipped: bool = False
    warnings: list = field(default_factory=list)


@dataclass
class ExperimentReport:
    encoding: str
    classifier: str
    folds: list
    mean: Metrics
    config: dict
    timings: dict = field(default_factory=dict)

    def csv_rows(self) -> list:
        rows = []
        for fr in self.folds:
            rows.append([
                self.encoding, self.classifier, str(fr.fold), str(fr.n_train),
                str(fr.n_test), str(fr.n_features),
                f"{fr.metrics.precision:.6f}", f"{fr.metrics.recall:.6f}",
                f"{fr.metrics.f1:.6f}", f"{fr.metrics.auc:.6f}",
                str(fr.rule_count), f"{fr.avg_rule_length:.6f}",
            ])
        rows.append([
            self.encoding, self.classifier, "mean", "", "", "",
            f"{self.mean.precision:.6f}", f"{self.mean.recall:.6f}",
            f"{self.mean.f1:.6f}", f"{self.mean.auc:.6f}", "", "",
        ])
        return rows


CSV_HEADER = [
    "encoding", "classifier", "fold", "n_train", "n_test", "n_features",
    "precision", "recall", "f1", "auc", "rule_count", "avg_rule_length",
]


def report_csv(reports) -> str:
    lines = [",".join(CSV_HEADER)]
    for report in reports:
        for row in report.csv_rows():
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def summary_csv(reports) -> str:
    """One row per encoding with two-decimal Prec/Rec/AUC cells per
    classifier, mirroring the result-table layout."""
    classifiers = []
    for report in reports:
        if report.classifier not in classifiers:
            classifiers.append(report.classifier)
    by_key = {(r.encoding, r.classifier): r for r in reports}
    encodings = []
    for report in reports:
        if report.encoding not in encodings:
            encodings.append(report.encoding)
    header = ["encoding"]
    for clf in classifiers:
        header += [f"{clf}_prec", f"{clf}_rec", f"{clf}_auc"]
    lines = [",".join(header)]
    for enc in encodings:
        row = [enc]
        for clf in classifiers:
            report = by_key.get((enc, clf))
            if report is None:
                row += ["", "", ""]
            else:
                row += [f"{report.mean.precision:.2f}", f"{report.mean.recall:.2f}",
                        f"{report.mean.auc:.2f}"]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _sublog(labeled: LabeledLog, indices) -> LabeledLog:
    traces = tuple(labeled.log.traces[i] for i in indices)
    labels = tuple(labeled.labels[i] for i in indices)
    return LabeledLog(log=EventLog(traces=traces), labels=labels)


def _pattern_family_candidates(train: LabeledLog, token: str, theta: float, raw: bool):
    kind = _PATTERN_KIND[token]
    patterns, supports = sq.discover_patterns(train, kind, theta=theta, raw_support=raw)
    family = ft.FAMILY_IA if token == "IA" else ft.FAMILY_SEQ
    feats = [ft.Feature(family=family, name=p.canonical(), payload=p) for p in patterns]
    return feats, supports.values


def _constraint_columns(constraints, labeled: LabeledLog):
    values = np.zeros((len(labeled.log.traces), len(constraints)))
    outcome_lists = []
    for j, constraint in enumerate(constraints):
        outcomes = [dcheck.check(t, constraint) for t in labeled.log.traces]
        outcome_lists.append(outcomes)
        values[:, j] = [o.encoded() for o in outcomes]
    return values, outcome_lists


def _family_candidates(train: LabeledLog, token: str, options, cache: dict):
    """(features, train-trace columns) for one family, discovered on the
    training sub-log only. Results are cached per (cache epoch, token)."""
    theta, raw, templates = options
    if token in cache:
        return cache[token]
    if token in _PATTERN_KIND:
        result = _pattern_family_candidates(train, token, theta, raw)
    elif token == "Declare":
        constraints = ddisc.discover_constraints(train, theta=theta, templates=templates)
        values, _ = _constraint_columns(constraints, train)
        feats = [ft.Feature(family=ft.FAMILY_DECL, name=c.canonical(), payload=c)
                 for c in constraints]
        result = (feats, values)
    elif token == "DeclD":
        base_feats, _ = _family_candidates(train, "Declare", options, cache)
        enriched = [ddisc.enrich_with_data(f.payload, train) for f in base_feats]
        values, _ = _constraint_columns(enriched, train)
        feats = [ft.Feature(family=ft.FAMILY_DECLD, name=c.canonical(), payload=c)
                 for c in enriched]
        result = (feats, values)
    elif token == "Data":
        feats, values = ft.extract_data_features(train)
        result = (feats, values)
    else:
        raise ConfigError(f"unknown encoding family {token!r}")
    cache[token] = result
    return result


def _select_features(train: LabeledLog, tokens, options, coverage: int, cache: dict):
    """Merged Fisher ranking over all candidate families, then the coverage
    walk. Falls back to IA candidates when nothing is discovered."""
    warnings = []
    feats = []
    columns = []
    for token in tokens:
        f, v = _family_candidates(train, token, options, cache)
        feats.extend(f)
        columns.append(v)
    if not feats:
        warnings.append("no features discovered; falling back to IA")
        f, v = _family_candidates(train, "IA", options, cache)
        feats, columns = list(f), [v]
    if not feats:
        warnings.append("IA fallback empty; using all activities")
        patterns = [sq.SequentialPattern(sq.IA, (a,)) for a in sorted(train.log.alphabet)]
        feats = [ft.Feature(family=ft.FAMILY_IA, name=p.canonical(), payload=p)
                 for p in patterns]
        values = np.zeros((len(train.log.traces), len(patterns)))
        for j, p in enumerate(patterns):
            for i, t in enumerate(train.log.traces):
                values[i, j] = sq.relative_support(t, p)
        columns = [values]
    matrix = np.hstack(columns) if columns else np.zeros((len(train.log.traces), 0))
    order = ft.rank_by_fisher(matrix, train.labels)
    ranked_feats = [feats[j] for j in order]
    ranked_matrix = matrix[:, order]
    picked = ft.coverage_select(ranked_feats, ranked_matrix, train.labels, c=coverage)
    selected = [ranked_feats[p] for p in picked]
    if not selected:
        selected = ranked_feats[:1]
        warnings.append("coverage walk selected nothing; keeping the top-ranked feature")
    return selected, warnings


def _encode_side(labeled: LabeledLog, selected, raw: bool = False) -> ft.FeatureMatrix:
    patterns = [f.payload for f in selected if f.family in (ft.FAMILY_IA, ft.FAMILY_SEQ)]
    supports = None
    if patterns:
        values = np.zeros((len(labeled.log.traces), len(patterns)))
        for j, p in enumerate(patterns):
            for i, t in enumerate(labeled.log.traces):
                values[i, j] = sq.relative_support(t, p, raw=raw)
        supports = sq.SupportMatrix(patterns=patterns, values=values)
    checks = {}
    for feature in selected:
        if feature.family in (ft.FAMILY_DECL, ft.FAMILY_DECLD):
            checks[feature] = [dcheck.check(t, feature.payload) for t in labeled.log.traces]
    return ft.encode(labeled, selected, supports=supports, checks=checks)


def run_experiment(labeled: LabeledLog, encoding: str, classifier: str, config,
                   cache: dict | None = None) -> ExperimentReport:
    """Cross-validated run of one encoding with one classifier.

    `config` carries theta, coverage c, folds, seed, raw_support and the
    optional template restriction (see PipelineConfig). Discovery, selection
    and tuning see training traces only. A `cache` dict may be shared across
    encodings/classifiers of the same config and labeled log; never reuse it
    across configs.
    """
    if classifier not in ("tree", "ripper"):
        raise ConfigError(f"unknown classifier {classifier!r}")
    tokens = parse_encoding(encoding)
    theta = config.theta
    coverage = config.coverage
    raw = getattr(config, "raw_support", False)
    options = (theta, raw, getattr(config, "templates", None))
    cache = cache if cache is not None else {}

    folds = stratified_folds(labeled.labels, k=config.folds, seed=config.seed)
    fold_reports = []
    timings = {}
    for fold_idx, test_idx in enumerate(folds):
        t0 = time.perf_counter()
        train_idx = sorted(set(range(len(labeled.labels))) - set(test_idx))
        train = _sublog(labeled, train_idx)
        test = _sublog(labeled, test_idx)
        if len(set(train.labels)) < 2 or len(set(test.labels)) < 2:
            fold_reports.append(FoldReport(
                fold=fold_idx, n_train=len(train_idx), n_test=len(test_idx),
                n_features=0, metrics=Metrics(0.0, 0.0, 0.0, 0.0), rule_count=0,
                avg_rule_length=0.0, hyper=Hyperparams(), ruleset=RuleSet(),
                feature_names=[], skipped=True, warnings=["single-class fold skipped"],
            ))
            continue
        fold_cache = cache.setdefault(("fold", fold_idx), {})
        selected, warnings = _select_features(train, tokens, options, coverage, fold_cache)
        train_matrix = _encode_side(train, selected, raw=raw)
        test_matrix = _encode_side(test, selected, raw=raw)

        grid = default_grid(classifier, seed=config.seed)
        hyper = grid_search(train_matrix, classifier, grid, seed=config.seed)
        model = _fit(train_matrix, classifier, hyper)
        predictions = model.predict(test_matrix.values)
        scores = model.scores(test_matrix.values)
        metrics = compute_metrics(test_matrix.labels, predictions, scores)
        ruleset = model if isinstance(model, RuleSet) else extract_rules(model, train_matrix.features)
        count, avg_len = rule_stats(ruleset)
        fold_reports.append(FoldReport(
            fold=fold_idx, n_train=len(train_idx), n_test=len(test_idx),
            n_features=len(selected), metrics=metrics, rule_count=count,
            avg_rule_length=avg_len, hyper=hyper, ruleset=ruleset,
            feature_names=train_matrix.names, warnings=warnings,
        ))
        timings[f"fold_{fold_idx}_s"] = time.perf_counter() - t0

    live = [fr for fr in fold_reports if not fr.skipped]
    if not live:
        raise DegenerateLabelingError("every fold was single-class")
    mean = Metrics(
        precision=sum(fr.metrics.precision for fr in live) / len(live),
        recall=sum(fr.metrics.recall for fr in live) / len(live),
        f1=sum(fr.metrics.f1 for fr in live) / len(live),
        auc=sum(fr.metrics.auc for fr in live) / len(live),
    )
    config_echo = {
        "encoding": encoding, "classifier": classifier, "theta": theta,
        "coverage": coverage, "folds": config.folds, "seed": config.seed,
        "raw_support": raw, "templates": list(options[2]) if options[2] else None,
    }
    return ExperimentReport(encoding=encoding, classifier=classifier, folds=fold_reports,
                            mean=mean, config=config_echo, timings=timings)
