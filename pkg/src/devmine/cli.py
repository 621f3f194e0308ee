"""Command-line interface.

Subcommands: `mine` runs the full pipeline from a config file, `synth`
generates a synthetic XES log, `check` evaluates one constraint against a
log, `rules` pretty-prints a saved rule set, `defaults` prints a commented
default configuration.

Exit codes: 0 success, 2 invalid configuration, 3 XES parse failure,
4 degenerate labeling, 5 I/O error. Failures emit a machine-readable JSON
error report on stderr and leave no partial outputs behind.
"""

from __future__ import annotations

import functools
import json
import os
import platform
import sys
import time
from pathlib import Path

import click
import numpy

import devmine
from devmine import config as cfg
from devmine import evaluation as ev
from devmine import labeling as lb
from devmine import synthgen, xes
from devmine.declare import checking as dcheck
from devmine.declare.model import parse_constraint
from devmine.errors import ConfigError, DegenerateLabelingError, XesParseError
from devmine.learners.rules import RuleSet
from devmine.logmodel import EventLog, Trace

EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_LABELING = 4
EXIT_IO = 5


def _fail(kind: str, code: int, message: str):
    click.echo(json.dumps({"error": kind, "message": message}), err=True)
    sys.exit(code)


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except BrokenPipeError:
            # downstream consumer (e.g. head) closed the pipe; leave quietly
            devnull = os.open(os.devnull, os.O_WRONLY)
            os.dup2(devnull, sys.stdout.fileno())
            sys.exit(0)
        except ConfigError as exc:
            _fail("config", EXIT_CONFIG, str(exc))
        except XesParseError as exc:
            _fail("parse", EXIT_PARSE, str(exc))
        except DegenerateLabelingError as exc:
            _fail("labeling", EXIT_LABELING, str(exc))
        except OSError as exc:
            _fail("io", EXIT_IO, str(exc))

    return wrapper


@click.group()
@click.version_option(devmine.__version__)
def main():
    """Business-process deviance mining."""


def _filter_complete(log: EventLog) -> EventLog:
    traces = []
    for trace in log.traces:
        events = tuple(e for e in trace.events if e.lifecycle in (None, "complete"))
        traces.append(Trace(id=trace.id, attributes=trace.attributes, events=events))
    return EventLog(traces=tuple(traces))


def _read_log(path: str, complete_only: bool) -> EventLog:
    if not Path(path).exists():
        raise OSError(f"input file not found: {path}")
    log = xes.parse_xes(path)
    return _filter_complete(log) if complete_only else log


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(), help="pipeline TOML")
@guarded
def mine(config_path):
    """Run discovery, selection, encoding, training and evaluation."""
    config = cfg.load_pipeline_config(config_path)
    log = _read_log(config.input_path, config.complete_only)
    labeled = lb.label_log(log, config.labeling)

    classifiers = ("tree", "ripper") if config.classifier == "both" else (config.classifier,)
    cache = {}
    reports = []
    t0 = time.perf_counter()
    for encoding in config.encodings:
        for classifier in classifiers:
            reports.append(ev.run_experiment(labeled, encoding, classifier, config, cache=cache))
    wall = time.perf_counter() - t0

    out = Path(config.output_dir)
    (out / "reports").mkdir(parents=True, exist_ok=True)
    (out / "rules").mkdir(exist_ok=True)
    (out / "features").mkdir(exist_ok=True)

    (out / "report.csv").write_text(ev.report_csv(reports))
    (out / "summary.csv").write_text(ev.summary_csv(reports))
    seen_feature_manifests = set()
    for report in reports:
        stem = f"{report.encoding.replace('+', '_')}__{report.classifier}"
        (out / "reports" / f"{stem}.csv").write_text(ev.report_csv([report]))
        (out / "reports" / f"{stem}.json").write_text(_report_json(report))
        for fr in report.folds:
            if fr.skipped:
                continue
            rules_stem = f"{stem}__fold{fr.fold}"
            (out / "rules" / f"{rules_stem}.txt").write_text(
                fr.ruleset.to_text(fr.feature_names) + "\n")
            (out / "rules" / f"{rules_stem}.json").write_text(
                fr.ruleset.to_json(fr.feature_names) + "\n")
            manifest_key = (report.encoding, fr.fold)
            if manifest_key not in seen_feature_manifests:
                seen_feature_manifests.add(manifest_key)
                (out / "features" / f"{report.encoding.replace('+', '_')}__fold{fr.fold}.json"
                 ).write_text(json.dumps({"encoding": report.encoding, "fold": fr.fold,
                                          "features": fr.feature_names}, indent=2) + "\n")
    manifest = {
        "config": {
            "input": config.input_path,
            "encodings": config.encodings,
            "classifier": config.classifier,
            "theta": config.theta,
            "coverage": config.coverage,
            "folds": config.folds,
            "seed": config.seed,
        },
        "versions": {
            "devmine": devmine.__version__,
            "python": platform.python_version(),
            "numpy": numpy.__version__,
        },
        "wall_clock_s": wall,
        "timings": {f"{r.encoding}/{r.classifier}": r.timings for r in reports},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    click.echo(f"wrote {len(reports)} reports to {out}")


def _report_json(report: ev.ExperimentReport) -> str:
    doc = {
        "encoding": report.encoding,
        "classifier": report.classifier,
        "config": report.config,
        "mean": vars(report.mean),
        "folds": [
            {
                "fold": fr.fold,
                "n_train": fr.n_train,
                "n_test": fr.n_test,
                "n_features": fr.n_features,
                "skipped": fr.skipped,
                "warnings": fr.warnings,
                "metrics": vars(fr.metrics),
                "rule_count": fr.rule_count,
                "avg_rule_length": fr.avg_rule_length,
            }
            for fr in report.folds
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


@main.command()
@click.option("--spec", "spec_path", required=True, type=click.Path(), help="synth spec TOML")
@click.option("--out", "out_path", required=True, type=click.Path(), help="output XES path")
@guarded
def synth(spec_path, out_path):
    """Generate a synthetic labeled log and write it as XES."""
    spec = cfg.load_synth_spec(spec_path)
    labeled = synthgen.generate(spec)
    Path(out_path).write_text(xes.write_xes(labeled))
    click.echo(f"wrote {len(labeled.log.traces)} traces "
               f"({labeled.deviant_count} deviant) to {out_path}")


@main.command()
@click.option("--log", "log_path", required=True, type=click.Path(), help="XES log")
@click.option("--constraint", "constraint_text", required=True, help='e.g. "Response(a,b)"')
@guarded
def check(log_path, constraint_text):
    """Check one constraint against every trace (-1 violated, 0 vacuous,
    n = fulfilled activations)."""
    try:
        constraint = parse_constraint(constraint_text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    log = _read_log(log_path, complete_only=False)
    click.echo(f"trace\tvalue\t# {constraint.canonical()}")
    for trace in log.traces:
        click.echo(f"{trace.id}\t{dcheck.check(trace, constraint).encoded()}")


@main.command()
@click.argument("path", type=click.Path())
@guarded
def rules(path):
    """Pretty-print a saved rule set (JSON form)."""
    if not Path(path).exists():
        raise OSError(f"rule file not found: {path}")
    doc = json.loads(Path(path).read_text())
    ruleset = RuleSet.from_json(json.dumps(doc))
    names = {}
    for rule in doc.get("rules", []):
        for cond in rule.get("conditions", []):
            if cond.get("name"):
                names[cond["feature"]] = cond["name"]
    max_feature = max([c.feature for r in ruleset.rules for c in r.conditions], default=-1)
    name_list = [names.get(i, f"f{i}") for i in range(max_feature + 1)]
    click.echo(ruleset.to_text(name_list))


@main.command()
@guarded
def defaults():
    """Print a commented default configuration file."""
    click.echo(cfg.DEFAULTS_TOML, nl=False)


if __name__ == "__main__":
    main()
