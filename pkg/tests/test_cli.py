import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from devmine.cli import main

SYNTH_SPEC = """\
[synth]
traces = 40
length = [6, 9]
alphabet = 8
seed = 11

[[synth.planted]]
kind = "mr"
body = ["m", "r", "x"]
bias = 1.0
"""

MINE_CONFIG = """\
[input]
path = "log.xes"

[labeling]
kind = "subsequence"
activities = ["m", "r", "x"]

[mine]
encodings = ["MR"]
classifier = "tree"
theta = 0.3
coverage = 5
folds = 3
seed = 7

[output]
dir = "out"
"""


@pytest.fixture()
def runner():
    return CliRunner()


def _generate(runner):
    Path("spec.toml").write_text(SYNTH_SPEC)
    result = runner.invoke(main, ["synth", "--spec", "spec.toml", "--out", "log.xes"])
    assert result.exit_code == 0, result.output


def test_synth_then_mine_outputs(runner):
    with runner.isolated_filesystem():
        _generate(runner)
        Path("mine.toml").write_text(MINE_CONFIG)
        result = runner.invoke(main, ["mine", "--config", "mine.toml"])
        assert result.exit_code == 0, result.output
        assert Path("out/report.csv").exists()
        assert Path("out/manifest.json").exists()
        assert Path("out/reports/MR__tree.csv").exists()
        assert Path("out/rules/MR__tree__fold0.txt").exists()
        manifest = json.loads(Path("out/features/MR__fold0.json").read_text())
        assert manifest["encoding"] == "MR"
        assert manifest["features"]
        # every emitted rule references only manifest features
        rules_doc = json.loads(Path("out/rules/MR__tree__fold0.json").read_text())
        for rule in rules_doc["rules"]:
            for cond in rule["conditions"]:
                assert cond["name"] in manifest["features"]
        report = Path("out/report.csv").read_text()
        mean_row = [line for line in report.splitlines() if ",mean," in line][0]
        assert mean_row.split(",")[6] == "1.000000"  # precision


def test_mine_reports_are_deterministic(runner):
    with runner.isolated_filesystem():
        _generate(runner)
        Path("mine.toml").write_text(MINE_CONFIG)
        assert runner.invoke(main, ["mine", "--config", "mine.toml"]).exit_code == 0
        first = Path("out/report.csv").read_bytes()
        assert runner.invoke(main, ["mine", "--config", "mine.toml"]).exit_code == 0
        assert Path("out/report.csv").read_bytes() == first


def test_missing_input_exits_io_without_outputs(runner):
    with runner.isolated_filesystem():
        Path("mine.toml").write_text(MINE_CONFIG)
        result = runner.invoke(main, ["mine", "--config", "mine.toml"])
        assert result.exit_code == 5
        assert not Path("out").exists()
        payload = json.loads(result.stderr.strip().splitlines()[-1])
        assert payload["error"] == "io"


def test_invalid_config_exits_2(runner):
    with runner.isolated_filesystem():
        Path("mine.toml").write_text(MINE_CONFIG.replace('kind = "subsequence"', 'kind = "bogus"'))
        result = runner.invoke(main, ["mine", "--config", "mine.toml"])
        assert result.exit_code == 2
        payload = json.loads(result.stderr.strip().splitlines()[-1])
        assert payload["error"] == "config"


def test_degenerate_labeling_exits_4(runner):
    with runner.isolated_filesystem():
        _generate(runner)
        config = MINE_CONFIG.replace('activities = ["m", "r", "x"]',
                                     'activities = ["nope"]')
        Path("mine.toml").write_text(config)
        result = runner.invoke(main, ["mine", "--config", "mine.toml"])
        assert result.exit_code == 4


def test_parse_error_exits_3(runner):
    with runner.isolated_filesystem():
        Path("log.xes").write_text("<log><trace></log>")
        Path("mine.toml").write_text(MINE_CONFIG)
        result = runner.invoke(main, ["mine", "--config", "mine.toml"])
        assert result.exit_code == 3


def test_check_prints_encoded_values(runner):
    with runner.isolated_filesystem():
        _generate(runner)
        result = runner.invoke(main, ["check", "--log", "log.xes",
                                      "--constraint", "Response(m,r)"])
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0].startswith("trace\tvalue")
        values = {line.split("\t")[1] for line in lines[1:]}
        assert values <= {"-1", "0"} | {str(n) for n in range(1, 10)}


def test_rules_pretty_print(runner):
    with runner.isolated_filesystem():
        _generate(runner)
        Path("mine.toml").write_text(MINE_CONFIG)
        assert runner.invoke(main, ["mine", "--config", "mine.toml"]).exit_code == 0
        result = runner.invoke(main, ["rules", "out/rules/MR__tree__fold0.json"])
        assert result.exit_code == 0
        assert "=> Label=1" in result.output
        assert "=> Label=0" in result.output


def test_defaults_prints_toml(runner):
    result = CliRunner().invoke(main, ["defaults"])
    assert result.exit_code == 0
    assert "[mine]" in result.output
    assert "theta = 0.3" in result.output


def test_synth_determinism(runner):
    with runner.isolated_filesystem():
        _generate(runner)
        first = Path("log.xes").read_bytes()
        _generate(runner)
        assert Path("log.xes").read_bytes() == first


def test_summary_csv_layout(runner):
    with runner.isolated_filesystem():
        _generate(runner)
        Path("mine.toml").write_text(MINE_CONFIG.replace('classifier = "tree"',
                                                         'classifier = "both"'))
        assert runner.invoke(main, ["mine", "--config", "mine.toml"]).exit_code == 0
        lines = Path("out/summary.csv").read_text().splitlines()
        assert lines[0] == "encoding,tree_prec,tree_rec,tree_auc,ripper_prec,ripper_rec,ripper_auc"
        assert lines[1].startswith("MR,1.00,1.00,1.00")


def test_template_restriction_config(runner):
    with runner.isolated_filesystem():
        _generate(runner)
        config = MINE_CONFIG.replace('encodings = ["MR"]', 'encodings = ["Declare"]')
        config = config.replace("seed = 7", 'seed = 7\ntemplates = ["Existence"]')
        Path("mine.toml").write_text(config)
        assert runner.invoke(main, ["mine", "--config", "mine.toml"]).exit_code == 0
        manifest = json.loads(Path("out/features/Declare__fold0.json").read_text())
        assert all(f.startswith("Existence(") for f in manifest["features"])


def test_complete_only_filters_lifecycle(runner):
    doc = """<?xml version="1.0"?>
<log>
  <trace>
    <string key="concept:name" value="t1"/>
    <event><string key="concept:name" value="a"/>
           <string key="lifecycle:transition" value="start"/></event>
    <event><string key="concept:name" value="a"/>
           <string key="lifecycle:transition" value="complete"/></event>
    <event><string key="concept:name" value="b"/>
           <string key="lifecycle:transition" value="complete"/></event>
  </trace>
  <trace>
    <string key="concept:name" value="t2"/>
    <event><string key="concept:name" value="b"/>
           <string key="lifecycle:transition" value="complete"/></event>
  </trace>
</log>
"""
    with runner.isolated_filesystem():
        Path("log.xes").write_text(doc)
        from devmine.cli import _read_log

        unfiltered = _read_log("log.xes", complete_only=False)
        assert [len(t.events) for t in unfiltered.traces] == [3, 1]
        filtered = _read_log("log.xes", complete_only=True)
        assert [len(t.events) for t in filtered.traces] == [2, 1]
        assert filtered.traces[0].activities == ("a", "b")
