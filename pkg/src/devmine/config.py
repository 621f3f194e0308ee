"""Pipeline and synthesis configuration (TOML files)."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from devmine import labeling as lb
from devmine import logmodel as lm
from devmine.declare.model import parse_constraint
from devmine.errors import ConfigError
from devmine.synthgen import PlantedSignal, SynthSpec

DEFAULT_ENCODINGS = ("IA", "TR", "TRA", "MR", "MRA", "Declare", "H")


@dataclass
class PipelineConfig:
    input_path: str
    labeling: object
    encodings: list = field(default_factory=lambda: list(DEFAULT_ENCODINGS))
    classifier: str = "both"
    theta: float = 0.3
    coverage: int = 5
    folds: int = 3
    seed: int = 7
    output_dir: str = "out"
    complete_only: bool = False
    raw_support: bool = False  # raw occurrence counts instead of normalized
    templates: tuple | None = None  # restrict discovery templates

    def __post_init__(self):
        if not self.encodings:
            raise ConfigError("encodings must be non-empty")
        if self.classifier not in ("tree", "ripper", "both"):
            raise ConfigError(f"classifier must be tree, ripper or both, not {self.classifier!r}")
        if not 0 < self.theta <= 1:
            raise ConfigError("theta must be in (0, 1]")
        if self.coverage < 1:
            raise ConfigError("coverage must be >= 1")
        if self.folds < 2:
            raise ConfigError("folds must be >= 2")
        if self.templates is not None:
            from devmine.declare.model import ALL_TEMPLATES

            unknown = [t for t in self.templates if t not in ALL_TEMPLATES]
            if unknown:
                raise ConfigError(f"unknown templates: {unknown}")


def _attribute_value(raw, type_name: str | None) -> lm.AttributeValue:
    if type_name in (None, "text"):
        return lm.text(str(raw))
    if type_name == "integer":
        return lm.integer(int(raw))
    if type_name == "real":
        return lm.real(float(raw))
    if type_name == "boolean":
        return lm.boolean(bool(raw))
    raise ConfigError(f"unknown attribute type {type_name!r}")


def parse_labeling(block: dict):
    kind = block.get("kind")
    if kind == "decl":
        constraints = block.get("constraints", [])
        if not constraints:
            raise ConfigError("decl labeling needs constraints")
        try:
            parsed = tuple(parse_constraint(c) for c in constraints)
        except ValueError as exc:
            raise ConfigError(f"bad constraint in labeling: {exc}") from exc
        return lb.DeclLabeling(constraints=parsed)
    if kind == "subsequence":
        activities = block.get("activities", [])
        if not activities:
            raise ConfigError("subsequence labeling needs activities")
        return lb.SubsequenceLabeling(activities=tuple(activities))
    if kind == "interleaved":
        activities = block.get("activities", [])
        if not activities:
            raise ConfigError("interleaved labeling needs activities")
        return lb.InterleavedLabeling(activities=frozenset(activities),
                                      times=int(block.get("times", 2)))
    if kind == "attribute":
        key = block.get("key")
        if not key or "value" not in block:
            raise ConfigError("attribute labeling needs key and value")
        return lb.AttributeLabeling(
            scope=block.get("scope", "trace"),
            key=key,
            value=_attribute_value(block["value"], block.get("type")),
        )
    raise ConfigError(f"unknown labeling kind {kind!r}")


def _load_toml(path: str) -> dict:
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc


def load_pipeline_config(path: str) -> PipelineConfig:
    doc = _load_toml(path)
    try:
        input_block = doc["input"]
        labeling_block = doc["labeling"]
    except KeyError as exc:
        raise ConfigError(f"config missing section {exc}") from exc
    mine = doc.get("mine", {})
    output = doc.get("output", {})
    if "path" not in input_block:
        raise ConfigError("input.path is required")
    templates = mine.get("templates")
    return PipelineConfig(
        input_path=input_block["path"],
        labeling=parse_labeling(labeling_block),
        encodings=list(mine.get("encodings", DEFAULT_ENCODINGS)),
        classifier=mine.get("classifier", "both"),
        theta=float(mine.get("theta", 0.3)),
        coverage=int(mine.get("coverage", 5)),
        folds=int(mine.get("folds", 3)),
        seed=int(mine.get("seed", 7)),
        output_dir=output.get("dir", "out"),
        complete_only=bool(input_block.get("complete_only", False)),
        raw_support=bool(mine.get("raw_support", False)),
        templates=tuple(templates) if templates else None,
    )


def _planted_signal(block: dict) -> PlantedSignal:
    kind = block.get("kind")
    bias = float(block.get("bias", 1.0))
    if kind in ("mr", "tr"):
        return PlantedSignal(kind=kind, body=tuple(block.get("body", [])),
                             repeats=int(block.get("repeats", 2)), class_bias=bias)
    if kind == "declare":
        try:
            constraint = parse_constraint(block["constraint"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad planted constraint: {exc}") from exc
        return PlantedSignal(kind="declare", constraint=constraint, class_bias=bias)
    if kind == "payload":
        type_name = block.get("type")
        try:
            deviant = _attribute_value(block["deviant"], type_name)
            normal = _attribute_value(block["normal"], type_name)
        except KeyError as exc:
            raise ConfigError(f"planted payload missing {exc}") from exc
        return PlantedSignal(kind="payload", key=block.get("key"),
                             deviant_value=deviant, normal_value=normal,
                             scope=block.get("scope", "trace"), class_bias=bias)
    raise ConfigError(f"unknown planted kind {kind!r}")


def load_synth_spec(path: str) -> SynthSpec:
    doc = _load_toml(path)
    block = doc.get("synth")
    if block is None:
        raise ConfigError("spec file needs a [synth] section")
    length = block.get("length", [8, 14])
    return SynthSpec(
        trace_count=int(block.get("traces", 100)),
        length_range=(int(length[0]), int(length[1])),
        alphabet_size=int(block.get("alphabet", 10)),
        planted=tuple(_planted_signal(b) for b in block.get("planted", [])),
        noise_rate=float(block.get("noise", 0.0)),
        deviant_fraction=float(block.get("deviant_fraction", 0.5)),
        seed=int(block.get("seed", 0)),
    )


DEFAULTS_TOML = """\
# devmine pipeline configuration (all values shown are the defaults)

[input]
path = "log.xes"
complete_only = false      # keep only lifecycle:transition == "complete" events

[labeling]
kind = "subsequence"       # decl | subsequence | interleaved | attribute
activities = ["a", "b"]
# kind = "decl"
# constraints = ["Response(a,b)"]
# kind = "interleaved"
# activities = ["a", "b"]
# times = 2
# kind = "attribute"
# scope = "trace"          # trace | event
# key = "article"
# value = 157
# type = "integer"         # text | integer | real | boolean

[mine]
encodings = ["IA", "TR", "TRA", "MR", "MRA", "Declare", "H"]
classifier = "both"        # tree | ripper | both
theta = 0.3                # minimum support threshold
coverage = 5               # coverage threshold c
folds = 3
seed = 7
# raw_support = false     # raw occurrence counts instead of trace-length normalized
# templates = ["Response", "Precedence"]   # restrict Declare discovery

[output]
dir = "out"

# synthetic log generation (used by `devmine synth`)

[synth]
traces = 100
length = [8, 14]
alphabet = 10
noise = 0.0
deviant_fraction = 0.5
seed = 0

[[synth.planted]]
kind = "mr"                # mr | tr | declare | payload
body = ["m", "r", "x"]
bias = 1.0
"""
