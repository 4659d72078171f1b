"""Scenario files.

A scenario is a YAML mapping with these blocks::

    system:            # exactly one kind
      kind: spin_half          # gamma
      gamma: 1.0
      # kind: parity_doublet   # half_splitting_B, d0, mu0 (default 0)
    bfield:            # and/or efield; spin_half forbids efield
      static_z: 1.0
      components:
        - {amplitude: 0.1, frequency: 0.001, phase: 0.0}
    run:
      cycles: 1                # or duration: <time>
      backends: [perturbative, geometric, oracle, dressed]
      evolution: {steps_per_fastest_period: 256, unitarity_tolerance: 1.0e-9,
                  max_phase_per_step: 0.3927}
      output: result.csv       # optional
    sweep:             # optional, used by the sweep command
      param: bfield.components.0.amplitude
      values: [0.02, 0.05, 0.1]

Unknown keys are errors. ``cycles`` means cycles * 2 pi / |w| of the first
rotating component (efield first, then bfield).
"""

from __future__ import annotations

import copy
import math
import re
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .errors import ConfigError
from .evolution import EvolutionConfig
from .fields import FieldTrajectory, RotatingComponent
from .systems import ParityDoubletSystem, SpinHalfSystem

BACKENDS = ("perturbative", "geometric", "oracle", "dressed")
DEFAULT_BACKENDS = ("perturbative", "geometric")

_TOP = {"system", "efield", "bfield", "run", "sweep"}
_SYSTEM_KEYS = {
    "spin_half": ({"gamma"}, set()),
    "parity_doublet": ({"half_splitting_B", "d0"}, {"mu0"}),
}
_FIELD_KEYS = ({"static_z"}, {"components"})
_COMPONENT_KEYS = ({"amplitude", "frequency"}, {"phase"})
_RUN_KEYS = (set(), {"cycles", "duration", "backends", "evolution", "output"})
_EVOLUTION_KEYS = (set(), {"steps_per_fastest_period", "unitarity_tolerance", "max_phase_per_step"})
_SWEEP_KEYS = ({"param", "values"}, set())


@dataclass(frozen=True)
class ScenarioConfig:
    system: object
    efield: Optional[FieldTrajectory]
    bfield: Optional[FieldTrajectory]
    duration: float
    backends: tuple
    evolution: EvolutionConfig
    output: Optional[str] = None
    sweep_param: Optional[str] = None
    sweep_values: tuple = ()
    raw: dict = field(default=None, repr=False, compare=False)
    lines: dict = field(default=None, repr=False, compare=False)

    @property
    def kind(self) -> str:
        return "spin_half" if isinstance(self.system, SpinHalfSystem) else "parity_doublet"


# located YAML --------------------------------------------------------------


class _Loader(yaml.SafeLoader):
    """Safe loader that also reads 1e-9 style exponents (no dot) as floats."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"^[-+]?(?:[0-9][0-9_]*)(?:\.[0-9_]*)?[eE][-+]?[0-9]+$"),
    list("-+0123456789"),
)


def _scalar(node):
    return _Loader("").construct_object(node, deep=True)


def _plain(node, path, lines):
    """Python value of a composed YAML node, recording 1-based line numbers by dotted path."""
    lines[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        out = {}
        for k, v in node.value:
            key = str(k.value) if isinstance(k, yaml.ScalarNode) else str(_scalar(k))
            if key in out:
                raise ConfigError(f"line {k.start_mark.line + 1}: duplicate key '{_join(path, key)}'")
            out[key] = _plain(v, _join(path, key), lines)
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_plain(v, _join(path, str(i)), lines) for i, v in enumerate(node.value)]
    return _scalar(node)


def _join(path, key):
    return f"{path}.{key}" if path else key


def parse_text(text: str):
    """(raw dict, line map) from YAML text; syntax errors carry line and column."""
    try:
        node = yaml.compose(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise ConfigError(f"{where}YAML syntax error: {getattr(exc, 'problem', exc)}") from None
    if node is None:
        raise ConfigError("empty scenario file")
    lines = {}
    raw = _plain(node, "", lines)
    if not isinstance(raw, dict):
        raise ConfigError("line 1: scenario must be a mapping with system/field/run blocks")
    return raw, lines


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    raw, lines = parse_text(text)
    return build_config(raw, lines)


def loads_config(text: str) -> ScenarioConfig:
    raw, lines = parse_text(text)
    return build_config(raw, lines)


# validation ----------------------------------------------------------------


class _Ctx:
    def __init__(self, lines):
        self.lines = lines or {}

    def where(self, path):
        # nearest located ancestor
        p = path
        while p:
            if p in self.lines:
                return f"line {self.lines[p]}: "
            p = p.rpartition(".")[0]
        return ""

    def fail(self, path, msg):
        raise ConfigError(f"{self.where(path)}{path}: {msg}")

    def mapping(self, value, path, keys):
        required, optional = keys
        if not isinstance(value, dict):
            self.fail(path, "expected a mapping")
        for k in value:
            if k not in required | optional:
                allowed = ", ".join(sorted(required | optional))
                self.fail(_join(path, k), f"unknown key (allowed: {allowed})")
        for k in sorted(required):
            if k not in value:
                self.fail(_join(path, k), "missing required field")
        return value

    def number(self, value, path, positive=False, nonneg=False, nonzero=False, integer=False):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, f"expected a number, got {value!r}")
        v = float(value)
        if not math.isfinite(v):
            self.fail(path, "must be finite")
        if integer and v != int(v):
            self.fail(path, "must be an integer")
        if positive and not v > 0:
            self.fail(path, "must be > 0")
        if nonneg and not v >= 0:
            self.fail(path, "must be >= 0")
        if nonzero and v == 0:
            self.fail(path, "must be nonzero")
        return int(v) if integer else v


def _field(ctx, raw, path):
    ctx.mapping(raw, path, _FIELD_KEYS)
    bz = ctx.number(raw["static_z"], f"{path}.static_z")
    comps = raw.get("components", [])
    if comps is None:
        comps = []
    if not isinstance(comps, list):
        ctx.fail(f"{path}.components", "expected a list")
    out = []
    for i, c in enumerate(comps):
        cp = f"{path}.components.{i}"
        ctx.mapping(c, cp, _COMPONENT_KEYS)
        out.append(
            RotatingComponent(
                ctx.number(c["amplitude"], f"{cp}.amplitude", nonneg=True),
                ctx.number(c["frequency"], f"{cp}.frequency"),
                ctx.number(c.get("phase", 0.0), f"{cp}.phase"),
            )
        )
    return FieldTrajectory(bz, tuple(out))


def build_config(raw: dict, lines: dict = None) -> ScenarioConfig:
    ctx = _Ctx(lines)
    for k in raw:
        if k not in _TOP:
            ctx.fail(k, f"unknown block (allowed: {', '.join(sorted(_TOP))})")
    if "system" not in raw:
        ctx.fail("system", "missing required block")
    sysraw = raw["system"]
    if not isinstance(sysraw, dict):
        ctx.fail("system", "expected a mapping")
    kind = sysraw.get("kind")
    if kind not in _SYSTEM_KEYS:
        ctx.fail("system.kind", f"must be one of {', '.join(_SYSTEM_KEYS)}, got {kind!r}")
    req, opt = _SYSTEM_KEYS[kind]
    ctx.mapping(sysraw, "system", (req | {"kind"}, opt))
    try:
        if kind == "spin_half":
            system = SpinHalfSystem(ctx.number(sysraw["gamma"], "system.gamma", nonzero=True))
        else:
            system = ParityDoubletSystem(
                ctx.number(sysraw["half_splitting_B"], "system.half_splitting_B", positive=True),
                ctx.number(sysraw["d0"], "system.d0", positive=True),
                ctx.number(sysraw.get("mu0", 0.0), "system.mu0", nonneg=True),
            )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        ctx.fail("system", str(exc))

    efield = _field(ctx, raw["efield"], "efield") if "efield" in raw else None
    bfield = _field(ctx, raw["bfield"], "bfield") if "bfield" in raw else None
    if efield is None and bfield is None:
        ctx.fail("bfield", "at least one of efield/bfield is required")
    if kind == "spin_half":
        if efield is not None:
            ctx.fail("efield", "spin_half systems take no electric field")

    run = raw.get("run", {}) or {}
    ctx.mapping(run, "run", _RUN_KEYS)
    if "cycles" in run and "duration" in run:
        ctx.fail("run.duration", "give either cycles or duration, not both")
    if "duration" in run:
        T = ctx.number(run["duration"], "run.duration", nonneg=True)
    else:
        cycles = ctx.number(run.get("cycles", 1), "run.cycles", nonneg=True)
        w = _first_frequency(efield, bfield)
        if w == 0:
            ctx.fail("run.cycles", "needs a rotating component with nonzero frequency")
        T = cycles * 2 * math.pi / abs(w)

    backends = run.get("backends", list(DEFAULT_BACKENDS))
    if isinstance(backends, str):
        backends = [b.strip() for b in backends.split(",") if b.strip()]
    if not isinstance(backends, list) or not backends:
        ctx.fail("run.backends", "expected a non-empty list")
    for i, b in enumerate(backends):
        if b not in BACKENDS:
            ctx.fail(f"run.backends.{i}", f"unknown backend {b!r} (choose from {', '.join(BACKENDS)})")
    if len(set(backends)) != len(backends):
        ctx.fail("run.backends", "duplicate backend")

    evraw = run.get("evolution", {}) or {}
    ctx.mapping(evraw, "run.evolution", _EVOLUTION_KEYS)
    ev = {}
    if "steps_per_fastest_period" in evraw:
        ev["steps_per_fastest_period"] = ctx.number(
            evraw["steps_per_fastest_period"], "run.evolution.steps_per_fastest_period", integer=True
        )
    for k in ("unitarity_tolerance", "max_phase_per_step"):
        if k in evraw:
            ev[k] = ctx.number(evraw[k], f"run.evolution.{k}", positive=True)
    try:
        evolution = EvolutionConfig(**ev)
    except ValueError as exc:
        ctx.fail("run.evolution", str(exc))

    output = run.get("output")
    if output is not None and not isinstance(output, str):
        ctx.fail("run.output", "expected a path string")

    sweep_param, sweep_values = None, ()
    if "sweep" in raw:
        sw = ctx.mapping(raw["sweep"], "sweep", _SWEEP_KEYS)
        if not isinstance(sw["param"], str):
            ctx.fail("sweep.param", "expected a dotted parameter path")
        vals = sw["values"] if sw["values"] is not None else []
        if not isinstance(vals, list):
            ctx.fail("sweep.values", "expected a list")
        sweep_param = sw["param"]
        sweep_values = tuple(ctx.number(v, f"sweep.values.{i}") for i, v in enumerate(vals))

    return ScenarioConfig(
        system=system,
        efield=efield,
        bfield=bfield,
        duration=T,
        backends=tuple(backends),
        evolution=evolution,
        output=output,
        sweep_param=sweep_param,
        sweep_values=sweep_values,
        raw=raw,
        lines=lines,
    )


def _first_frequency(efield, bfield):
    for f in (efield, bfield):
        if f is not None:
            for c in f.components:
                return c.angular_frequency
    return 0.0


def with_parameter(cfg: ScenarioConfig, path: str, value: float) -> ScenarioConfig:
    """Copy of ``cfg`` with the numeric leaf at dotted ``path`` replaced."""
    raw = copy.deepcopy(cfg.raw)
    parts = path.split(".")
    node = raw
    ctx = _Ctx(cfg.lines)
    for i, part in enumerate(parts[:-1]):
        node = _child(node, part, path, ctx)
    leaf = parts[-1]
    current = _child(node, leaf, path, ctx)
    if isinstance(current, bool) or not isinstance(current, (int, float)):
        ctx.fail(path, "sweep parameter must name a numeric leaf")
    if isinstance(node, list):
        node[int(leaf)] = value
    else:
        node[leaf] = value
    return build_config(raw, cfg.lines)


def _child(node, part, path, ctx):
    if isinstance(node, dict) and part in node:
        return node[part]
    if isinstance(node, list) and part.isdigit() and int(part) < len(node):
        return node[int(part)]
    raise ConfigError(f"unknown parameter path '{path}' (no '{part}')")
