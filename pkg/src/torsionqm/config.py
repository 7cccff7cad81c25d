"""INI configuration for the command-line runs.

Grammar (all sections optional, every key optional, unknown keys rejected)::

    [packet]            # packet sent through the slits
    a = 0.1             # nm
    x0 = 0.0 0.0        # nm, two numbers
    k0 = 50.0 0.0       # 1/nm
    mass = 1.0
    hbar = 1.0

    [experiment]
    separation = 10.0
    aperture = 0.1      # must equal packet a
    screen_distance = 20.0
    screen_range = -15.0 15.0
    samples = 3001
    corrected_branch = 2

    [defects]
    epsilon = 0.1
    positions = 0.0 0.0 ; 1.0 2.0   # pairs separated by ';'
    cut_angle = 3.141592653589793

    [probability]       # packet crossing the defect for `probability`
    a = 1.0
    x0 = -3.0 0.0
    k0 = 3.0 0.0
    t_start = 0.0
    t_stop = 2.0
    steps = 21
    grid_n = 801

    [output]
    path = pattern.csv
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import ConfigError
from .geometry import DefectSet
from .interference import SlitExperiment
from .wavefunction import PacketParams

_DEFAULT_PACKET = PacketParams(0.1, (0.0, 0.0), (50.0, 0.0))


@dataclass(frozen=True)
class ProbabilityRun:
    packet: PacketParams = PacketParams(1.0, (-3.0, 0.0), (3.0, 0.0))
    t_start: float = 0.0
    t_stop: float = 2.0
    steps: int = 21
    grid_n: int = 801

    def __post_init__(self):
        if not self.t_stop > self.t_start or self.steps < 2 or self.grid_n < 3:
            raise ValueError("probability run needs t_stop > t_start, steps >= 2, grid_n >= 3")

    def times(self):
        return np.linspace(self.t_start, self.t_stop, self.steps)


@dataclass(frozen=True)
class ExperimentConfig:
    packet: PacketParams = _DEFAULT_PACKET
    experiment: SlitExperiment = SlitExperiment()
    defects: DefectSet = DefectSet.single(0.1)
    probability: ProbabilityRun = ProbabilityRun()
    output: str | None = None

    def __post_init__(self):
        if self.experiment.aperture != self.packet.a:
            raise ConfigError(
                f"aperture {self.experiment.aperture} must equal the packet width {self.packet.a}"
            )

    @property
    def epsilon(self):
        return self.defects.epsilon

    def require_single_defect(self):
        if len(self.defects) != 1:
            raise ConfigError("the packet experiments support exactly one defect")

    def with_overrides(self, epsilon=None, samples=None) -> "ExperimentConfig":
        cfg = self
        try:
            if epsilon is not None:
                cfg = replace(cfg, defects=replace(cfg.defects, epsilon=epsilon))
            if samples is not None:
                cfg = replace(cfg, experiment=replace(cfg.experiment, samples=samples))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return cfg


def _vec(text, n=2):
    parts = text.split()
    if len(parts) != n:
        raise ConfigError(f"expected {n} numbers, got {text!r}")
    return tuple(_num(p) for p in parts)


def _num(text):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"non-finite value {text!r}")
    return v


def _int(text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}") from None


def _fmt(v):
    if isinstance(v, tuple):
        return " ".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


_PACKET_KEYS = {"a": _num, "x0": _vec, "k0": _vec, "mass": _num, "hbar": _num}
_EXPERIMENT_KEYS = {
    "separation": _num,
    "aperture": _num,
    "screen_distance": _num,
    "screen_range": _vec,
    "samples": _int,
    "corrected_branch": _int,
}
_PROB_KEYS = {"a": _num, "x0": _vec, "k0": _vec, "t_start": _num, "t_stop": _num, "steps": _int, "grid_n": _int}
_SECTIONS = {"packet", "experiment", "defects", "probability", "output"}


def _section(cp, name, spec):
    if not cp.has_section(name):
        return {}
    out = {}
    for key, raw in cp.items(name):
        if key not in spec:
            raise ConfigError(f"unknown key {key!r} in [{name}]")
        out[key] = spec[key](raw)
    return out


def _positions(text):
    pairs = [p for p in text.split(";") if p.strip()]
    if not pairs:
        raise ConfigError("defects.positions is empty")
    return np.array([_vec(p) for p in pairs])


def parse_config(text: str) -> ExperimentConfig:
    # ';' separates position pairs, so only '#' starts an inline comment
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",), default_section="\0")
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    unknown = set(cp.sections()) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    try:
        pk = _section(cp, "packet", _PACKET_KEYS)
        packet = replace(_DEFAULT_PACKET, **pk)
        ex = _section(cp, "experiment", _EXPERIMENT_KEYS)
        ex.setdefault("aperture", packet.a)
        experiment = SlitExperiment(**ex)

        d = {}
        if cp.has_section("defects"):
            for key, raw in cp.items("defects"):
                if key == "epsilon":
                    d["epsilon"] = _num(raw)
                elif key == "cut_angle":
                    d["cut_angle"] = _num(raw)
                elif key == "positions":
                    d["positions"] = _positions(raw)
                else:
                    raise ConfigError(f"unknown key {key!r} in [defects]")
        defects = DefectSet(
            d.get("positions", np.zeros((1, 2))), d.get("epsilon", 0.1), d.get("cut_angle", math.pi)
        )

        pr = _section(cp, "probability", _PROB_KEYS)
        base = ProbabilityRun()
        pp = {k: pr.pop(k) for k in ("a", "x0", "k0") if k in pr}
        probability = replace(base, packet=replace(base.packet, **pp), **pr)

        output = None
        if cp.has_section("output"):
            for key, raw in cp.items("output"):
                if key != "path":
                    raise ConfigError(f"unknown key {key!r} in [output]")
                output = raw.strip() or None
        return ExperimentConfig(packet, experiment, defects, probability, output)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def serialize_config(cfg: ExperimentConfig) -> str:
    lines = ["[packet]"]
    for f in fields(PacketParams):
        lines.append(f"{f.name} = {_fmt(getattr(cfg.packet, f.name))}")
    lines += ["", "[experiment]"]
    for f in fields(SlitExperiment):
        lines.append(f"{f.name} = {_fmt(getattr(cfg.experiment, f.name))}")
    lines += ["", "[defects]", f"epsilon = {_fmt(cfg.defects.epsilon)}"]
    lines.append("positions = " + " ; ".join(_fmt(tuple(p)) for p in cfg.defects.positions))
    lines.append(f"cut_angle = {_fmt(cfg.defects.cut_angle)}")
    pr = cfg.probability
    lines += ["", "[probability]"]
    for k in ("a", "x0", "k0"):
        lines.append(f"{k} = {_fmt(getattr(pr.packet, k))}")
    for k in ("t_start", "t_stop", "steps", "grid_n"):
        lines.append(f"{k} = {_fmt(getattr(pr, k))}")
    if cfg.output:
        lines += ["", "[output]", f"path = {cfg.output}"]
    return "\n".join(lines) + "\n"
