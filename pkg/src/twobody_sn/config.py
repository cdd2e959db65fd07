"""Scenario and scan configuration, stored as YAML."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path

import yaml

from .errors import ConfigError
from .initial_states import KINDS, PROFILE_KINDS

SOLVERS = ("full", "hartree", "both")
DEFAULT_RATIOS = (1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0)


@dataclass
class GridConfig:
    N: int = 256
    L: float = 40.0


@dataclass
class MassConfig:
    mu1: float = 1.0
    mu2: float = 1.0


@dataclass
class CouplingConfig:
    kappa: float = 1.0
    gamma: float = 1.0


@dataclass
class InitialConfig:
    kind: str = "I"
    profile: str = "stationary"
    R0: float = 6.0
    sigma0: float = 1.0


@dataclass
class TimeConfig:
    dt: float = 0.01
    t_final: float = 40.0
    sample_every: int = 10


@dataclass
class OutputConfig:
    csv: str = "timeseries.csv"
    dump_every: float = 10.0  # time between field dumps; 0 disables
    wigner: bool = False  # also dump W_rel at every field dump
    negativity: bool = False  # track Wigner negativities in the CSV


@dataclass
class ScenarioConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    epsilon: float = 0.2
    masses: MassConfig = field(default_factory=MassConfig)
    couplings: CouplingConfig = field(default_factory=CouplingConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    time: TimeConfig = field(default_factory=TimeConfig)
    outputs: OutputConfig = field(default_factory=OutputConfig)
    solver: str = "full"

    def validate(self) -> "ScenarioConfig":
        g = self.grid
        if int(g.N) != g.N or g.N < 8 or g.N % 2 or g.N & (g.N - 1):
            raise ConfigError(f"grid.N must be a power of two >= 8, got {g.N!r}")
        _positive("grid.L", g.L)
        _positive("epsilon", self.epsilon)
        _positive("masses.mu1", self.masses.mu1)
        _positive("masses.mu2", self.masses.mu2)
        for name in ("kappa", "gamma"):
            v = getattr(self.couplings, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise ConfigError(f"couplings.{name} must be finite and >= 0, got {v!r}")
        ini = self.initial
        if ini.kind not in KINDS:
            raise ConfigError(f"initial.kind must be one of {KINDS}, got {ini.kind!r}")
        if ini.profile not in PROFILE_KINDS:
            raise ConfigError(f"initial.profile must be one of {PROFILE_KINDS}, got {ini.profile!r}")
        _positive("initial.R0", ini.R0)
        if ini.R0 >= g.L / 2:
            raise ConfigError(f"initial.R0={ini.R0} must be below L/2={g.L / 2}")
        _positive("initial.sigma0", ini.sigma0)
        if ini.profile == "stationary" and self.couplings.kappa == 0:
            raise ConfigError("stationary profiles need kappa > 0")
        _positive("time.dt", self.time.dt)
        _positive("time.t_final", self.time.t_final)
        if int(self.time.sample_every) != self.time.sample_every or self.time.sample_every < 1:
            raise ConfigError("time.sample_every must be an integer >= 1")
        if self.outputs.dump_every < 0:
            raise ConfigError("outputs.dump_every must be >= 0")
        if self.solver not in SOLVERS:
            raise ConfigError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        return _build(cls, data or {}, "").validate()

    def replace(self, **updates) -> "ScenarioConfig":
        """Copy with dotted-path overrides, e.g. ``replace(**{"grid.N": 512})``."""
        d = self.to_dict()
        for key, value in updates.items():
            node = d
            *head, last = key.split(".")
            for part in head:
                node = node[part]
            if last not in node:
                raise ConfigError(f"unknown config field {key!r}")
            node[last] = value
        return ScenarioConfig.from_dict(d)


@dataclass
class ScanConfig:
    base: ScenarioConfig = field(default_factory=ScenarioConfig)
    ratios: list = field(default_factory=lambda: list(DEFAULT_RATIOS))
    profiles: list = field(default_factory=lambda: list(PROFILE_KINDS))

    def validate(self) -> "ScanConfig":
        self.base.validate()
        if not self.ratios:
            raise ConfigError("scan needs at least one mass ratio")
        for r in self.ratios:
            if not (isinstance(r, (int, float)) and r >= 1):
                raise ConfigError(f"mass ratios must be >= 1, got {r!r}")
        for p in self.profiles:
            if p not in PROFILE_KINDS:
                raise ConfigError(f"unknown profile {p!r}")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ScanConfig":
        data = dict(data or {})
        base = ScenarioConfig.from_dict(data.pop("base", {}))
        unknown = set(data) - {"ratios", "profiles"}
        if unknown:
            raise ConfigError(f"unknown scan fields {sorted(unknown)}")
        scan = cls(base=base, **{k: list(v) for k, v in data.items()})
        return scan.validate()


def _positive(name, v):
    if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
        raise ConfigError(f"{name} must be a finite positive number, got {v!r}")


def _build(cls, data, prefix):
    if not isinstance(data, dict):
        raise ConfigError(f"{prefix or 'config'} must be a mapping")
    known = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(f"unknown fields {sorted(prefix + k for k in unknown)}")
    kwargs = {}
    defaults = cls()
    for name, f in known.items():
        if name not in data:
            continue
        current = getattr(defaults, name)
        if is_dataclass(current):
            kwargs[name] = _build(type(current), data[name], f"{prefix}{name}.")
        else:
            value = data[name]
            if isinstance(current, bool) and not isinstance(value, bool):
                raise ConfigError(f"{prefix}{name} must be a boolean")
            if isinstance(current, float) and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            kwargs[name] = value
    return cls(**kwargs)


def load_config(path) -> ScenarioConfig:
    return ScenarioConfig.from_dict(_read_yaml(path))


def load_scan(path) -> ScanConfig:
    return ScanConfig.from_dict(_read_yaml(path))


def dump_config(cfg, path=None) -> str:
    text = yaml.safe_dump(cfg.to_dict(), sort_keys=False)
    if path is not None:
        Path(path).write_text(text)
    return text


def _read_yaml(path):
    try:
        return yaml.safe_load(Path(path).read_text()) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
