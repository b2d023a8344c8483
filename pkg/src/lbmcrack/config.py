"""Scenario configuration and its JSON form."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .errors import ConfigError
from .fracture import KCriterion, Steady
from .geometry import DIRICHLET, NEUMANN, BoundaryCondition

# -- time profiles for boundary data ---------------------------------------------


def _profile(spec: dict):
    name = spec.get("name", "zero")
    if name == "zero":
        return lambda t: 0.0
    if name == "constant":
        value = float(spec["value"])
        return lambda t: value
    if name == "sin2_ramp":
        amp, t0 = float(spec["amplitude"]), float(spec["t0"])
        if t0 <= 0:
            raise ConfigError("sin2_ramp needs t0 > 0")
        return lambda t: amp * math.sin(0.5 * math.pi * t / t0) ** 2 if t < t0 else amp
    if name == "sine_pulse":
        amp, dur = float(spec["amplitude"]), float(spec["duration"])
        if dur <= 0:
            raise ConfigError("sine_pulse needs duration > 0")
        return lambda t: amp * math.sin(math.pi * t / dur) if t < dur else 0.0
    raise ConfigError(f"unknown boundary profile {name!r}")


@dataclass
class EdgeConfig:
    kind: str = NEUMANN
    profile: dict = field(default_factory=lambda: {"name": "zero"})

    def to_bc(self) -> BoundaryCondition:
        if self.kind not in (DIRICHLET, NEUMANN):
            raise ConfigError(f"edge kind must be dirichlet or neumann, got {self.kind!r}")
        prof = _profile(self.profile)
        return BoundaryCondition(self.kind, lambda t, xy: prof(t))


@dataclass
class MaterialConfig:
    mu: float = 1.0
    rho: float = 1.0


@dataclass
class LatticeConfig:
    dh: float = 1.0 / 16
    kappa: float = 2.0
    tau: float = 1.0


@dataclass
class DomainConfig:
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)   # EdgeConfig per outline edge


@dataclass
class TipConfig:
    end: str = "end"
    direction: list = field(default_factory=lambda: [1.0, 0.0])


@dataclass
class CrackConfig:
    vertices: list = field(default_factory=list)
    tips: list = field(default_factory=list)    # TipConfig
    faces: EdgeConfig = field(default_factory=EdgeConfig)


@dataclass
class CriterionConfig:
    mode: str = "steady"
    a_dot: float | None = None
    K_C: float | None = None
    v_max: float | None = None
    r0: float = 0.07
    r_min: float | None = None

    def build(self):
        if self.mode == "steady":
            if self.a_dot is None:
                raise ConfigError("steady criterion needs a_dot")
            return Steady(a_dot=self.a_dot, r0=self.r0, r_min=self.r_min)
        if self.mode == "k":
            if self.K_C is None or self.v_max is None:
                raise ConfigError("K criterion needs K_C and v_max")
            return KCriterion(K_C=self.K_C, v_max=self.v_max, r0=self.r0, r_min=self.r_min)
        raise ConfigError(f"criterion mode must be 'steady' or 'k', got {self.mode!r}")


@dataclass
class RunConfig:
    t_max: float = 1.0
    sample_stride: int = 1
    snapshot_every: int = 0


@dataclass
class ScenarioConfig:
    name: str = "scenario"
    material: MaterialConfig = field(default_factory=MaterialConfig)
    lattice: LatticeConfig = field(default_factory=LatticeConfig)
    domain: DomainConfig = field(default_factory=DomainConfig)
    crack: CrackConfig | None = None
    criterion: CriterionConfig = field(default_factory=CriterionConfig)
    run: RunConfig = field(default_factory=RunConfig)

    def validate(self):
        if self.run.t_max <= 0:
            raise ConfigError("t_max must be positive")
        if self.run.sample_stride < 1:
            raise ConfigError("sample_stride must be >= 1")
        if self.lattice.dh <= 0:
            raise ConfigError("dh must be positive")
        if len(self.domain.vertices) < 3 or len(self.domain.edges) != len(self.domain.vertices):
            raise ConfigError("domain needs >= 3 vertices and one edge entry per vertex")
        return self

    # -- serialisation -------------------------------------------------
    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        try:
            domain = d.get("domain", {})
            crack = d.get("crack")
            cfg = cls(
                name=d.get("name", "scenario"),
                material=MaterialConfig(**d.get("material", {})),
                lattice=LatticeConfig(**d.get("lattice", {})),
                domain=DomainConfig(vertices=[list(map(float, v)) for v in domain.get("vertices", [])],
                                    edges=[EdgeConfig(**e) for e in domain.get("edges", [])]),
                crack=None if crack is None else CrackConfig(
                    vertices=[list(map(float, v)) for v in crack.get("vertices", [])],
                    tips=[TipConfig(**t) for t in crack.get("tips", [])],
                    faces=EdgeConfig(**crack.get("faces", {})),
                ),
                criterion=CriterionConfig(**d.get("criterion", {})),
                run=RunConfig(**d.get("run", {})),
            )
        except (TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(f"malformed scenario: {exc}") from exc
        return cfg.validate()

    @classmethod
    def from_json(cls, text: str) -> "ScenarioConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("scenario must be a JSON object")
        return cls.from_dict(data)


def load_config(path) -> ScenarioConfig:
    try:
        with open(path) as fh:
            return ScenarioConfig.from_json(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
