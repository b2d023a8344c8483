"""Time loop tying lattice, boundary system and crack growth together."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import BoundarySystem, assemble_system, fill_missing
from .config import ScenarioConfig
from .errors import ConfigError, NumericalError
from .fracture import FractureEngine
from .geometry import CrackPath, DomainOutline, Tip, shift_origin_off_crack
from .lattice import LatticeSpec, LatticeState, MaterialParams

log = logging.getLogger(__name__)

#: stage names, in the order they run within one step
STAGES = ("equilibrium", "advance_time", "stream_collide", "solve_boundary",
          "reconstruct", "integrate", "crack")

#: |w| beyond this is treated as a blow-up rather than a result
DIVERGENCE_LIMIT = 1e8


@dataclass
class TimeSeriesRecord:
    t: float
    tips: dict = field(default_factory=dict)   # side -> (K, v, da)


def build_lattice(outline: DomainOutline, dh: float, material: MaterialParams, kappa: float,
                  tau: float, crack: CrackPath | None = None) -> LatticeSpec:
    """Cell-centred lattice covering the outline's bounding box."""
    lo, hi = outline.bbox()
    nx = int(round((hi[0] - lo[0]) / dh))
    ny = int(round((hi[1] - lo[1]) / dh))
    if nx < 2 or ny < 2:
        raise ConfigError("domain is smaller than two lattice spacings")
    x0, y0 = lo[0] + 0.5 * dh, lo[1] + 0.5 * dh
    if crack is not None:
        x0, y0 = shift_origin_off_crack(x0, y0, dh, crack.start, crack.end)
    return LatticeSpec.from_material(nx, ny, dh, material, kappa=kappa, tau=tau, x0=x0, y0=y0)


class Simulation:
    """One scenario: lattice state, boundary system and (optionally) a crack.

    ``hooks`` are called as ``hook(stage, sim)`` after each stage of a step.
    """

    def __init__(self, outline: DomainOutline, material: MaterialParams, dh: float,
                 crack: CrackPath | None = None, criterion=None, kappa: float = 2.0,
                 tau: float = 1.0, backend: str | None = None, hooks=()):
        self.outline = outline
        self.material = material
        self.crack = crack
        self.backend = backend
        self.hooks = list(hooks)
        self.spec = build_lattice(outline, dh, material, kappa, tau, crack)
        if self.spec.kappa < math.sqrt(2.0):
            log.warning("kappa=%.3g is below sqrt(2); the 2D update is unstable", self.spec.kappa)
        X, Y = self.spec.positions()
        live = outline.contains(np.stack([X, Y], axis=-1))
        self.state = LatticeState(self.spec, live)
        self.engine = None
        if crack is not None:
            if criterion is None:
                raise ConfigError("a crack needs a growth criterion")
            self.engine = FractureEngine(crack, criterion, outline, material.mu, material.cs)
            self.engine.initialize(self.state)
        self.system: BoundarySystem = assemble_system(self.state, outline, crack, material.mu)
        self.state.set_fields(np.zeros_like(X), np.zeros_like(X))
        self.t = 0.0
        self.n_step = 0
        self.last_records = []
        self.last_wb = np.zeros(0)
        self.last_w_old = np.zeros(0)

    @classmethod
    def from_config(cls, cfg: ScenarioConfig, backend=None, hooks=()) -> "Simulation":
        cfg.validate()
        material = MaterialParams(cfg.material.mu, cfg.material.rho)
        outline = DomainOutline(cfg.domain.vertices, [e.to_bc() for e in cfg.domain.edges])
        crack = None
        criterion = None
        if cfg.crack is not None:
            tips = [Tip(end=t.end, direction=np.asarray(t.direction, float)) for t in cfg.crack.tips]
            crack = CrackPath(cfg.crack.vertices, tips, cfg.crack.faces.to_bc())
            criterion = cfg.criterion.build()
        return cls(outline, material, cfg.lattice.dh, crack, criterion, kappa=cfg.lattice.kappa,
                   tau=cfg.lattice.tau, backend=backend, hooks=hooks)

    def _hook(self, stage):
        for h in self.hooks:
            h(stage, self)

    def step(self):
        state = self.state
        dt = self.spec.dt
        state.compute_equilibrium(self.backend)
        self._hook("equilibrium")
        self.t = (self.n_step + 1) * dt
        self._hook("advance_time")
        f_new, _, w_stream = state.stream_collide(self.backend)
        self._hook("stream_collide")
        w_b = self.system.solve(w_stream.ravel(), self.t)
        self.last_wb = w_b
        self.last_w_old = state.w.ravel()[self.system.order].copy()
        self._hook("solve_boundary")
        fill_missing(f_new, self.system, w_b, state.w.ravel(), dt)
        self._hook("reconstruct")
        state.commit()
        self.n_step += 1
        peak = np.abs(state.w).max()
        if not np.isfinite(peak):
            raise NumericalError(f"non-finite displacement at step {self.n_step} (t={self.t:.6g})")
        if peak > DIVERGENCE_LIMIT:
            raise NumericalError(f"displacement diverged (|w|={peak:.3g}) at step {self.n_step}")
        self._hook("integrate")
        self.last_records = self.engine.step(state, self.system, self.t) if self.engine else []
        self._hook("crack")
        return self.last_records

    def n_steps_for(self, t_max: float) -> int:
        return int(math.floor(t_max / self.spec.dt + 1e-9))

    def record(self) -> TimeSeriesRecord:
        return TimeSeriesRecord(self.t, {r.side: (r.K, r.v, r.da) for r in self.last_records})

    def run(self, t_max: float, sample_stride: int = 1, on_sample=None):
        """Advance to ``t_max``; returns the list of sampled records."""
        series = []
        for _ in range(self.n_steps_for(t_max) - self.n_step):
            self.step()
            if self.n_step % sample_stride == 0:
                rec = self.record()
                series.append(rec)
                if on_sample is not None:
                    on_sample(rec, self)
        return series


def run_simulation(cfg: ScenarioConfig, backend=None, hooks=(), on_sample=None):
    sim = Simulation.from_config(cfg, backend=backend, hooks=hooks)
    series = sim.run(cfg.run.t_max, cfg.run.sample_stride, on_sample=on_sample)
    return sim, series
