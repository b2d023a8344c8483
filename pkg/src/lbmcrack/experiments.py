"""Built-in validation scenarios: steady growth in a strip and growth
governed by the K criterion under a sine pulse."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import StripProblem, steady_strip_sif
from .config import (CrackConfig, CriterionConfig, DomainConfig, EdgeConfig, LatticeConfig,
                     MaterialConfig, RunConfig, ScenarioConfig, TipConfig)
from .errors import ConfigError
from .simulation import Simulation

#: evaluation distance (in lattice spacings) per relative crack speed
STEADY_RMIN_SITES = {0.2: 1.5, 0.4: 2.25, 0.6: 4.0, 0.8: 8.0}
WINDOW = 15.0          # quasi-stationary window, in L/cs
N_SAMPLES = 300


@dataclass
class Stats:
    mean: float
    std: float
    median: float
    minus25: float
    plus75: float


def stats_summary(samples) -> Stats:
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two samples")
    p25, med, p75 = np.percentile(x, [25, 50, 75])
    return Stats(mean=float(x.mean()), std=float(x.std()), median=float(med),
                 minus25=float(med - p25), plus75=float(p75 - med))


def default_t0(v: float) -> float:
    """Load ramp duration in L/cs: 5 at v=0.2, growing in proportion to v."""
    return 5.0 * max(1.0, v / 0.2)


def steady_strip_config(v: float, dh: float = 1 / 16, r_min: float | None = None, t0=None,
                        w0: float = 0.2, L: float = 1.0, mu: float = 1.0, rho: float = 1.0,
                        kappa: float = 2.0, b: float | None = None) -> ScenarioConfig:
    """Strip of height 2L with an edge crack of length L/2 at mid-height."""
    if not 0 < v < 1:
        raise ConfigError(f"v must lie in (0, 1), got {v}")
    cs = math.sqrt(mu / rho)
    t0 = default_t0(v) * L / cs if t0 is None else t0
    t_f = t0 + WINDOW * L / cs
    b_min = v * cs * t_f + 2 * L
    if b is None:
        b = (math.floor(b_min / L) + 1) * L
    if b <= b_min:
        raise ConfigError(f"strip length {b} too short; need > {b_min:.4g}")
    if r_min is None:
        r_min = STEADY_RMIN_SITES.get(round(v, 6), None)
        r_min = None if r_min is None else r_min * dh
    ramp = {"name": "sin2_ramp", "t0": t0}
    free = EdgeConfig("neumann", {"name": "zero"})
    return ScenarioConfig(
        name=f"steady_v{v:g}",
        material=MaterialConfig(mu, rho),
        lattice=LatticeConfig(dh=dh, kappa=kappa),
        domain=DomainConfig(
            vertices=[[0.0, -L], [b, -L], [b, L], [0.0, L]],
            edges=[EdgeConfig("dirichlet", dict(ramp, amplitude=-0.5 * w0)), free,
                   EdgeConfig("dirichlet", dict(ramp, amplitude=0.5 * w0)), free],
        ),
        crack=CrackConfig(vertices=[[0.0, 0.0], [0.5 * L, 0.0]],
                          tips=[TipConfig("end", [1.0, 0.0])], faces=free),
        criterion=CriterionConfig(mode="steady", a_dot=v * cs, r0=0.07 * L, r_min=r_min),
        run=RunConfig(t_max=t_f, sample_stride=1),
    )


@dataclass
class SteadyResult:
    v: float
    K_theo: float
    stats: Stats
    samples: np.ndarray
    times: np.ndarray
    series: list


def window_samples(times, values, t_f, window, n=N_SAMPLES):
    """``n`` evenly spaced samples (nearest recorded step) from the final window."""
    times = np.asarray(times)
    values = np.asarray(values)
    targets = np.linspace(t_f - window, t_f, n)
    idx = np.clip(np.searchsorted(times, targets), 0, len(times) - 1)
    return times[idx], values[idx]


def experiment_steady_strip(v: float, backend=None, **overrides) -> SteadyResult:
    cfg = steady_strip_config(v, **overrides)
    L = overrides.get("L", 1.0)
    w0 = overrides.get("w0", 0.2)
    mu = overrides.get("mu", 1.0)
    cs = math.sqrt(mu / overrides.get("rho", 1.0))
    sim = Simulation.from_config(cfg, backend=backend)
    series = sim.run(cfg.run.t_max, cfg.run.sample_stride)
    times = np.array([r.t for r in series])
    K = np.array([abs(r.tips["right"][0]) for r in series])
    ts, ks = window_samples(times, K, times[-1], WINDOW * L / cs)
    k_theo = abs(steady_strip_sif(StripProblem(L=L, w0=w0, mu=mu, v=v)))
    return SteadyResult(v=v, K_theo=k_theo, stats=stats_summary(ks), samples=ks, times=ts,
                        series=series)


# -- K criterion --------------------------------------------------------------

KCRIT_W0 = 0.012       # load amplitude; see README for how it was chosen
KCRIT_T_MAX = 30.0


def k_criterion_config(dh: float = 2.0**-6, w0: float = KCRIT_W0, t_max: float = KCRIT_T_MAX,
                       K_C: float = 0.006, v_max: float = 0.85, L: float = 1.0, mu: float = 1.0,
                       rho: float = 1.0, kappa: float = 2.0, r0: float | None = None,
                       sample_stride: int = 1) -> ScenarioConfig:
    """3L x 8L plate, crack of length L at 1L below the loaded top edge."""
    cs = math.sqrt(mu / rho)
    free = EdgeConfig("neumann", {"name": "zero"})
    top = EdgeConfig("dirichlet", {"name": "sine_pulse", "amplitude": w0, "duration": 8.0 * L / cs})
    bottom = EdgeConfig("dirichlet", {"name": "zero"})
    return ScenarioConfig(
        name="k_criterion",
        material=MaterialConfig(mu, rho),
        lattice=LatticeConfig(dh=dh, kappa=kappa),
        domain=DomainConfig(
            vertices=[[-4 * L, -2 * L], [4 * L, -2 * L], [4 * L, L], [-4 * L, L]],
            edges=[bottom, free, top, free],
        ),
        crack=CrackConfig(vertices=[[-0.5 * L, 0.0], [0.5 * L, 0.0]],
                          tips=[TipConfig("start", [-1.0, 0.0]), TipConfig("end", [1.0, 0.0])],
                          faces=free),
        criterion=CriterionConfig(mode="k", K_C=K_C * mu * math.sqrt(L), v_max=v_max,
                                  r0=0.07 * L if r0 is None else r0),
        run=RunConfig(t_max=t_max * L / cs, sample_stride=sample_stride),
    )


def experiment_k_criterion(backend=None, on_sample=None, hooks=(), check_initiation=True,
                           **overrides):
    """Run the pulse-loaded plate; returns ``(sim, series)``.

    With ``check_initiation`` the run aborts with a ConfigError when the
    incident pulse has fully reached the crack without any tip exceeding
    K_C, since the rest of the run would be uneventful.
    """
    cfg = k_criterion_config(**overrides)
    sim = Simulation.from_config(cfg, backend=backend, hooks=hooks)
    L = overrides.get("L", 1.0)
    cs = math.sqrt(overrides.get("mu", 1.0) / overrides.get("rho", 1.0))
    K_C = cfg.criterion.K_C
    t_check = min(cfg.run.t_max, (8.0 + 1.0) * L / cs)   # pulse length plus travel to the crack
    series = sim.run(t_check, cfg.run.sample_stride, on_sample=on_sample)
    if check_initiation:
        peak = max((k for r in series for k, _, _ in r.tips.values()), default=0.0)
        if peak <= K_C:
            raise ConfigError(f"incident wave peaked at K={peak:.4g} <= K_C={K_C:.4g}; "
                              f"raise w0 (currently {cfg.domain.edges[2].profile['amplitude']})")
    series += sim.run(cfg.run.t_max, cfg.run.sample_stride, on_sample=on_sample)
    return sim, series
