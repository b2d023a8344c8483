from __future__ import annotations

import numpy as np
import pytest

from lbmcrack.errors import NumericalError
from lbmcrack.experiments import k_criterion_config, steady_strip_config
from lbmcrack.simulation import STAGES, Simulation, run_simulation


def small_strip(v=0.4, dh=1 / 8, t_max=3.0):
    cfg = steady_strip_config(v, dh=dh, t0=1.0, b=10.0, r_min=0.25)
    cfg.run.t_max = t_max
    return cfg


def static_strip(dh, t_max=12.0):
    cfg = steady_strip_config(0.2, dh=dh, b=6.0, t0=3.0, r_min=0.25)
    cfg.criterion.mode, cfg.criterion.K_C, cfg.criterion.v_max = "k", 1e9, 0.5
    cfg.run.t_max = t_max
    return cfg


def test_stage_order_every_step():
    seen = []
    sim = Simulation.from_config(small_strip(), hooks=[lambda stage, s: seen.append(stage)])
    sim.run(10 * sim.spec.dt)
    assert seen == list(STAGES) * 10


def test_homogeneous_problem_stays_quiet():
    cfg = small_strip()
    for e in cfg.domain.edges:
        e.kind, e.profile = "dirichlet", {"name": "zero"}
    cfg.criterion.mode, cfg.criterion.K_C, cfg.criterion.v_max = "k", 0.01, 0.5
    sim, series = run_simulation(cfg)
    assert all(r.tips["right"] == (0.0, 0.0, 0.0) for r in series)
    assert not sim.state.w.any()


def test_runs_are_repeatable():
    a = run_simulation(small_strip())[1]
    b = run_simulation(small_strip())[1]
    assert [(r.t, r.tips) for r in a] == [(r.t, r.tips) for r in b]


def test_time_is_exact_multiple_of_step():
    sim, series = run_simulation(small_strip(t_max=1.0))
    dt = sim.spec.dt
    assert [r.t for r in series] == [(k + 1) * dt for k in range(len(series))]
    assert np.all(np.diff([r.tips["right"][2] for r in series]) >= 0)


def test_crack_advances_at_prescribed_rate():
    sim, series = run_simulation(small_strip(v=0.4, t_max=2.0))
    assert series[-1].tips["right"][2] == pytest.approx(0.4 * series[-1].t, rel=1e-9)


def test_sample_stride():
    cfg = small_strip(t_max=1.0)
    cfg.run.sample_stride = 4
    sim, series = run_simulation(cfg)
    assert len(series) == sim.n_step // 4


def test_refinement_does_not_diverge():
    means = []
    for dh in (1 / 16, 1 / 32):
        _, series = run_simulation(static_strip(dh))
        t = np.array([r.t for r in series])
        K = np.array([r.tips["right"][0] for r in series])
        means.append(K[t > 6].mean())
    assert abs(means[1] / means[0] - 1) < 0.05


def test_nan_raises_numerical_error():
    sim = Simulation.from_config(small_strip())
    sim.state.w[3, 3] = np.nan
    with pytest.raises(NumericalError):
        sim.step()


def test_k_criterion_lattice_size():
    sim = Simulation.from_config(k_criterion_config(dh=2.0**-4))
    assert (sim.spec.nx, sim.spec.ny) == (128, 48)
