from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lbmcrack import kernels
from lbmcrack.errors import ConfigError
from lbmcrack.lattice import (LatticeSpec, LatticeState, MaterialParams, calibrate_wave_speed,
                              check_stability, compute_equilibrium, integrate_displacement,
                              macroscopic_velocity)

UNIT = MaterialParams(1.0, 1.0)


def unit_spec(nx=12, ny=10, kappa=1.0):
    # c = cs = 1 and dt = 1 when kappa = 1 and dh = 1
    return LatticeSpec.from_material(nx, ny, 1.0 * kappa, UNIT, kappa=kappa)


def test_material_and_spec_relations():
    spec = LatticeSpec.from_material(4, 4, 0.1, MaterialParams(4.0, 1.0), kappa=2.0)
    assert spec.cs == 2.0
    assert spec.c == pytest.approx(spec.dh / spec.dt, rel=0, abs=0)
    assert spec.kappa == pytest.approx(2.0)
    assert spec.lam * spec.dt == pytest.approx(2.0)
    with pytest.raises(ConfigError):
        LatticeSpec(4, 4, 0.1, 0.2, cs=1.0)   # c = 0.5 < cs
    with pytest.raises(ConfigError):
        MaterialParams(0.0, 1.0)


class TestEquilibrium:
    def test_pure_velocity(self):
        np.testing.assert_allclose(compute_equilibrium(0.0, 1.0, unit_spec()), [1, 0, 0, 0, 0])

    def test_displacement_only(self):
        # lam*dt = 2, c = cs = dt = 1: each moving direction carries w
        np.testing.assert_allclose(compute_equilibrium(0.2, 0.0, unit_spec()),
                                   [-0.8, 0.2, 0.2, 0.2, 0.2], atol=1e-15)

    def test_w_equal_c2_over_lambda(self):
        spec = unit_spec()
        w = spec.c**2 / spec.lam
        feq = compute_equilibrium(w, 0.0, spec)
        assert feq[0] == pytest.approx(-2.0)
        np.testing.assert_allclose(feq[1:], 0.5)

    @given(st.floats(-10, 10), st.floats(-10, 10), st.sampled_from([1.0, 1.5, 2.0, 3.0]))
    def test_zeroth_moment_is_velocity(self, w, wdot, kappa):
        feq = compute_equilibrium(w, wdot, unit_spec(kappa=kappa))
        assert macroscopic_velocity(feq) == pytest.approx(wdot, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("f, expected", [((1, 0, 0, 0, 0), 1.0), ((-2, 1, 1, 1, 1), 2.0),
                                         ((0, 0, 0, 0, 0), 0.0)])
def test_macroscopic_velocity(f, expected):
    assert macroscopic_velocity(f) == expected


@pytest.mark.parametrize("args, expected", [((0.0, 1.0, 0.1), 0.1), ((0.5, 0.0, 0.37), 0.5),
                                            ((1.0, -2.0, 0.25), 0.5)])
def test_integrate_displacement(args, expected):
    assert integrate_displacement(*args) == pytest.approx(expected)


class TestStreamCollide:
    def test_uniform_equilibrium_is_fixed_point(self):
        state = LatticeState(unit_spec(), periodic=True)
        state.set_fields(np.full((10, 12), 0.3), np.zeros((10, 12)))
        f0 = state.f.copy()
        state.step_periodic()
        np.testing.assert_allclose(state.f, f0, atol=1e-15)
        np.testing.assert_allclose(state.w, 0.3, atol=1e-15)

    def test_single_site_transport(self):
        spec = unit_spec()
        state = LatticeState(spec, periodic=True)
        _, ak = spec.eq_coefficients
        j, i = 5, 6
        state.w[j, i] = 1.0 / ak     # moving equilibria = 1
        state.wdot[j, i] = 2.0       # rest equilibrium = 2 - 4 = -2
        state.compute_equilibrium()
        np.testing.assert_allclose(state._feq[:, j, i], [-2, 1, 1, 1, 1])
        f_new, _, _ = state.stream_collide()
        assert f_new[1, j, i + 1] == pytest.approx(1.0)
        assert f_new[2, j + 1, i] == pytest.approx(1.0)
        assert f_new[3, j, i - 1] == pytest.approx(1.0)
        assert f_new[4, j - 1, i] == pytest.approx(1.0)
        assert f_new[0, j, i] == pytest.approx(-2.0)

    def test_severed_link_flags_missing(self):
        state = LatticeState(unit_spec())
        p = 3 * 12 + 4
        q = state.sever(p, 1)
        missing = state.missing_mask()
        jq, iq = divmod(q, 12)
        jp, ip = divmod(p, 12)
        assert missing[1, jq, iq] and missing[3, jp, ip]
        assert missing[:, jq, iq].sum() == 1 and missing[:, jp, ip].sum() == 1
        assert state.check_link_symmetry()

    def test_pure_streaming_permutes_populations(self):
        rng = np.random.default_rng(3)
        state = LatticeState(unit_spec(), periodic=True)
        f = rng.normal(size=state.f.shape)
        out = np.empty_like(f)
        wd = np.empty(state.w.shape)
        w = np.empty(state.w.shape)
        # omega = 0 switches off relaxation
        kernels.get_backend("python").stream_collide(f, np.zeros_like(f), state.intact, 0.0,
                                                     state.w, 1.0, out, wd, w)
        for a in range(5):
            np.testing.assert_allclose(np.sort(out[a].ravel()), np.sort(f[a].ravel()))

    def test_zero_state_is_fixed_point(self):
        state = LatticeState(unit_spec(kappa=2.0), periodic=True)
        for _ in range(5):
            state.step_periodic()
        assert not state.f.any() and not state.w.any()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_update_is_linear(seed, alpha, beta):
    rng = np.random.default_rng(seed)
    spec = LatticeSpec.from_material(9, 7, 0.1, UNIT, kappa=2.0)

    def run(w, wd):
        s = LatticeState(spec, periodic=True)
        s.set_fields(w, wd)
        for _ in range(6):
            s.step_periodic()
        return s.w.copy()

    w1, d1, w2, d2 = (rng.normal(size=(7, 9)) for _ in range(4))
    lhs = run(alpha * w1 + beta * w2, alpha * d1 + beta * d2)
    rhs = alpha * run(w1, d1) + beta * run(w2, d2)
    scale = max(1.0, np.abs(lhs).max())
    assert np.abs(lhs - rhs).max() <= 1e-10 * scale


def test_calibration_zero_field_stays_zero():
    state = LatticeState(LatticeSpec.from_material(30, 1, 0.1, UNIT), periodic=True)
    for _ in range(20):
        state.step_periodic()
    assert not state.w.any()


def test_pulse_splits_symmetrically():
    nx = 201
    state = LatticeState(LatticeSpec.from_material(nx, 1, 0.1, UNIT), periodic=True)
    xi = np.arange(nx) - nx // 2
    state.set_fields(np.exp(-0.5 * (xi / 5.0) ** 2)[None], np.zeros((1, nx)))
    for _ in range(100):
        state.step_periodic()
    w = state.w[0]
    np.testing.assert_allclose(w, w[::-1], atol=1e-12)
    assert w[nx // 2 + 50] > 0.45 and w[nx // 2] < 0.05


def test_default_kappa_is_stable_and_accurate():
    spec = LatticeSpec.from_material(8, 8, 1 / 16, UNIT)
    assert abs(calibrate_wave_speed(spec) / spec.cs - 1) < 0.02
    assert check_stability(spec) <= 1.0


def test_low_kappa_is_unstable_in_2d():
    spec = LatticeSpec.from_material(8, 8, 1 / 16, UNIT, kappa=1.2)
    assert check_stability(spec) > 10.0
