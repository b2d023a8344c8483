"""D2Q5 lattice Boltzmann core for the 2D wave equation.

The displacement ``w`` of antiplane shear obeys ``w_tt = cs**2 (w_xx + w_yy)``.
Each site carries five populations whose sum is the particle velocity
``wdot``; the displacement is advanced by explicit Euler integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, NumericalError, StreamingError

#: lattice velocity directions in units of the lattice speed
DIRECTIONS = np.array([(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)])
OPPOSITE = (0, 3, 4, 1, 2)
DEFAULT_KAPPA = 2.0


@dataclass(frozen=True)
class MaterialParams:
    mu: float
    rho: float

    def __post_init__(self):
        if not (self.mu > 0 and self.rho > 0):
            raise ConfigError(f"mu and rho must be positive, got {self.mu}, {self.rho}")

    @property
    def cs(self) -> float:
        return math.sqrt(self.mu / self.rho)


@dataclass(frozen=True)
class LatticeSpec:
    """Grid size, spacing and time step.

    ``tau`` is the relaxation time in units of ``dt`` so the default
    ``tau=1`` gives ``lam * dt == 2``.
    """

    nx: int
    ny: int
    dh: float
    dt: float
    cs: float
    tau: float = 1.0
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ConfigError("lattice needs at least one site per axis")
        if not (self.dh > 0 and self.dt > 0 and self.cs > 0):
            raise ConfigError("dh, dt and cs must be positive")
        if self.tau <= 0.5:
            raise ConfigError(f"tau must exceed 1/2, got {self.tau}")
        if self.kappa < 1.0:
            raise ConfigError(f"lattice speed must not be below cs (kappa={self.kappa:.4g})")

    @classmethod
    def from_material(cls, nx, ny, dh, material: MaterialParams, kappa=DEFAULT_KAPPA,
                      tau=1.0, x0=0.0, y0=0.0) -> "LatticeSpec":
        cs = material.cs
        return cls(nx=nx, ny=ny, dh=dh, dt=dh / (kappa * cs), cs=cs, tau=tau, x0=x0, y0=y0)

    @property
    def c(self) -> float:
        return self.dh / self.dt

    @property
    def kappa(self) -> float:
        return self.c / self.cs

    @property
    def lam(self) -> float:
        return 1.0 / (self.dt * (self.tau - 0.5))

    @property
    def omega(self) -> float:
        return 1.0 / self.tau

    @property
    def eq_coefficients(self) -> tuple[float, float]:
        """``(a0, ak)`` with ``feq0 = wdot - a0*w`` and ``feqk = ak*w``."""
        ak = self.lam * self.cs**2 / (2.0 * self.c**2)
        return 4.0 * ak, ak

    @property
    def n_sites(self) -> int:
        return self.nx * self.ny

    def positions(self) -> tuple[np.ndarray, np.ndarray]:
        """Site coordinates as two ``(ny, nx)`` arrays."""
        x = self.x0 + self.dh * np.arange(self.nx)
        y = self.y0 + self.dh * np.arange(self.ny)
        return np.meshgrid(x, y)

    def position(self, p: int) -> np.ndarray:
        j, i = divmod(int(p), self.nx)
        return np.array([self.x0 + self.dh * i, self.y0 + self.dh * j])


def compute_equilibrium(w, wdot, spec: LatticeSpec) -> np.ndarray:
    """Equilibrium populations, stacked along a new leading axis of length 5."""
    a0, ak = spec.eq_coefficients
    w = np.asarray(w, dtype=float)
    wdot = np.asarray(wdot, dtype=float)
    rest = wdot - a0 * w
    moving = ak * w
    return np.stack([rest, moving, moving, moving, moving])


def macroscopic_velocity(f) -> np.ndarray | float:
    f = np.asarray(f, dtype=float)
    return f[0] + f[1] + f[2] + f[3] + f[4]


def integrate_displacement(w_prev, wdot, dt):
    return w_prev + dt * wdot


class LatticeState:
    """Populations, fields and the link mask of one lattice.

    ``intact[a, j, i]`` is True when the link from site ``(i, j)`` towards
    direction ``a`` exists; ``intact[0]`` doubles as the live-site mask.
    Distributions are double-buffered so a step is a pure function of the
    previous state.
    """

    def __init__(self, spec: LatticeSpec, live: np.ndarray | None = None, periodic=False):
        self.spec = spec
        shape = (spec.ny, spec.nx)
        self.f = np.zeros((5,) + shape)
        self.w = np.zeros(shape)
        self.wdot = np.zeros(shape)
        self._f_next = np.zeros_like(self.f)
        self._feq = np.zeros_like(self.f)
        self._w_next = np.zeros(shape)
        self._wdot_next = np.zeros(shape)
        live = np.ones(shape, dtype=bool) if live is None else np.asarray(live, dtype=bool)
        if live.shape != shape:
            raise ConfigError(f"live mask shape {live.shape} != {shape}")
        self.intact = np.zeros((5,) + shape, dtype=bool)
        self.intact[0] = live
        for a in range(1, 5):
            dx, dy = DIRECTIONS[a]
            nb_live = np.roll(live, (-dy, -dx), axis=(0, 1))
            mask = live & nb_live
            if not periodic:
                if dx == 1:
                    mask[:, -1] = False
                elif dx == -1:
                    mask[:, 0] = False
                elif dy == 1:
                    mask[-1, :] = False
                else:
                    mask[0, :] = False
            self.intact[a] = mask

    @property
    def live(self) -> np.ndarray:
        return self.intact[0]

    # -- link bookkeeping -------------------------------------------------
    def neighbor(self, p: int, a: int) -> int:
        nx, ny = self.spec.nx, self.spec.ny
        j, i = divmod(p, nx)
        dx, dy = DIRECTIONS[a]
        return ((j + dy) % ny) * nx + (i + dx) % nx

    def link_intact(self, p: int, a: int) -> bool:
        j, i = divmod(p, self.spec.nx)
        return bool(self.intact[a, j, i])

    def sever(self, p: int, a: int) -> int:
        """Cut the link ``p -> p + c_a`` on both sides; return the neighbor."""
        q = self.neighbor(p, a)
        nx = self.spec.nx
        j, i = divmod(p, nx)
        jq, iq = divmod(q, nx)
        self.intact[a, j, i] = False
        self.intact[OPPOSITE[a], jq, iq] = False
        return q

    def boundary_mask(self) -> np.ndarray:
        """Live sites with at least one missing link."""
        return self.live & ~np.all(self.intact[1:], axis=0)

    def missing_mask(self) -> np.ndarray:
        """``missing[a]`` flags live sites whose incoming population ``a`` cannot stream in."""
        missing = np.zeros_like(self.intact)
        for a in range(1, 5):
            missing[a] = self.live & ~self.intact[OPPOSITE[a]]
        return missing

    def check_link_symmetry(self) -> bool:
        for a in (1, 2):
            dx, dy = DIRECTIONS[a]
            back = np.roll(self.intact[OPPOSITE[a]], (-dy, -dx), axis=(0, 1))
            if not np.array_equal(self.intact[a], back):
                return False
        return True

    # -- initialisation ---------------------------------------------------
    def set_fields(self, w, wdot):
        live = self.live
        self.w[...] = np.where(live, w, 0.0)
        self.wdot[...] = np.where(live, wdot, 0.0)
        self.f[...] = compute_equilibrium(self.w, self.wdot, self.spec) * live

    def copy(self) -> "LatticeState":
        new = LatticeState.__new__(LatticeState)
        new.__dict__.update({k: (v.copy() if isinstance(v, np.ndarray) else v)
                             for k, v in self.__dict__.items()})
        return new

    # -- update stages ----------------------------------------------------
    def compute_equilibrium(self, backend=None):
        a0, ak = self.spec.eq_coefficients
        kernels.get_backend(backend).equilibrium(self.w, self.wdot, a0, ak, self._feq)
        return self._feq

    def stream_collide(self, backend=None):
        """Relax and stream; returns ``(f_new, wdot_stream, w_stream)``.

        The returned buffers are scratch space owned by the state. Values at
        boundary sites are incomplete until missing slots are filled.
        """
        impl = kernels.get_backend(backend)
        intact = self.intact.view(np.uint8) if impl is not kernels._pykernels else self.intact
        impl.stream_collide(self.f, self._feq, intact, self.spec.omega, self.w,
                            self.spec.dt, self._f_next, self._wdot_next, self._w_next)
        return self._f_next, self._wdot_next, self._w_next

    def commit(self):
        """Integrate and swap buffers after boundary populations are complete."""
        f_new = self._f_next
        wdot = macroscopic_velocity(f_new)
        w = integrate_displacement(self.w, wdot, self.spec.dt)
        self._f_next, self.f = self.f, f_new
        self.wdot[...] = wdot
        self.w[...] = w

    def step_periodic(self, backend=None):
        """One full update without boundary sites (all-interior lattices)."""
        self.compute_equilibrium(backend)
        self.stream_collide(backend)
        missing = self.missing_mask()
        if np.any(missing & ~self.boundary_mask()[None]):
            raise StreamingError("interior site left with a missing population")
        if np.any(self.boundary_mask()):
            raise StreamingError("step_periodic called on a lattice with boundary sites")
        self.commit()


def stream_collide(state: LatticeState, spec: LatticeSpec | None = None, backend=None):
    """Functional form: equilibrium, relaxation and streaming of ``state``.

    Returns ``(f_new, missing)`` where ``missing[a]`` flags slots that
    could not be fed by streaming.
    """
    if spec is not None and spec != state.spec:
        raise ConfigError("spec does not match the state's lattice")
    state.compute_equilibrium(backend)
    f_new, _, _ = state.stream_collide(backend)
    return f_new.copy(), state.missing_mask()


# -- wave-speed calibration -----------------------------------------------

def _pulse_peak(w: np.ndarray, x: np.ndarray) -> float:
    k = int(np.argmax(w))
    if 0 < k < len(w) - 1:
        ym, y0, yp = w[k - 1], w[k], w[k + 1]
        denom = ym - 2 * y0 + yp
        shift = 0.5 * (ym - yp) / denom if denom != 0 else 0.0
        return x[k] + shift * (x[1] - x[0])
    return x[k]


def calibrate_wave_speed(spec: LatticeSpec, travel_sites=240, width_sites=6.0,
                         min_amplitude=0.3, backend=None) -> float:
    """Measure the propagation speed of a Gaussian pulse on a periodic 1D strip.

    Only ``spec.dh``, ``spec.dt``, ``spec.cs`` and ``spec.tau`` are used;
    the strip is sized to fit ``travel_sites`` of travel per pulse.
    Raises NumericalError when the pulse disperses below ``min_amplitude``
    of its expected half height.
    """
    nx = 2 * (travel_sites + 20 * int(width_sites)) + 1
    strip = LatticeSpec(nx=nx, ny=1, dh=spec.dh, dt=spec.dt, cs=spec.cs, tau=spec.tau)
    state = LatticeState(strip, periodic=True)
    xi = np.arange(nx) - nx // 2
    w0 = np.exp(-0.5 * (xi / width_sites) ** 2)[None, :]
    state.set_fields(w0, np.zeros_like(w0))
    x = xi * spec.dh
    right = nx // 2 + 1

    def peak():
        row = state.w[0, right:]
        return _pulse_peak(row, x[right:]), float(row.max())

    t_start = 20 * width_sites * spec.dh / spec.cs
    t_end = t_start + travel_sites * spec.dh / spec.cs
    n_start = int(round(t_start / spec.dt))
    n_end = int(round(t_end / spec.dt))
    for _ in range(n_start):
        state.step_periodic(backend)
    x1, _ = peak()
    for _ in range(n_end - n_start):
        state.step_periodic(backend)
    x2, amp = peak()
    if not np.isfinite(amp) or amp < min_amplitude * 0.5:
        raise NumericalError(f"pulse dispersed (peak {amp:.3g} of expected 0.5)")
    return (x2 - x1) / ((n_end - n_start) * spec.dt)


def check_stability(spec: LatticeSpec, steps=400, size=24, backend=None) -> float:
    """Growth ratio of max|w| for a rough 2D periodic field over ``steps``."""
    sq = LatticeSpec(nx=size, ny=size, dh=spec.dh, dt=spec.dt, cs=spec.cs, tau=spec.tau)
    state = LatticeState(sq, periodic=True)
    j, i = np.indices((size, size))
    w0 = ((-1.0) ** (i + j)) + np.sin(2 * np.pi * i / size) * np.cos(4 * np.pi * j / size)
    state.set_fields(w0, np.zeros_like(w0))
    amp0 = np.abs(state.w).max()
    for _ in range(steps):
        state.step_periodic(backend)
    return float(np.abs(state.w).max() / amp0)
