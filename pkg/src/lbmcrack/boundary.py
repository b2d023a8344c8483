"""Macroscopic treatment of non-lattice-conforming boundaries.

For every boundary site ``x_B`` the displacement is approximated along the
inward normal through the closest boundary point ``x_BC`` by a quadratic
polynomial fitted to the boundary datum and to two interior samples
``x_I``, ``x_II`` (bilinear interpolation in their lattice cells). Samples
whose cell corners are themselves boundary sites couple those unknowns,
so all boundary displacements follow from one sparse linear system
``S w_B = R(t)``. Missing populations are then chosen so that the local
moment reproduces the solved displacement increment.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import BoundaryError
from .geometry import DIRICHLET, CrackPath, DomainOutline, closest_boundary_point
from .lattice import OPPOSITE, LatticeState

log = logging.getLogger(__name__)

_SNAP = 1e-9


@dataclass
class BoundarySite:
    index: int
    x_b: np.ndarray
    x_bc: np.ndarray
    normal: np.ndarray
    edge: int
    kind: str
    missing: tuple
    known: tuple
    s_b: float
    samples: list          # sample points along the normal
    s_samples: list        # their normal coordinates
    cells: list            # per sample: (corner site indices, bilinear weights)
    cols: np.ndarray       # merged stencil: site indices ...
    coefs: np.ndarray      # ... and their coefficients
    bc_coef: float         # multiplier of the boundary datum

    @property
    def order(self) -> int:
        return len(self.samples)

    @property
    def n_miss(self) -> int:
        return len(self.missing)

    def evaluate(self, w_flat: np.ndarray, datum: float) -> float:
        """Polynomial value at ``x_B`` for a given field and boundary datum."""
        return float(self.coefs @ w_flat[self.cols] + self.bc_coef * datum)


def _bilinear_cell(state: LatticeState, z):
    spec = state.spec
    fx = (z[0] - spec.x0) / spec.dh
    fy = (z[1] - spec.y0) / spec.dh
    i0 = math.floor(fx)
    j0 = math.floor(fy)
    tx = fx - i0
    ty = fy - j0
    if tx > 1 - _SNAP:
        i0, tx = i0 + 1, 0.0
    elif tx < _SNAP:
        tx = 0.0
    if ty > 1 - _SNAP:
        j0, ty = j0 + 1, 0.0
    elif ty < _SNAP:
        ty = 0.0
    corners, weights = [], []
    for di, dj, wt in ((0, 0, (1 - tx) * (1 - ty)), (1, 0, tx * (1 - ty)),
                       (0, 1, (1 - tx) * ty), (1, 1, tx * ty)):
        if wt == 0.0:
            continue
        i, j = i0 + di, j0 + dj
        if not (0 <= i < spec.nx and 0 <= j < spec.ny):
            return None
        corners.append(j * spec.nx + i)
        weights.append(wt)
    return np.array(corners, dtype=np.int64), np.array(weights)


def _sample_ok(state, outline, crack, x_b, z, cell) -> bool:
    if not outline.contains(z):
        return False
    if crack is not None and crack.crosses(x_b, z):
        return False
    live = state.live.ravel()
    for p in cell[0]:
        if not live[p]:
            return False
        if crack is not None:
            corner = state.spec.position(p)
            if not np.allclose(corner, z) and crack.crosses(z, corner):
                return False
    return True


def _polynomial_coefficients(kind, s_b, s_samples, mu):
    """Weights of (datum, sample values...) for the polynomial value at ``s_b``."""
    if kind == DIRICHLET:
        nodes = [0.0] + list(s_samples)
        lag = []
        for k, sk in enumerate(nodes):
            num = den = 1.0
            for m, sm in enumerate(nodes):
                if m != k:
                    num *= s_b - sm
                    den *= sk - sm
            lag.append(num / den)
        return lag[0], lag[1:]
    # Neumann: slope at s=0 is -t_z/mu
    if len(s_samples) == 2:
        s1, s2 = s_samples
        k = (s_b**2 - s1**2) / (s2**2 - s1**2)
        cg = (s_b - s1) - k * (s2 - s1)
        return -cg / mu, [1.0 - k, k]
    (s1,) = s_samples
    return -(s_b - s1) / mu, [1.0]


def build_stencil(p: int, state: LatticeState, outline: DomainOutline,
                  crack: CrackPath | None, mu: float) -> BoundarySite:
    """Stencil of boundary site ``p``; falls back to a linear polynomial
    when the second sample cannot be placed inside the domain."""
    spec = state.spec
    x_b = spec.position(p)
    cp = closest_boundary_point(outline, crack, x_b)
    n = cp.normal
    s_b = float((x_b - cp.point) @ n)
    if s_b <= 0:
        s_b = cp.distance
    j, i = divmod(p, spec.nx)
    missing = tuple(a for a in range(1, 5) if not state.intact[OPPOSITE[a], j, i])
    known = tuple(a for a in range(5) if a not in missing)
    if not missing:
        raise BoundaryError(f"site {p} has no missing populations")
    h = spec.dh
    points = [x_b + h * n, x_b + 2 * h * n]
    cells = []
    for z in points:
        cell = _bilinear_cell(state, z)
        if cell is None or not _sample_ok(state, outline, crack, x_b, z, cell):
            break
        cells.append(cell)
    if not cells:
        raise BoundaryError(f"unresolvable stencil at site {p} (x={x_b.tolist()})")
    if len(cells) == 1:
        log.debug("site %d uses the linear fallback stencil", p)
    points = points[:len(cells)]
    s_samples = [s_b + h * (k + 1) for k in range(len(cells))]
    bc_coef, sample_coefs = _polynomial_coefficients(cp.bc.kind, s_b, s_samples, mu)
    cols = np.concatenate([c for c, _ in cells])
    vals = np.concatenate([sc * wts for sc, (_, wts) in zip(sample_coefs, cells)])
    ucols, inv = np.unique(cols, return_inverse=True)
    coefs = np.zeros(len(ucols))
    np.add.at(coefs, inv, vals)
    return BoundarySite(index=p, x_b=x_b, x_bc=cp.point, normal=n, edge=cp.edge,
                        kind=cp.bc.kind, missing=missing, known=known, s_b=s_b,
                        samples=points, s_samples=s_samples, cells=cells,
                        cols=ucols, coefs=coefs, bc_coef=float(bc_coef))


class BoundarySystem:
    """All boundary sites plus the factorised system ``S w_B = R``."""

    def __init__(self, state: LatticeState, outline: DomainOutline, crack: CrackPath | None,
                 mu: float, sites: dict):
        self.state = state
        self.outline = outline
        self.crack = crack
        self.mu = mu
        self.sites = dict(sites)
        self.n_factorizations = 0
        self._refresh()

    # bc handle for an edge index (crack faces come after the outline edges)
    def _bc(self, edge):
        if edge < self.outline.n_edges:
            return self.outline.bcs[edge]
        return self.crack.bc

    def _refresh(self):
        n_sites = self.state.spec.n_sites
        self.order = np.array(sorted(self.sites), dtype=np.int64)
        nb = len(self.order)
        rows = [np.full(len(self.sites[p].cols), r, dtype=np.int64) for r, p in enumerate(self.order)]
        cols = [self.sites[p].cols for p in self.order]
        vals = [self.sites[p].coefs for p in self.order]
        if nb:
            A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                              shape=(nb, n_sites))
        else:
            A = sp.csr_matrix((0, n_sites))
        is_b = np.zeros(n_sites, dtype=bool)
        is_b[self.order] = True
        self.A = A
        self.S = (sp.identity(nb, format="csc") - A.tocsc()[:, self.order]).tocsc()
        self.P = (A @ sp.diags((~is_b).astype(float))).tocsr()
        self.bc_coef = np.array([self.sites[p].bc_coef for p in self.order])
        self.x_bc = np.array([self.sites[p].x_bc for p in self.order]).reshape(nb, 2)
        self.x_b = np.array([self.sites[p].x_b for p in self.order]).reshape(nb, 2)
        edges = np.array([self.sites[p].edge for p in self.order], dtype=np.int64)
        self._edge_rows = [(e, np.flatnonzero(edges == e)) for e in np.unique(edges)]
        missing = np.zeros((5, nb), dtype=bool)
        for r, p in enumerate(self.order):
            missing[list(self.sites[p].missing), r] = True
        self.missing = missing
        self.n_miss = missing.sum(axis=0)
        self._lu = None
        if nb:
            try:
                self._lu = factorize(self.S)
            except BoundaryError as exc:
                diag = np.abs(self.S.diagonal())
                bad = self.order[np.argsort(diag)[:5]]
                raise BoundaryError(f"{exc}; weakest rows at sites {bad.tolist()}") from exc
        self.n_factorizations += 1

    def __len__(self):
        return len(self.order)

    def bc_values(self, t: float) -> np.ndarray:
        vals = np.zeros(len(self.order))
        for e, rows in self._edge_rows:
            vals[rows] = self._bc(e).value(t, self.x_bc[rows])
        return vals

    def rhs(self, w_flat: np.ndarray, t: float) -> np.ndarray:
        return self.P @ w_flat + self.bc_coef * self.bc_values(t)

    def solve(self, w_flat: np.ndarray, t: float) -> np.ndarray:
        if not len(self.order):
            return np.zeros(0)
        wb = self._lu.solve(self.rhs(w_flat, t))
        if not np.all(np.isfinite(wb)):
            raise BoundaryError(f"non-finite boundary displacement at t={t}")
        return wb

    def extend(self, new_sites, segment=None, radius=None):
        """Add boundary sites created by crack growth and refresh stencils
        whose geometry the new segment may have changed.

        The matrix is refactorised only if some stencil actually changed.
        """
        h = self.state.spec.dh
        radius = 5.0 * h if radius is None else radius
        new = set(int(p) for p in new_sites)
        touched = set(new)
        if segment is not None and len(self.order):
            a, b = (np.asarray(v, float) for v in segment)
            near = _dist_points_segment(self.x_b, a, b) <= radius
            touched.update(int(p) for p in self.order[near])
        changed = bool(new - set(self.sites))
        for p in sorted(touched):
            site = build_stencil(p, self.state, self.outline, self.crack, self.mu)
            old = self.sites.get(p)
            if old is None or not _same_stencil(old, site):
                changed = True
            self.sites[p] = site
        if changed:
            self._refresh()
        return self


def _same_stencil(a: BoundarySite, b: BoundarySite) -> bool:
    return (a.missing == b.missing and a.edge == b.edge and a.bc_coef == b.bc_coef
            and np.array_equal(a.cols, b.cols) and np.array_equal(a.coefs, b.coefs))


def _dist_points_segment(x, a, b):
    ab = b - a
    L2 = ab @ ab
    t = np.zeros(len(x)) if L2 == 0 else np.clip(((x - a) @ ab) / L2, 0.0, 1.0)
    d = x - a - t[:, None] * ab
    return np.hypot(d[:, 0], d[:, 1])


def factorize(S):
    """Sparse LU of the boundary matrix; ``.solve(R)`` gives ``w_B``."""
    try:
        return splu(sp.csc_matrix(S, dtype=float))
    except RuntimeError as exc:
        raise BoundaryError(f"singular boundary matrix ({exc})") from exc


def assemble_system(state: LatticeState, outline: DomainOutline, crack: CrackPath | None,
                    mu: float) -> BoundarySystem:
    idx = np.flatnonzero(state.boundary_mask().ravel())
    sites = {int(p): build_stencil(int(p), state, outline, crack, mu) for p in idx}
    return BoundarySystem(state, outline, crack, mu, sites)


def extend_system(system: BoundarySystem, new_sites, segment=None) -> BoundarySystem:
    return system.extend(new_sites, segment)


def solve_boundary(system: BoundarySystem, t: float, w_flat: np.ndarray) -> np.ndarray:
    return system.solve(w_flat, t)


def reconstruct_missing(n_miss: int, w_new: float, w_old: float, f_known, dt: float) -> float:
    """Common value of the missing populations at one boundary site."""
    return ((w_new - w_old) / dt - float(np.sum(f_known))) / n_miss


def fill_missing(f_new: np.ndarray, system: BoundarySystem, w_b: np.ndarray,
                 w_old_flat: np.ndarray, dt: float) -> None:
    """Vectorised missing-population reconstruction at all boundary sites."""
    if not len(system.order):
        return
    flat = f_new.reshape(5, -1)
    idx = system.order
    f_b = flat[:, idx]
    known_sum = np.where(system.missing, 0.0, f_b).sum(axis=0)
    value = ((w_b - w_old_flat[idx]) / dt - known_sum) / system.n_miss
    f_b = np.where(system.missing, value[None, :], f_b)
    flat[:, idx] = f_b
