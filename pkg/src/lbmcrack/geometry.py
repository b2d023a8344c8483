"""Lattice-independent line geometry: domain outline, straight cracks and
the predicates the crack-growth and boundary code rely on."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, GeometryError

EPS = 1e-12
DIRICHLET = "dirichlet"
NEUMANN = "neumann"


def _zero(t, xy):
    return 0.0


@dataclass
class BoundaryCondition:
    """``value(t, xy)`` gives the displacement (Dirichlet) or the traction
    ``t_z`` (Neumann) at the boundary points ``xy`` of shape ``(n, 2)``."""

    kind: str = NEUMANN
    value: Callable = _zero

    def __post_init__(self):
        if self.kind not in (DIRICHLET, NEUMANN):
            raise ConfigError(f"unknown boundary condition kind {self.kind!r}")


TRACTION_FREE = BoundaryCondition(NEUMANN, _zero)


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def segments_cross_links(a, b, p, q, eps=EPS):
    """Vectorised crossing test of segment ``a-b`` against links ``p-q``.

    ``p`` and ``q`` are ``(n, 2)`` arrays. A link crosses when its open
    interior passes through the segment; a segment endpoint lying on the
    link counts. Raises GeometryError on collinear overlap.
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    p = np.atleast_2d(np.asarray(p, float))
    q = np.atleast_2d(np.asarray(q, float))
    ab = b - a
    if not ab.any():
        raise GeometryError("crack segment has zero length")
    pq = q - p
    scale = eps * np.hypot(*ab) * np.hypot(pq[:, 0], pq[:, 1])

    def side(v):
        v = np.where(np.abs(v) <= scale, 0.0, v)
        return np.sign(v)

    o1 = side(_cross(ab[0], ab[1], p[:, 0] - a[0], p[:, 1] - a[1]))
    o2 = side(_cross(ab[0], ab[1], q[:, 0] - a[0], q[:, 1] - a[1]))
    o3 = side(_cross(pq[:, 0], pq[:, 1], a[0] - p[:, 0], a[1] - p[:, 1]))
    o4 = side(_cross(pq[:, 0], pq[:, 1], b[0] - p[:, 0], b[1] - p[:, 1]))

    collinear = (o1 == 0) & (o2 == 0)
    if np.any(collinear):
        # overlap of the projections onto the segment direction
        L2 = ab @ ab
        tp = ((p - a) @ ab) / L2
        tq = ((q - a) @ ab) / L2
        lo = np.minimum(tp, tq)
        hi = np.maximum(tp, tq)
        if np.any(collinear & (hi > 0) & (lo < 1)):
            raise GeometryError("crack segment is collinear with a lattice link")
    return (o1 * o2 < 0) & (o3 * o4 <= 0)


def segment_intersects_link(seg, p, q, eps=EPS) -> bool:
    a, b = seg
    if np.allclose(p, q):
        raise GeometryError("link endpoints coincide")
    return bool(segments_cross_links(a, b, np.asarray(p)[None], np.asarray(q)[None], eps)[0])


def point_segment_foot(x, a, b):
    """Closest point to ``x`` on segment ``a-b`` and its distance."""
    x = np.asarray(x, float)
    a = np.asarray(a, float)
    ab = np.asarray(b, float) - a
    L2 = ab @ ab
    t = 0.0 if L2 == 0 else min(1.0, max(0.0, ((x - a) @ ab) / L2))
    foot = a + t * ab
    return foot, float(np.hypot(*(x - foot)))


class DomainOutline:
    """Closed polygon with one boundary condition per edge.

    Edge ``k`` runs from vertex ``k`` to vertex ``k+1``.
    """

    def __init__(self, vertices, bcs):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise ConfigError("outline needs at least three 2D vertices")
        if len(bcs) != len(v):
            raise ConfigError("one boundary condition per outline edge is required")
        self.vertices = v
        self.bcs = list(bcs)
        self._check_simple()
        area = 0.5 * np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
        if area == 0:
            raise GeometryError("outline has zero area")
        self.ccw = area > 0
        d = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(d[:, 0], d[:, 1])
        if np.any(lengths == 0):
            raise GeometryError("outline has a zero-length edge")
        t = d / lengths[:, None]
        # inward normal: left of the edge for counter-clockwise polygons
        sgn = 1.0 if self.ccw else -1.0
        self.inward_normals = sgn * np.stack([-t[:, 1], t[:, 0]], axis=1)

    def _check_simple(self):
        v = self.vertices
        n = len(v)
        for i in range(n):
            a, b = v[i], v[(i + 1) % n]
            for k in range(i + 2, n):
                if i == 0 and k == n - 1:
                    continue
                c, d = v[k], v[(k + 1) % n]
                if _proper_intersect(a, b, c, d):
                    raise GeometryError("outline polygon self-intersects")

    @property
    def n_edges(self) -> int:
        return len(self.vertices)

    def edge(self, k):
        return self.vertices[k], self.vertices[(k + 1) % len(self.vertices)]

    def bbox(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def contains(self, pts) -> np.ndarray:
        """Even-odd point-in-polygon test for an ``(..., 2)`` array."""
        pts = np.asarray(pts, float)
        x = pts[..., 0]
        y = pts[..., 1]
        inside = np.zeros(x.shape, dtype=bool)
        v = self.vertices
        n = len(v)
        for k in range(n):
            x1, y1 = v[k]
            x2, y2 = v[(k + 1) % n]
            cond = (y1 > y) != (y2 > y)
            with np.errstate(divide="ignore", invalid="ignore"):
                xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            inside ^= cond & (x < xc)
        return inside

    def distance(self, x) -> float:
        return min(point_segment_foot(x, *self.edge(k))[1] for k in range(self.n_edges))


def _proper_intersect(a, b, c, d):
    d1 = _cross(*(b - a), *(c - a))
    d2 = _cross(*(b - a), *(d - a))
    d3 = _cross(*(d - c), *(a - c))
    d4 = _cross(*(d - c), *(b - c))
    return d1 * d2 < 0 and d3 * d4 < 0


@dataclass
class Tip:
    end: str                     # "start" or "end" of the crack polyline
    direction: np.ndarray        # unit growth direction
    extension: float = 0.0       # accumulated growth
    active: bool = True

    @property
    def side(self) -> str:
        return "left" if self.direction[0] < 0 or (self.direction[0] == 0 and self.direction[1] < 0) else "right"


@dataclass
class CrackPath:
    """Straight crack as a polyline with one or two growing tips."""

    vertices: list
    tips: list = field(default_factory=list)
    bc: BoundaryCondition = field(default_factory=lambda: TRACTION_FREE)

    def __post_init__(self):
        self.vertices = [np.asarray(v, float) for v in self.vertices]
        if len(self.vertices) < 2:
            raise ConfigError("crack needs two vertices")
        axis = self.vertices[-1] - self.vertices[0]
        length = math.hypot(*axis)
        if length == 0:
            raise GeometryError("crack has zero length")
        self.axis = axis / length
        for v in self.vertices[1:-1]:
            if abs(_cross(*self.axis, *(v - self.vertices[0]))) > 1e-9 * length:
                raise GeometryError("crack vertices are not collinear")
        for tip in self.tips:
            tip.direction = np.asarray(tip.direction, float)
            tip.direction = tip.direction / math.hypot(*tip.direction)
            if abs(_cross(*self.axis, *tip.direction)) > 1e-9:
                raise GeometryError("tip direction must be parallel to the crack")
            outward = self.axis if tip.end == "end" else -self.axis
            if tip.direction @ outward <= 0:
                raise GeometryError(f"tip at {tip.end} must point away from the crack")
        self.tips.sort(key=lambda t: 0 if t.side == "left" else 1)

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def tip_position(self, tip: Tip) -> np.ndarray:
        return self.vertices[-1] if tip.end == "end" else self.vertices[0]

    def segments(self):
        return [(self.vertices[k], self.vertices[k + 1]) for k in range(len(self.vertices) - 1)]

    def advance(self, tip: Tip, da: float):
        """Move ``tip`` by ``da`` along its direction; return the new segment."""
        old = self.tip_position(tip)
        new = old + da * tip.direction
        if tip.end == "end":
            self.vertices.append(new)
        else:
            self.vertices.insert(0, new)
        tip.extension += da
        return old, new

    def normal(self) -> np.ndarray:
        return np.array([-self.axis[1], self.axis[0]])

    def foot(self, x):
        return point_segment_foot(x, self.start, self.end)

    def crosses(self, p, q) -> bool:
        """True when the open segment ``p-q`` passes through the crack."""
        return bool(segments_cross_links(self.start, self.end, np.asarray(p)[None],
                                         np.asarray(q)[None])[0])


def polar_about_tip(tip_pos, direction, x) -> tuple[float, float]:
    """Distance and angle of ``x`` in the tip frame; angle in (-pi, pi]."""
    d = np.asarray(direction, float)
    d = d / math.hypot(*d)
    rel = np.asarray(x, float) - np.asarray(tip_pos, float)
    r = math.hypot(*rel)
    if r == 0:
        raise GeometryError("point coincides with the crack tip")
    phi = math.atan2(_cross(*d, *rel), d @ rel)
    if phi <= -math.pi:
        phi = math.pi
    return r, phi


@dataclass
class ClosestPoint:
    point: np.ndarray
    edge: int            # outline edge index, or n_edges for the crack
    bc: BoundaryCondition
    normal: np.ndarray   # unit, pointing from the boundary into the domain at x
    distance: float


def closest_boundary_point(outline: DomainOutline, crack: CrackPath | None, x,
                           tol=1e-12) -> ClosestPoint:
    """Nearest point on the outline edges or either crack face.

    Ties within ``tol`` (relative) go to the lowest edge index, with the
    crack ranked after all outline edges.
    """
    x = np.asarray(x, float)
    best = None
    candidates = []
    for k in range(outline.n_edges):
        foot, dist = point_segment_foot(x, *outline.edge(k))
        candidates.append((dist, k, foot))
    if crack is not None:
        foot, dist = crack.foot(x)
        candidates.append((dist, outline.n_edges, foot))
    dmin = min(c[0] for c in candidates)
    for dist, k, foot in candidates:
        if dist <= dmin * (1 + tol) + tol:
            best = (dist, k, foot)
            break
    dist, k, foot = best
    if k < outline.n_edges:
        a, b = outline.edge(k)
        n = outline.inward_normals[k]
        bc = outline.bcs[k]
    else:
        bc = crack.bc
        n = crack.normal()
        if _cross(*crack.axis, *(x - crack.start)) < 0:
            n = -n
    rel = x - foot
    if dist > 0 and abs(_cross(*n, *rel)) > 1e-9 * dist:
        # foot at an edge end: fall back to the direction towards x
        n = rel / dist
    return ClosestPoint(point=foot, edge=k, bc=bc, normal=np.asarray(n, float), distance=dist)


def shift_origin_off_crack(x0, y0, dh, crack_start, crack_end, tol=1e-6):
    """Return a lattice origin for which no lattice line carries the crack.

    Only axis-parallel cracks can coincide with a lattice line; those are
    moved half a spacing perpendicular to the crack.
    """
    a = np.asarray(crack_start, float)
    b = np.asarray(crack_end, float)
    d = b - a
    if abs(d[1]) <= tol * dh * 1e-3:   # horizontal
        frac = ((a[1] - y0) / dh) % 1.0
        if min(frac, 1 - frac) < tol:
            y0 += 0.5 * dh
    elif abs(d[0]) <= tol * dh * 1e-3:  # vertical
        frac = ((a[0] - x0) / dh) % 1.0
        if min(frac, 1 - frac) < tol:
            x0 += 0.5 * dh
    return x0, y0
