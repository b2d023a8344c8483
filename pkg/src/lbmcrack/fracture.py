"""Stress intensity evaluation, growth criteria and link severing for
moving straight cracks."""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .geometry import CrackPath, DomainOutline, Tip, segments_cross_links
from .lattice import DIRECTIONS, LatticeState

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Steady:
    """Prescribed growth at ``a_dot`` (length/time)."""

    a_dot: float
    r0: float = 0.07
    r_min: float | None = None

    mode = "steady"

    def validate(self, cs):
        if not 0 < self.a_dot < cs:
            raise ConfigError(f"steady growth rate must lie in (0, cs), got {self.a_dot}")
        _check_lengths(self)


@dataclass(frozen=True)
class KCriterion:
    """Growth while the stress intensity exceeds ``K_C``."""

    K_C: float
    v_max: float
    r0: float = 0.07
    r_min: float | None = None

    mode = "k"

    def validate(self, cs):
        if self.K_C <= 0:
            raise ConfigError("K_C must be positive")
        if not 0 < self.v_max < 1:
            raise ConfigError("v_max must lie in (0, 1)")
        _check_lengths(self)


def _check_lengths(crit):
    if crit.r0 <= 0:
        raise ConfigError("r0 must be positive")
    if crit.r_min is not None and crit.r_min <= 0:
        raise ConfigError("r_min must be positive")


@dataclass
class SifSample:
    t: float
    K: float
    r_used: float
    pair: tuple


def r_min_of_v(v: float, r0: float) -> float:
    if not 0 <= v < 1:
        raise ValueError(f"relative crack speed must lie in [0, 1), got {v}")
    return r0 / (1.0 - v)


def evaluate_sif(w_up: float, w_down: float, r: float, mu: float) -> float:
    if r <= 0:
        raise ValueError("evaluation distance must be positive")
    delta = abs(w_up - w_down)
    return delta * (mu / 4.0) * math.sqrt(2.0 * math.pi / r)


def crack_speed_of_K(K: float, K_C: float, v_max: float) -> float:
    if K_C <= 0:
        raise ValueError("K_C must be positive")
    if K <= K_C:
        return 0.0
    ratio = K / K_C
    return min(v_max, v_max * math.tanh(math.sqrt(ratio**4 - 1.0)))


# -- link severing ----------------------------------------------------------

def _link_arrays(state: LatticeState):
    """All intact links counted once (directions +x and +y)."""
    spec = state.spec
    X, Y = spec.positions()
    ps, qs, P, Q, dirs = [], [], [], [], []
    for a in (1, 2):
        jj, ii = np.nonzero(state.intact[a])
        dx, dy = DIRECTIONS[a]
        p = jj * spec.nx + ii
        q = ((jj + dy) % spec.ny) * spec.nx + (ii + dx) % spec.nx
        ps.append(p)
        qs.append(q)
        P.append(np.stack([X[jj, ii], Y[jj, ii]], axis=1))
        Q.append(np.stack([X[jj, ii] + dx * spec.dh, Y[jj, ii] + dy * spec.dh], axis=1))
        dirs.append(np.full(len(p), a))
    return (np.concatenate(ps), np.concatenate(qs), np.concatenate(P), np.concatenate(Q),
            np.concatenate(dirs))


def scan_links(state: LatticeState, segment) -> list:
    """Exhaustive test of every intact link; returns ``[(p, a), ...]``."""
    p, q, P, Q, dirs = _link_arrays(state)
    hit = segments_cross_links(segment[0], segment[1], P, Q)
    return sorted(zip(p[hit].tolist(), dirs[hit].tolist()))


def sever_by_scan(state: LatticeState, segment) -> set:
    """Sever every link the segment crosses; return the affected sites."""
    B = set()
    for p, a in scan_links(state, segment):
        q = state.sever(p, a)
        B.update((p, q))
    return B


def _linked_neighbors(state: LatticeState, p: int):
    j, i = divmod(p, state.spec.nx)
    return [state.neighbor(p, a) for a in range(1, 5) if state.intact[a, j, i]]


def sever_links(segment, state: LatticeState, b_prev, cut_links=None) -> set:
    """Breadth-first search for links cut by a new crack segment.

    The queue starts from the lattice neighbors of the previous boundary
    pair and only expands past sites whose links were actually cut.
    Returns the set of new boundary sites; severed ``(p, q)`` pairs are
    appended to ``cut_links`` when given.
    """
    a_pt = np.asarray(segment[0], float)
    b_pt = np.asarray(segment[1], float)
    spec = state.spec
    queue = deque()
    queued = set()
    for s in sorted(b_prev):
        for n in _linked_neighbors(state, s):
            if n not in queued:
                queued.add(n)
                queue.append(n)
    visited = set()
    B = set()
    while queue:
        p = queue.popleft()
        visited.add(p)
        j, i = divmod(p, spec.nx)
        xp = spec.position(p)
        for a in range(1, 5):
            if not state.intact[a, j, i]:
                continue
            dx, dy = DIRECTIONS[a]
            xq = xp + spec.dh * np.array([dx, dy])
            if segments_cross_links(a_pt, b_pt, xp[None], xq[None])[0]:
                q = state.sever(p, a)
                B.update((p, q))
                if cut_links is not None:
                    cut_links.append((p, q))
                for n in _linked_neighbors(state, q):
                    if n not in visited and n not in queued:
                        queued.add(n)
                        queue.append(n)
    return B


# -- tip bookkeeping ----------------------------------------------------------

@dataclass
class TipState:
    tip: Tip
    v: float = 0.0
    b_prev: set = field(default_factory=set)
    last: SifSample | None = None
    halted: bool = False


@dataclass
class TipRecord:
    side: str
    K: float
    v: float
    da: float
    grew: bool
    r_used: float


class FractureEngine:
    """Applies a growth criterion to every tip of one crack."""

    def __init__(self, crack: CrackPath, criterion, outline: DomainOutline, mu: float, cs: float):
        self.crack = crack
        self.criterion = criterion
        self.outline = outline
        self.mu = mu
        self.cs = cs
        criterion.validate(cs)
        self.tips = [TipState(t) for t in crack.tips]
        # severed crack links: endpoints and link midpoints
        self.links_p: list = []
        self.links_q: list = []
        self.links_mid: list = []

    def _record_links(self, state: LatticeState, pairs):
        spec = state.spec
        for p, q in pairs:
            self.links_p.append(p)
            self.links_q.append(q)
            self.links_mid.append(0.5 * (spec.position(p) + spec.position(q)))

    def initialize(self, state: LatticeState) -> set:
        """Sever links crossed by the initial crack and seed each tip's
        search set with the cut pair nearest to it."""
        pairs = []
        for seg in self.crack.segments():
            for p, a in scan_links(state, seg):
                pairs.append((p, state.sever(p, a)))
        self._record_links(state, pairs)
        for ts in self.tips:
            tip_pos = self.crack.tip_position(ts.tip)
            if pairs:
                best = max(range(len(pairs)),
                           key=lambda k: (self.links_mid[k] @ ts.tip.direction, -k))
                ts.b_prev = set(pairs[best])
            if self.outline.distance(tip_pos) < 2 * state.spec.dh:
                ts.halted = True
        return {s for pr in pairs for s in pr}

    def r_min(self, ts: TipState) -> float:
        if self.criterion.r_min is not None:
            return self.criterion.r_min
        return r_min_of_v(ts.v, self.criterion.r0)

    def select_evaluation_pair(self, ts: TipState, state: LatticeState, r_min: float):
        """Severed link behind the tip with ``r`` in ``[r_min, r_min + dh]``.

        Returns ``(upper_site, lower_site, r)`` or None when the crack is too
        short. ``r`` is measured along the crack.
        """
        if not self.links_mid:
            return None
        h = state.spec.dh
        d = ts.tip.direction
        tip = self.crack.tip_position(ts.tip)
        mids = np.asarray(self.links_mid)
        r = (tip - mids) @ d
        tol = 1e-9 * h
        ok = np.flatnonzero((r >= r_min - tol) & (r <= r_min + h + tol))
        if not len(ok):
            return None
        k = int(ok[np.argmin(r[ok])])
        p, q = self.links_p[k], self.links_q[k]
        n = np.array([-d[1], d[0]])
        if (state.spec.position(p) - tip) @ n < (state.spec.position(q) - tip) @ n:
            p, q = q, p
        return p, q, float(r[k])

    def tip_sif(self, ts: TipState, state: LatticeState, t: float) -> SifSample:
        pair = self.select_evaluation_pair(ts, state, self.r_min(ts))
        if pair is None:
            return SifSample(t=t, K=0.0, r_used=0.0, pair=())
        up, down, r = pair
        w = state.w.ravel()
        return SifSample(t=t, K=evaluate_sif(w[up], w[down], r, self.mu), r_used=r, pair=(up, down))

    def step(self, state: LatticeState, system, t: float) -> list:
        """Evaluate every tip (left first) and grow those that qualify."""
        records = []
        dt = state.spec.dt
        h = state.spec.dh
        for ts in self.tips:
            sample = self.tip_sif(ts, state, t)
            ts.last = sample
            v = 0.0
            if not ts.halted:
                if self.criterion.mode == "steady":
                    v = self.criterion.a_dot / self.cs
                elif sample.K > self.criterion.K_C:
                    v = crack_speed_of_K(sample.K, self.criterion.K_C, self.criterion.v_max)
            grew = False
            if v > 0:
                da = v * self.cs * dt
                target = self.crack.tip_position(ts.tip) + da * ts.tip.direction
                if self.outline.distance(target) < 2 * h or not self.outline.contains(target):
                    ts.halted = True
                    v = 0.0
                    log.info("tip %s halted near the outline at t=%.6g", ts.tip.side, t)
                else:
                    segment = self.crack.advance(ts.tip, da)
                    cut = []
                    new = sever_links(segment, state, ts.b_prev, cut)
                    if new:
                        ts.b_prev = new
                        self._record_links(state, cut)
                        if system is not None:
                            system.extend(new, segment)
                    elif system is not None:
                        system.extend((), segment)
                    grew = True
            ts.v = v
            records.append(TipRecord(side=ts.tip.side, K=sample.K, v=v, da=ts.tip.extension,
                                     grew=grew, r_used=sample.r_used))
        return records

