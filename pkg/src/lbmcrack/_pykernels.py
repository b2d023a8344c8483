"""Pure numpy grid kernels (fallback when the compiled extension is absent).

Array layout is ``(5, ny, nx)`` for distributions and ``(ny, nx)`` for
scalar fields, x varying fastest. Directions follow the D2Q5 ordering
rest, +x, +y, -x, -y. Neighbor lookups wrap around the grid edges; a
non-periodic lattice simply has its edge links marked as severed.
"""

from __future__ import annotations

import numpy as np

# (dy, dx) offsets of the lattice velocities
OFFSETS = ((0, 0), (0, 1), (1, 0), (0, -1), (-1, 0))
OPPOSITE = (0, 3, 4, 1, 2)


def equilibrium(w, wdot, a0, ak, out):
    """Write rest/moving equilibrium populations into ``out``."""
    np.subtract(wdot, a0 * w, out=out[0])
    akw = ak * w
    for a in range(1, 5):
        out[a] = akw


def stream_collide(f, feq, intact, omega, w, dt, f_out, wdot_out, w_out):
    """BGK relaxation followed by streaming along intact links.

    Slots whose incoming link is severed receive 0; the caller overwrites
    them at boundary sites. ``wdot_out`` is the raw moment of the streamed
    populations and ``w_out = w + dt * wdot_out``.
    """
    post = f - omega * (f - feq)
    for a in range(5):
        dy, dx = OFFSETS[a]
        src = post[a] if a == 0 else np.roll(post[a], (dy, dx), axis=(0, 1))
        np.multiply(src, intact[OPPOSITE[a]], out=f_out[a])
    s = f_out[0] + f_out[1]
    s += f_out[2]
    s += f_out[3]
    s += f_out[4]
    wdot_out[...] = s
    np.add(w, dt * s, out=w_out)
