"""Backend selection for the grid kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation. Set ``LBMCRACK_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels


def _select():
    requested = os.environ.get("LBMCRACK_BACKEND", "").strip().lower()
    if requested:
        if requested not in BACKENDS:
            raise ImportError(f"LBMCRACK_BACKEND={requested!r} is not available "
                              f"(have {sorted(BACKENDS)})")
        return requested
    return "cython" if "cython" in BACKENDS else "python"


BACKEND = _select()
_impl = BACKENDS[BACKEND]

equilibrium = _impl.equilibrium
stream_collide = _impl.stream_collide


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    return BACKENDS[name or BACKEND]
