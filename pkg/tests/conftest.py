from __future__ import annotations

import numpy as np
import pytest

from lbmcrack.geometry import DIRICHLET, NEUMANN, BoundaryCondition, CrackPath, DomainOutline, Tip
from lbmcrack.lattice import LatticeSpec, LatticeState, MaterialParams
from lbmcrack.simulation import build_lattice

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def square_outline(size=2.0, kind=DIRICHLET, value=None):
    bc = BoundaryCondition(kind, value or (lambda t, xy: 0.0))
    verts = [[0.0, 0.0], [size, 0.0], [size, size], [0.0, size]]
    return DomainOutline(verts, [bc] * 4)


def lattice_for(outline, dh, crack=None, kappa=2.0):
    material = MaterialParams(1.0, 1.0)
    spec = build_lattice(outline, dh, material, kappa, 1.0, crack)
    X, Y = spec.positions()
    live = outline.contains(np.stack([X, Y], axis=-1))
    return LatticeState(spec, live)


@pytest.fixture
def periodic_state():
    spec = LatticeSpec.from_material(12, 10, 0.1, MaterialParams(1.0, 1.0))
    return LatticeState(spec, periodic=True)


def edge_crack(x0, x1, y, tips=("end",)):
    dirs = {"end": [1.0, 0.0], "start": [-1.0, 0.0]}
    return CrackPath([[x0, y], [x1, y]], [Tip(end=e, direction=np.array(dirs[e])) for e in tips])
