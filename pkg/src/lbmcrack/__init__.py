"""Lattice Boltzmann simulation of dynamic mode-III (antiplane shear) cracks.

The displacement field obeys the scalar wave equation and is solved with a
D2Q5 lattice Boltzmann scheme. Outer edges and crack faces are handled as
non-lattice-conforming boundaries, so cracks grow without remeshing.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .analytic import StripProblem, cod_from_sif, steady_strip_sif, near_tip_displacement
from .config import ScenarioConfig, load_config
from .errors import (BoundaryError, ConfigError, GeometryError, LbmCrackError, NumericalError,
                     StreamingError)
from .fracture import KCriterion, Steady, crack_speed_of_K, evaluate_sif, r_min_of_v
from .kernels import BACKEND
from .lattice import DEFAULT_KAPPA, LatticeSpec, LatticeState, MaterialParams
from .simulation import Simulation, run_simulation

__all__ = [
    "BACKEND", "BoundaryError", "ConfigError", "DEFAULT_KAPPA", "GeometryError", "KCriterion",
    "LatticeSpec", "LatticeState", "LbmCrackError", "MaterialParams", "NumericalError",
    "ScenarioConfig", "Simulation", "Steady", "StreamingError", "StripProblem", "cod_from_sif",
    "crack_speed_of_K", "evaluate_sif", "load_config", "steady_strip_sif", "near_tip_displacement",
    "r_min_of_v", "run_simulation",
]
