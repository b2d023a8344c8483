"""Exception hierarchy.

Config problems and numerical failures are kept apart so the CLI can map
them onto distinct exit codes.
"""


class LbmCrackError(Exception):
    pass


class ConfigError(LbmCrackError):
    """Invalid scenario, material or lattice parameters."""


class GeometryError(ConfigError):
    """Degenerate geometry, e.g. a crack lying on a lattice line."""


class NumericalError(LbmCrackError):
    """Raised when a simulation cannot continue (singular system, NaNs, ...)."""


class BoundaryError(NumericalError):
    pass


class StreamingError(NumericalError):
    pass
