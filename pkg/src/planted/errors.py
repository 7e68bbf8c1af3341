"""Exception hierarchy.

Everything except :class:`CapacityError` is a configuration problem (bad
vertex index, odd ``n`` for a matching, probability out of range, ...) and
maps to CLI exit code 2. Capacity errors map to exit code 3.
"""


class PlantedError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PlantedError, ValueError):
    """Invalid input or configuration."""


class InvalidEdgeError(ConfigError):
    pass


class DimensionError(ConfigError):
    pass


class ModelError(ConfigError):
    """Model parameters that do not describe a valid pair of hypotheses."""


class DomainError(ConfigError):
    """Argument outside the mathematical domain of a formula."""


class ParameterError(ConfigError):
    """Degenerate parameters (e.g. a reparameterized probability equal to 0)."""


class CapacityError(PlantedError):
    """Instance too large for exhaustive enumeration."""
