"""
Exception types raised by the simulator.
"""


class LocalizabilityError(Exception):
    """Base class for every error the package raises on purpose."""


class NetworkError(LocalizabilityError, ValueError):
    """Invalid node positions, ids, beacon sets or hole regions."""


class BranchError(LocalizabilityError, ValueError):
    """Misuse of an extension sequence (fresh-vertex or parent violations)."""


class GraphSizeError(LocalizabilityError, ValueError):
    """The graph is too small or too large for the requested computation."""


class GraphTooLargeError(GraphSizeError):
    """A size-capped algorithm was handed a graph above its cap."""


class UnknownProtocolError(LocalizabilityError, KeyError):
    pass


class UnknownScenarioError(LocalizabilityError, KeyError):
    pass


class RenderError(LocalizabilityError, OSError):
    """The state map could not be produced or written."""


class ConfigurationError(LocalizabilityError, ValueError):
    """Experiment parameters outside their supported ranges."""
