"""Shared exception types for the energy laboratory.

Everything raised on purpose by this package derives from LabError so that
callers (notably the CLI) can distinguish "bad input / resolvable config
problem" from genuine bugs.
"""


class LabError(Exception):
    """Base class for all deliberate failures raised by this package."""


class DomainError(LabError, ValueError):
    """An argument fell outside the mathematical domain of an operation."""


class InversionError(LabError):
    """Bisection inversion failed to bracket the requested value."""


class ResourceBudgetError(LabError):
    """A computation would exceed the configured cell / node budget."""


class DepthBudgetError(LabError):
    """A Cantor-type evaluation needs more construction depth than built."""


class ConstructionError(LabError):
    """An interval-removal construction produced an inconsistent state."""


class BreakpointResolutionError(LabError):
    """The Orlicz linear-piece breakpoints could not be resolved."""


class UnresolvedSpecError(LabError):
    """An Orlicz spec was used in a mode that needs resolved breakpoints."""


class QuadratureOverflowError(LabError):
    """A quadrature refinement diverged instead of settling (non-integrable)."""


class PrecisionError(LabError):
    """Node doubling hit its cap before reaching the requested tolerance."""


class ConfigError(LabError):
    """Bad CLI / config input."""
