"""Computer algebra and spectral numerics for the quantum disc."""

from .context import QContext, Surd
from .errors import (
    DegreeCapExceeded,
    DomainError,
    ExactModeUnsupported,
    NonConvergenceError,
    NonFiniteElementError,
    PoleError,
    QHarmonicError,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "QContext",
    "Surd",
    "QHarmonicError",
    "ValidationError",
    "DomainError",
    "PoleError",
    "ExactModeUnsupported",
    "NonFiniteElementError",
    "NonConvergenceError",
    "DegreeCapExceeded",
]
