"""The quantum disc: element algebra, Fock representation, generator
actions, invariant integral and the radial spectral theory of the
invariant Laplacian."""

from .element import *  # noqa: F401,F403
from .element import __all__ as _element_all
from .radial import *  # noqa: F401,F403
from .radial import __all__ as _radial_all
from .radial import laplacian_radial_eigenvalues  # noqa: F401

__all__ = list(_element_all) + list(_radial_all) + ["laplacian_radial_eigenvalues"]
