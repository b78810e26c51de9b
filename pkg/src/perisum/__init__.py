"""perisum: periodic pair-interaction kernels and energies on unit-covolume lattices.

Evaluates renormalized periodic kernels (Riesz, log-Riesz, logarithmic,
Gaussian) through Ewald-type split sums, computes energies and gradients of
point configurations on the torus, runs torus-constrained minimization, and
ships a suite of exact one-dimensional reference laws for validation.
"""

__version__ = "0.1.0"

from . import energy, kernel, lattice, specfun, validate  # noqa: F401
from .energy import Configuration, minimize, total_energy  # noqa: F401
from .kernel import (  # noqa: F401
    EwaldPlan,
    Gaussian,
    Log,
    LogRiesz,
    Riesz,
    plan_ewald,
)
from .lattice import Lattice, lattice_from_basis, lattice_preset  # noqa: F401
