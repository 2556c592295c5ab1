"""Exact Hall algebras of cyclic and fixed-size complexes of projectives.

The library is organized bottom-up:

- ``field``       dense exact linear algebra over F_p
- ``quiver``      acyclic quivers
- ``reps``        the module category rep(kQ): Hom/Ext, covers, decomposition
- ``complexes``   cyclic / fixed-size / bounded complexes of projectives
- ``hall``        untwisted Hall algebras and the cyclic-to-window collapse
- ``localized``   twisted, localized algebras: generators, relations, bases
- ``integration`` the two-term quantum torus and the integration character
- ``suites``      named verification suites (shared by CLI and tests)
- ``cli``         command-line driver (enumerate / product / verify)
"""

from .complexes import ComplexCategory, Cx
from .errors import BudgetExceededError, DomainError, HallcpxError, InconsistencyError
from .field import PrimeField, enumerate_subspaces, gaussian_binomial
from .hall import ComplexBackend, HallAlgebra, HallElt, ModuleBackend
from .integration import TwoTermTorus
from .localized import Localized, MHElt
from .quiver import Quiver, a_n_quiver
from .reps import ModuleCategory, Rep, RepMap

__all__ = [
    "BudgetExceededError",
    "ComplexBackend",
    "ComplexCategory",
    "Cx",
    "DomainError",
    "HallAlgebra",
    "HallElt",
    "HallcpxError",
    "InconsistencyError",
    "Localized",
    "MHElt",
    "ModuleBackend",
    "ModuleCategory",
    "PrimeField",
    "Quiver",
    "Rep",
    "RepMap",
    "TwoTermTorus",
    "a_n_quiver",
    "enumerate_subspaces",
    "gaussian_binomial",
]
