"""su(1,1) ladder-operator treatment of the Dirac-Coulomb radial problem.

Exact operator algebra (``symbolic_ops``), closed-form spectrum
(``spectrum``), quasi-polynomial radial states (``states``) and the
numeric verification harness (``ladder``).
"""

__version__ = "0.1.0"

from .errors import DomainError
from .report import CheckEntry, VerificationReport
from .spectrum import QuantumNumbers, SpectralParams, energy_of, level_diagram, s_of
from .states import QuasiPolynomial, basis_state, inner_product, normalize, physical_component
from .symbolic_ops import DiffOp, Generator, ScalarPoly, build_generator, verify_algebra

__all__ = [
    "CheckEntry",
    "DiffOp",
    "DomainError",
    "Generator",
    "QuantumNumbers",
    "QuasiPolynomial",
    "ScalarPoly",
    "SpectralParams",
    "VerificationReport",
    "basis_state",
    "build_generator",
    "energy_of",
    "inner_product",
    "level_diagram",
    "normalize",
    "physical_component",
    "s_of",
    "verify_algebra",
]
