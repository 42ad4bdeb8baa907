"""Exact computations for the symplectic fermion vertex operator superalgebra.

The even part T+ of the rank-d symplectic fermions, its four irreducible
modules at d = 1 (T+, T-, Tt+, Tt-), their Zhu algebras and bimodules, and
the fusion rules among them.
"""

from .exact import PolyQ, build_A_matrix, delta_coeffs, det_fraction_free, verify_det_identity
from .fock import State, gen_e, gen_f, grade_basis
from .vertex import VertexEngine, strong_generators

__all__ = [
    "PolyQ",
    "State",
    "VertexEngine",
    "build_A_matrix",
    "delta_coeffs",
    "det_fraction_free",
    "gen_e",
    "gen_f",
    "grade_basis",
    "strong_generators",
    "verify_det_identity",
]
