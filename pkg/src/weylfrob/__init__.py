"""Exact construction of Frobenius manifolds on extended affine Weyl orbit
spaces of type B/C, with full symbolic verification.

Everything is computed over the rationals: sparse Laurent polynomials on
weighted charts, exact linear solves, fraction-free determinants.  The main
entry point is :func:`weylfrob.frobenius.build_structure`; the CLI lives in
:mod:`weylfrob.cli`.
"""

from .exactalg import (Chart, ChartMismatch, LinearSolveResult, NonExactDivision,
                       NonUnitLaurentSubstitution, NotHomogeneous, Poly, Rational,
                       VarSpec, solve_linear)
from .frobenius import (EulerField, FrobeniusStructure, PotentialF, build_structure,
                        oracle_check, verify_euler_unity, verify_intersection,
                        verify_wdvv)
from .metrics import BilinearForm, ChristoffelContra, FlatPencil, build_pencil
from .rootdata import (DegreeData, ExtendedMetric, InvalidSpec, RootSystemSpec,
                       build, dual_index)

__all__ = [
    "Chart", "ChartMismatch", "LinearSolveResult", "NonExactDivision",
    "NonUnitLaurentSubstitution", "NotHomogeneous", "Poly", "Rational", "VarSpec",
    "solve_linear", "DegreeData", "ExtendedMetric", "InvalidSpec",
    "RootSystemSpec", "build", "dual_index", "BilinearForm", "ChristoffelContra",
    "FlatPencil", "build_pencil", "EulerField", "FrobeniusStructure", "PotentialF",
    "build_structure", "oracle_check", "verify_euler_unity", "verify_intersection",
    "verify_wdvv",
]
