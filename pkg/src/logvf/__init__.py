"""Logarithmic vector fields of hypersurface germs, with certificates.

The package computes the module of vector fields tangent to a hypersurface
f = 0, decides freeness and homogeneity questions about it, extracts the
formal diagonal structure of the germ, and reports everything through a
JSON-friendly dictionary or the `logvf` command line tool.  Every
nontrivial answer is re-checked against an exact witness before it is
returned; a failed witness raises CertificateFailure instead of producing
output.
"""

from .errors import (CertificateFailure, HasConstantPart, LogvfError,
                     NonRationalEigenvalues, NotFree, NotLogarithmic,
                     ParseError, PrecisionRequired, PreconditionViolated,
                     ProductInput, TruncationTooSmall, UnknownVariable,
                     VanishesAtOrigin, WrongCount)
from .poly import Jet, Polynomial, as_poly, poly_parse
from .vfield import VectorField, lie_bracket, vf_to_str
from .derlog import (LogDerModule, coefficient_matrix, derlog_generators,
                     euler_check, is_product, koszul_free_check, minimalize,
                     poly_det, saito_free_check, squarefree_check,
                     strong_euler_check)
from .liealg import (LieAlgebraPresentation, ad_matrix, center_dimension,
                     is_solvable, nilpotency_check, truncated_lie_algebra)
from .normalform import (CoordChange, FactorStructure, FormalStructure,
                         constant_field_split, default_truncation,
                         diagonal_symmetries, factor_structure,
                         formal_structure, homological_solve, pd_normalize,
                         straighten_unit_field, unit_adjust, verify_cor16)
from .standard_bases import (MembershipCertificate, StandardBasis,
                             default_precision, ideal_dimension, membership,
                             module_intersection, standard_basis, syzygies)
from .cech import (CechClass, cech_project, d1_apply, d1_kernel_search,
                   lct_obstruction_witness, trace_formula_check)
from .report import analyze, check_expectations, parse_div, render_text

__version__ = "0.1.0"

__all__ = [
    "CertificateFailure", "HasConstantPart", "LogvfError",
    "NonRationalEigenvalues", "NotFree", "NotLogarithmic", "ParseError",
    "PrecisionRequired", "PreconditionViolated", "ProductInput",
    "TruncationTooSmall", "UnknownVariable", "VanishesAtOrigin", "WrongCount",
    "Jet", "Polynomial", "as_poly", "poly_parse",
    "VectorField", "lie_bracket", "vf_to_str",
    "LogDerModule", "coefficient_matrix", "derlog_generators", "euler_check",
    "is_product", "koszul_free_check", "minimalize", "poly_det",
    "saito_free_check", "squarefree_check", "strong_euler_check",
    "LieAlgebraPresentation", "ad_matrix", "center_dimension", "is_solvable",
    "nilpotency_check", "truncated_lie_algebra",
    "CoordChange", "FactorStructure", "FormalStructure",
    "constant_field_split", "default_truncation", "diagonal_symmetries",
    "factor_structure", "formal_structure", "homological_solve",
    "pd_normalize", "straighten_unit_field", "unit_adjust", "verify_cor16",
    "MembershipCertificate", "StandardBasis", "default_precision",
    "ideal_dimension", "membership", "module_intersection", "standard_basis",
    "syzygies",
    "CechClass", "cech_project", "d1_apply", "d1_kernel_search",
    "lct_obstruction_witness", "trace_formula_check",
    "analyze", "check_expectations", "parse_div", "render_text",
    "__version__",
]
