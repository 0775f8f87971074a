"""Exceptional points of parameter-dependent Hamiltonians.

The pipeline: truncate a Hamiltonian family H(lambda) to dimension n,
form the secular polynomial p_n(E, lambda), take its discriminant in E
to get a single polynomial F_n(lambda), find every complex root, and
keep the roots that persist as the truncation grows.  Surviving roots
are square-root branch points where two (or more) energy levels
coalesce at a complex coupling.
"""

from .discriminant import (
    DegenerateTruncationError,
    bareiss_det,
    det_lu,
    disc_in_E,
    discriminant,
    resultant,
    sylvester,
)
from .epsolver import (
    ExceptionalPoint,
    RefinementError,
    ScanReport,
    SymmetryReport,
    match_filter,
    refine_ep,
    scan,
    symmetry_partition,
)
from .models import (
    ModelSpec,
    box_x_element,
    box_x2_element,
    dense_matrix,
    recurrence_coeffs,
    scale_map,
    scale_map_E,
)
from .poly import BiPoly, UniPoly
from .report import read_json, report_from_json, report_to_json, write_csv, write_json
from .rings import (
    DEFAULT_PRECISION,
    QQ,
    ComplexField,
    RealField,
    working_precision,
)
from .rootfind import RootFindingError, roots_all
from .charpoly import SecularPoly, secular, secular_dense, secular_tridiagonal
from .toy3 import Q2I, ep_pair, jordan_at_ep, toy_charpoly, toy_disc

__version__ = "0.1.0"

__all__ = [
    "BiPoly",
    "ComplexField",
    "DEFAULT_PRECISION",
    "DegenerateTruncationError",
    "ExceptionalPoint",
    "ModelSpec",
    "QQ",
    "Q2I",
    "RealField",
    "RefinementError",
    "RootFindingError",
    "ScanReport",
    "SecularPoly",
    "SymmetryReport",
    "UniPoly",
    "bareiss_det",
    "box_x2_element",
    "box_x_element",
    "dense_matrix",
    "det_lu",
    "disc_in_E",
    "discriminant",
    "ep_pair",
    "jordan_at_ep",
    "match_filter",
    "read_json",
    "recurrence_coeffs",
    "refine_ep",
    "report_from_json",
    "report_to_json",
    "resultant",
    "roots_all",
    "scale_map",
    "scale_map_E",
    "scan",
    "secular",
    "secular_dense",
    "secular_tridiagonal",
    "sylvester",
    "symmetry_partition",
    "toy_charpoly",
    "toy_disc",
    "working_precision",
    "write_csv",
    "write_json",
]
