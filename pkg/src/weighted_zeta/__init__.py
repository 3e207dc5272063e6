"""Weighted Ihara zeta functions, Bass operators and prime geodesic counts."""

from .bass import BassMatrix, apply, build_bass, fredholm_coeffs, trace_power
from .cycles import CountTable, CycleClass, count_table, enumerate_cycles
from .graph import (
    OrientedEdge,
    ValidationReport,
    WeightedGraph,
    dump_graph,
    fixture,
    load_graph,
    parse_graph,
    random_graph,
    validate,
)
from .pgt import asymptotic_check, double_cycle_criterion, pgt_fit, pgt_parameters
from .spectral import decompose, is_irreducible, spectrum, verify_pf
from .translations import (
    Lattice,
    N_of_k,
    TranslationFamily,
    build_family,
    joint_spectrum,
    product_family,
    rational_T,
    translation_op,
    verify_building_pgt,
    zeta_multivariate,
)
from .zeta import (
    ZetaFunction,
    log_derivative_series,
    radius_characterization,
    verify_determinant_identity,
    zeta,
)

__version__ = "0.1.0"

__all__ = [
    "apply",
    "asymptotic_check",
    "BassMatrix",
    "build_bass",
    "build_family",
    "count_table",
    "CountTable",
    "CycleClass",
    "decompose",
    "double_cycle_criterion",
    "dump_graph",
    "enumerate_cycles",
    "fixture",
    "fredholm_coeffs",
    "is_irreducible",
    "joint_spectrum",
    "Lattice",
    "load_graph",
    "log_derivative_series",
    "N_of_k",
    "OrientedEdge",
    "parse_graph",
    "pgt_fit",
    "pgt_parameters",
    "product_family",
    "radius_characterization",
    "random_graph",
    "rational_T",
    "spectrum",
    "trace_power",
    "translation_op",
    "TranslationFamily",
    "validate",
    "ValidationReport",
    "verify_building_pgt",
    "verify_determinant_identity",
    "verify_pf",
    "WeightedGraph",
    "zeta",
    "zeta_multivariate",
    "ZetaFunction",
]
