"""Exact symbolic computations in weighted KLR algebras."""
from .algebra import NOT_HOMOGENEOUS, ZERO_MISMATCH, AlgebraError, WklrAlgebra, WklrElement
from .hall import (FqRep, HallError, HallFunction, QSqrt, check_hq_algebra_map, func_y,
                   hall_comult, hall_mult, u_dim)
from .loading import (Loading, LoadingError, SizeError, compose, enumerate_chambers,
                      equivalent, shift_eta, signature, well_separated)
from .polyops import DiffFrac, Poly, Skew, demazure
from .quiver import (Edge, Quiver, QuiverError, crawley_boevey, merge_parallel, pairing_bracket,
                     pairing_dot, reverse_edge, validate)
from .relations import RelationReport, check_relation_suite, klr_check
from .steady import Charge, cb_preset, compare_c, steadied_graded_dim, unsteady_idempotents

__version__ = "0.1.0"

__all__ = [
    "AlgebraError", "Charge", "DiffFrac", "Edge", "FqRep", "HallError", "HallFunction",
    "Loading", "LoadingError", "NOT_HOMOGENEOUS", "Poly", "QSqrt", "Quiver", "QuiverError",
    "RelationReport", "SizeError", "Skew", "WklrAlgebra", "WklrElement", "ZERO_MISMATCH",
    "cb_preset", "check_hq_algebra_map", "check_relation_suite", "compare_c", "compose",
    "crawley_boevey", "demazure", "enumerate_chambers", "equivalent", "func_y", "hall_comult",
    "hall_mult", "klr_check", "merge_parallel", "pairing_bracket", "pairing_dot",
    "reverse_edge", "shift_eta", "signature", "steadied_graded_dim", "u_dim",
    "unsteady_idempotents", "validate", "well_separated",
]
