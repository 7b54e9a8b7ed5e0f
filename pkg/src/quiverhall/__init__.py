"""Exact computations with quivers, their representations over prime fields,
Ringel-Hall algebras, and the moment-map layer of the double quiver."""

from .coeff_arith import QQ, HallCoefficient, LaurentPoly, PrimeField, quantum_binomial, quantum_int
from .errors import (
    AmbiguousKey,
    BudgetExceeded,
    ClassifierDisagreement,
    FieldNotSplitting,
    InterpolationUnstable,
    InvariantViolation,
    QuiverHallError,
    Undecided,
)
from .forms import classify_type, euler_form, positive_roots, tits_form
from .hall import HallAlgebra, HallElement, generic_lift, serre_check, u_plus_graded_dim
from .nakajima import DoubleRepPoint, FramedPoint, is_nilpotent, is_stable, lambda_points, moment_map
from .path_algebra import PathAlgElem, pa_multiply, triangular_iso
from .quiver import (
    Arrow,
    Path,
    Quiver,
    cyclic_quiver,
    double,
    jordan_quiver,
    kronecker_quiver,
    linear_quiver,
    load_quiver,
)
from .representation import Rep, enumerate_iso_classes, is_indecomposable, is_isomorphic, krull_schmidt

__all__ = [
    "QQ", "HallCoefficient", "LaurentPoly", "PrimeField", "quantum_binomial", "quantum_int",
    "AmbiguousKey", "BudgetExceeded", "ClassifierDisagreement", "FieldNotSplitting",
    "InterpolationUnstable", "InvariantViolation", "QuiverHallError", "Undecided",
    "classify_type", "euler_form", "positive_roots", "tits_form",
    "HallAlgebra", "HallElement", "generic_lift", "serre_check", "u_plus_graded_dim",
    "DoubleRepPoint", "FramedPoint", "is_nilpotent", "is_stable", "lambda_points", "moment_map",
    "PathAlgElem", "pa_multiply", "triangular_iso",
    "Arrow", "Path", "Quiver", "cyclic_quiver", "double", "jordan_quiver", "kronecker_quiver",
    "linear_quiver", "load_quiver",
    "Rep", "enumerate_iso_classes", "is_indecomposable", "is_isomorphic", "krull_schmidt",
]

__version__ = "0.1.0"
