"""Geometry of 2-step nilpotent Lie groups with left-invariant pseudo-Riemannian metrics."""

from .algebra import (
    CausalClass,
    Decomposition,
    NilAlgebra,
    algebra_document,
    bch_mul,
    causal_character,
    center,
    j_map,
    load_algebra,
    ph_type_check,
    witt_decompose,
)
from .curvature import connection_table, curvature, flatness_report, ricci, scalar_curvature, sectional
from .errors import MethodUnavailable, NilgeoError

__all__ = [
    "CausalClass",
    "Decomposition",
    "MethodUnavailable",
    "NilAlgebra",
    "NilgeoError",
    "algebra_document",
    "bch_mul",
    "causal_character",
    "center",
    "connection_table",
    "curvature",
    "flatness_report",
    "j_map",
    "load_algebra",
    "ph_type_check",
    "ricci",
    "scalar_curvature",
    "sectional",
    "witt_decompose",
]
