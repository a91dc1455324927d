"""Exact computations with trimmed Gorenstein ideals in k[x, y, z]."""

from .linalg import DEFAULT_PRIME
from .poly import DualForm, Poly, parse_dual, parse_poly, variables
from .altpf import AltMatrix, family, sub_pfaffians
from .ideal import GradedIdeal, InverseSystem, ann, hilbert, min_gens, trim

__all__ = [
    "DEFAULT_PRIME", "Poly", "DualForm", "parse_poly", "parse_dual", "variables",
    "AltMatrix", "family", "sub_pfaffians",
    "GradedIdeal", "InverseSystem", "ann", "hilbert", "min_gens", "trim",
]
__version__ = "0.1.0"
