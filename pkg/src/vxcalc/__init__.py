"""Exact computations with chiral differential operators on charts."""
from __future__ import annotations

from .exact import Poly, Ring, parse_poly
from .fock import FockSpace, GeneratorTable, State
from .products import act, borcherds_residual, nth_product

__all__ = ["FockSpace", "GeneratorTable", "Poly", "Ring", "State", "act", "borcherds_residual",
           "nth_product", "parse_poly"]
__version__ = "0.1.0"
