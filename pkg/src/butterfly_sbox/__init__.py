"""Butterfly S-boxes over GF(2^k)^2: construction and exhaustive property analysis."""
from .butterfly import (CLOSED, OPEN, ButterflyParams, closed_eval, keyed_perm,
                        keyed_perm_inv, materialize_lut, open_eval)
from .gf2k import FieldSpec, make_field
from .vbf import AnalysisReport, Vbf, analyze

__version__ = "0.1.0"

__all__ = ["CLOSED", "OPEN", "ButterflyParams", "closed_eval", "keyed_perm", "keyed_perm_inv",
           "materialize_lut", "open_eval", "FieldSpec", "make_field", "AnalysisReport", "Vbf",
           "analyze"]
