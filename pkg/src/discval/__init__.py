"""Rank-one discrete valuations of k((X_1..X_n)) built from substitution maps.

Exact arithmetic over Q(u^(1/N)), truncated series, values and residues,
algebraicity witnesses for residues, and the constant-absorption descent.
"""

from .descent import DescentCertificate, descend, replay
from .errors import (DiscvalError, DivisionByZero, IterationBudgetExceeded,
                     NonUnitInput, PrecisionExhausted, WitnessCheckFailed)
from .exactnum import (U, AnnPoly, UElem, UPoly, annihilating_polynomial, arith,
                       is_constant, to_root_form)
from .expr import parse_expr, parse_map, parse_polynomial, print_expr
from .series import EXACT, MultiSeries, TSeries, compose, leading_form
from .valuation import (Phi, PhiSpec, Residue, build_phi, custom_phi,
                        probe_injectivity, residue, value, value_quot)
from .witnesses import INFINITE, GeneratorSet, Witness, make_witness, residue_generators

__version__ = "0.1.0"

__all__ = [
    "DescentCertificate", "descend", "replay",
    "DiscvalError", "DivisionByZero", "IterationBudgetExceeded", "NonUnitInput",
    "PrecisionExhausted", "WitnessCheckFailed",
    "U", "AnnPoly", "UElem", "UPoly", "annihilating_polynomial", "arith", "is_constant",
    "to_root_form",
    "parse_expr", "parse_map", "parse_polynomial", "print_expr",
    "EXACT", "MultiSeries", "TSeries", "compose", "leading_form",
    "Phi", "PhiSpec", "Residue", "build_phi", "custom_phi", "probe_injectivity", "residue",
    "value", "value_quot",
    "INFINITE", "GeneratorSet", "Witness", "make_witness", "residue_generators",
]
