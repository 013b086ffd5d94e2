"""balfi-lab: a workbench for self-extensional Logics of Formal Inconsistency.

Parses formulas over the LFI and (bi)modal signatures, checks Hilbert-style
derivations with careful-reasoning rule regimes, decides validity and local /
global consequence over finite BALFI collections, searches for countermodels
by pruned enumeration, evaluates neighborhood and minimal bimodal semantics
with the box-translation, and evaluates quantified formulas over finite
first-order structures.
"""

from .algebra import PowersetAlgebra
from .balfi import Balfi, check_balfi, classical_balfi, evaluate, is_valid_in, models_schema
from .syntax import Schema, parse, render, schema

__all__ = [
    "PowersetAlgebra",
    "Balfi",
    "check_balfi",
    "classical_balfi",
    "evaluate",
    "is_valid_in",
    "models_schema",
    "Schema",
    "parse",
    "render",
    "schema",
]

__version__ = "0.1.0"
