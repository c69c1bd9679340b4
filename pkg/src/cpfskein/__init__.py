"""Exact Conway potential function of closed colored braids via skein reduction."""

from .algebra import AlgebraError, DenomFactor, Fraction, LaurentPoly, Minus, Plus, pair_factors
from .braid import BraidError, BraidWord, ColoredBraid, NotClosableError, is_closable, parse_word
from .cpf import (
    AlexanderPoly,
    CPFEngine,
    CPFValue,
    clear_caches,
    cpf_closed_braid,
    merge_colors,
    to_alexander,
    uncolored,
)
from .hartley import normalized_invariant, oracle_invariant
from .skein import reduce_top, verify_cases

__version__ = "0.1.0"

__all__ = [
    "AlexanderPoly",
    "AlgebraError",
    "BraidError",
    "BraidWord",
    "CPFEngine",
    "CPFValue",
    "ColoredBraid",
    "clear_caches",
    "DenomFactor",
    "Fraction",
    "LaurentPoly",
    "Minus",
    "NotClosableError",
    "Plus",
    "cpf_closed_braid",
    "is_closable",
    "merge_colors",
    "normalized_invariant",
    "oracle_invariant",
    "pair_factors",
    "parse_word",
    "reduce_top",
    "to_alexander",
    "uncolored",
    "verify_cases",
]
