"""Exact tools for testing polynomial relations between Hecke eigenvalues of
genus-2 Siegel modular forms, and the group-theoretic machinery behind them."""

from .characters import DirichletChar, KappaPair, enumerate_chars, kappa_pair
from .exactfield import CycNum, zeta
from .gsp4 import GSpMatrix, companion_for, nonvanishing_witness, std_trace
from .heckedata import EllipticForm, SiegelForm, bp, spin_euler_factor
from .laurent import LaurentPoly, VarAlphabet, exact_div, mu_norm, parse_poly, rewrite_invariant_pair
from .relations import test_relation, twist_search

__all__ = [
    "CycNum", "zeta", "LaurentPoly", "VarAlphabet", "parse_poly", "exact_div", "mu_norm",
    "rewrite_invariant_pair", "DirichletChar", "KappaPair", "kappa_pair", "enumerate_chars",
    "SiegelForm", "EllipticForm", "bp", "spin_euler_factor", "GSpMatrix", "companion_for",
    "std_trace", "nonvanishing_witness", "test_relation", "twist_search",
]
