"""Exact divisor sums, truncated Lambert series and identity verification."""
from __future__ import annotations

from .coefficient_sums import DEFINITION_VARIANT, PROOF_VARIANT, FormulaVariant
from .divisor_functions import (
    IntegerExp,
    ModeError,
    PowerSum,
    RealExp,
    SymbolicShift,
    binomial_divisor_sum,
    sigma,
    sigma_bounded,
)
from .expansions import Method, s4_coeff, s8_coeff, sigma_via_exact_formula
from .power_series import TruncatedSeries
from .verifier import CATALOG, ParameterGrid, VerificationReport, auto_resolution, verify, verify_all

__all__ = [
    "CATALOG",
    "DEFINITION_VARIANT",
    "FormulaVariant",
    "IntegerExp",
    "Method",
    "ModeError",
    "PROOF_VARIANT",
    "ParameterGrid",
    "PowerSum",
    "RealExp",
    "SymbolicShift",
    "TruncatedSeries",
    "VerificationReport",
    "auto_resolution",
    "binomial_divisor_sum",
    "s4_coeff",
    "s8_coeff",
    "sigma",
    "sigma_bounded",
    "sigma_via_exact_formula",
    "verify",
    "verify_all",
]
