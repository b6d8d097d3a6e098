"""Quantum weight enumerators: subset and weight enumerators, conversions, and code analysis."""

from .analysis import analyze, audit_inequalities, certify_distance, check_purity, erasure_report
from .codes import named_code
from .constructions import concatenate, extend, shorten
from .enumerators import enumerator_tables, weight_enumerators
from .errors import ConsistencyError, ContractError
from .hilbert import CodeStates, Factorization, Operator
from .polynomials import EnumPolynomial, macwilliams, shadow_poly
from .stabilizer import parse_stabilizer

__all__ = [
    "CodeStates", "ConsistencyError", "ContractError", "EnumPolynomial", "Factorization", "Operator",
    "analyze", "audit_inequalities", "certify_distance", "check_purity", "concatenate",
    "enumerator_tables", "erasure_report", "extend", "macwilliams", "named_code", "parse_stabilizer",
    "shadow_poly", "shorten", "weight_enumerators",
]
