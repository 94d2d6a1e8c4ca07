"""Numerical certification of two-state uncertainty bounds for normal operators."""

from .errors import GurlabError
from .records import ExperimentRecord, make_record
from .ur_core import (GurReport, Method, deviation, gur_bound, lambda_form, mean, moments,
                      oracle_infimum, pair_moments, robertson, stationary_lambdas,
                      stationary_polynomial, unitary_spread, weak_commutator)

__version__ = "0.1.0"

__all__ = [
    "GurlabError", "ExperimentRecord", "make_record",
    "GurReport", "Method", "deviation", "gur_bound", "lambda_form", "mean", "moments",
    "oracle_infimum", "pair_moments", "robertson", "stationary_lambdas",
    "stationary_polynomial", "unitary_spread", "weak_commutator",
]
