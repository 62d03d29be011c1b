"""heunseries: local series solutions of the general Heun equation."""

__version__ = "0.1.0"

from .core import Branch, BranchKind, HeunParams, SeriesValue, make_branch, validate_params
from .recurrence import SeriesControl, frobenius_coeffs, frobenius_eval
from .trf import TrfTruncation, detect_b_termination, trf_eval, trf_extract_coeffs

__all__ = [
    "Branch", "BranchKind", "HeunParams", "SeriesControl", "SeriesValue", "TrfTruncation",
    "detect_b_termination", "frobenius_coeffs", "frobenius_eval", "make_branch",
    "trf_eval", "trf_extract_coeffs", "validate_params",
]
