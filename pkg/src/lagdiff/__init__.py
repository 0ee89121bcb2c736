"""Stable Laguerre pseudospectral differentiation matrices."""

from .collocation import NodeFamily, NodeSet, ScaledCoeffs, build_nodeset, scaled_coeffs
from .difmat import (
    BreakdownReport,
    DiffMatrix,
    RangeLimitError,
    classic_construction,
    differentiation_matrix,
    first_order,
    higher_order,
    interpolate,
    negative_sum_diagonal,
    scaled_operators,
    second_order,
)
from .glr import RootSweepResult, sweep_roots
from .laguerre import EvalPair, LaguerreParam, eval_function, eval_function_modified, eval_poly

__version__ = "0.1.0"

__all__ = [
    "BreakdownReport",
    "DiffMatrix",
    "EvalPair",
    "LaguerreParam",
    "NodeFamily",
    "NodeSet",
    "RangeLimitError",
    "RootSweepResult",
    "ScaledCoeffs",
    "build_nodeset",
    "classic_construction",
    "differentiation_matrix",
    "eval_function",
    "eval_function_modified",
    "eval_poly",
    "first_order",
    "higher_order",
    "interpolate",
    "negative_sum_diagonal",
    "scaled_coeffs",
    "scaled_operators",
    "second_order",
    "sweep_roots",
]
