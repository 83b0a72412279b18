"""Linear differential operators with polynomial coefficients."""
from .io import OperatorFormatError, format_operator, parse_operator, parse_ratfunc, read_operator, write_operator
from .operator import (
    DiffOp,
    Division,
    adjoint,
    apply,
    first_order_from_solution,
    left_divide,
    mul,
    projection_constant,
    right_divide,
)
from .ratfunc import RatFunc
from .wronskian import (
    hyperexponential_closed_form,
    hyperexponential_series,
    logderiv_of_product,
    wronskian_logderiv,
)

__all__ = [
    "DiffOp",
    "OperatorFormatError",
    "Division",
    "RatFunc",
    "adjoint",
    "apply",
    "first_order_from_solution",
    "format_operator",
    "hyperexponential_closed_form",
    "hyperexponential_series",
    "left_divide",
    "logderiv_of_product",
    "mul",
    "parse_operator",
    "parse_ratfunc",
    "projection_constant",
    "read_operator",
    "right_divide",
    "wronskian_logderiv",
    "write_operator",
]
