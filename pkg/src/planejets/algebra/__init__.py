"""Exact polynomial machinery on jet variables and finite-field counting."""

from .jets import (
    AtLeast,
    NewtonForm,
    NormalFormError,
    Parametrization,
    characteristic_from_parametrization,
    jet_coefficients,
    jet_derivation,
    newton_form,
    ord_t,
    reduced_fiber_check,
)
from .parser import ExpressionSyntaxError, parse_curve
from .polynomial import JetVariable, PlanePolynomial, SparsePolynomial
