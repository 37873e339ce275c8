"""Exact univariate algebra: scalars, polynomials, rational functions, poles."""

from .parse import parse_expression
from .poles import (AlgebraicSurd, AlphaPair, Infinity, PoleSite, alpha_exponents, in_base_field,
                    coefficient_at_infinity, laurent_coefficient, order_at_infinity,
                    rational_sqrt, singular_profile, sqrt_discriminant)
from .poly import (ZERO_DEGREE, Polynomial, poly_gcd, poly_lcm, poly_xgcd, render_poly,
                   squarefree_decomposition, squarefree_part)
from .ratfunc import RationalFunction, derivative, normalize, render
from .roots import (AlgebraicNumber, AlgebraicPoint, approximate_roots, isolate_roots,
                    rational_roots, split_by_rational_value)
from .scalars import GaussianRational, MixedSurdError, QuadraticSurd, exact, is_real, parts, render_scalar, to_complex

__all__ = [
    "AlgebraicNumber", "AlgebraicPoint", "AlphaPair", "GaussianRational", "Infinity",
    "PoleSite", "Polynomial", "QuadraticSurd", "AlgebraicSurd", "MixedSurdError", "in_base_field", "RationalFunction", "ZERO_DEGREE",
    "alpha_exponents", "approximate_roots", "coefficient_at_infinity", "derivative",
    "exact", "is_real", "isolate_roots", "laurent_coefficient", "normalize",
    "order_at_infinity", "parse_expression", "parts", "poly_gcd", "poly_lcm", "poly_xgcd",
    "rational_roots", "rational_sqrt", "render", "render_poly", "render_scalar",
    "singular_profile", "split_by_rational_value", "sqrt_discriminant",
    "squarefree_decomposition", "squarefree_part", "to_complex",
]
