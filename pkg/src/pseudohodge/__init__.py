"""Exact calculator for tautological classes on elliptic-tail strata and quadratic Hodge integrals."""
from .arith import Rational, bernoulli, double_factorial_odd, factorial, rat
from .graphs import GraphSum, RootDecoration, TailDecoration, TailGraph, canonicalize, validate_indices
from .psipoly import PsiPolynomial
from .algebra import (
    codim_part,
    mumford_lhs,
    mumford_rhs,
    normalize,
    product,
    product_bruteforce,
    pullback_lambda,
    pullback_psi_polynomial,
)
from .wk import TauIndex, WKEngine, one_point_closed_form, psi_intersection, string_reduce
from .hodge import (
    UnsupportedHodgePart,
    faber_integral,
    integrate,
    lemma_sum,
    mfint_full,
    mumford_integral_family,
    ps_faber,
    qhi_lhs_via_graphs,
    qhi_rhs,
)
from .series import TruncatedSeries, build_F, exp_z_over_24, series_equal_report

__version__ = "0.1.0"

__all__ = [
    "Rational",
    "bernoulli",
    "double_factorial_odd",
    "factorial",
    "rat",
    "GraphSum",
    "RootDecoration",
    "TailDecoration",
    "TailGraph",
    "canonicalize",
    "validate_indices",
    "PsiPolynomial",
    "codim_part",
    "mumford_lhs",
    "mumford_rhs",
    "normalize",
    "product",
    "product_bruteforce",
    "pullback_lambda",
    "pullback_psi_polynomial",
    "TauIndex",
    "WKEngine",
    "one_point_closed_form",
    "psi_intersection",
    "string_reduce",
    "UnsupportedHodgePart",
    "faber_integral",
    "integrate",
    "lemma_sum",
    "mfint_full",
    "mumford_integral_family",
    "ps_faber",
    "qhi_lhs_via_graphs",
    "qhi_rhs",
    "TruncatedSeries",
    "build_F",
    "exp_z_over_24",
    "series_equal_report",
]
