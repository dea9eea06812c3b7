"""Descendants of two-variable means, spectral certificates, and M-convexity checks.

The compiled core does the work; this package re-exports its surface.
Extended reals cross the boundary as floats (+-inf allowed), exact rationals
as "p/q" strings.
"""

from ._core import (
    __version__,
    MeandescError,
    MeandescParseError,
    ac_closure_ops,
    addition_nonclosure_witness,
    all_below_one,
    brute_force_fixed_points,
    char_poly,
    check_chain,
    check_convexity,
    classify_rational,
    closed_form_quasiarithmetic,
    closed_form_rmat,
    descendant_eval,
    eigenvalues,
    exact_convexity_scan,
    generate_r_fractions,
    lipschitz_modulus,
    lower_dd,
    lower_sum,
    mean_eval,
    positive_eigenvector,
    sigma_weights,
    sigma_weights_exact,
    solve_descendants,
    squeeze_values,
    sufficiency_check,
    upper_dd,
    upper_sum,
    w_sequence,
    x1_upper_scan,
)

__all__ = [
    "__version__",
    "MeandescError",
    "MeandescParseError",
    "ac_closure_ops",
    "addition_nonclosure_witness",
    "all_below_one",
    "brute_force_fixed_points",
    "char_poly",
    "check_chain",
    "check_convexity",
    "classify_rational",
    "closed_form_quasiarithmetic",
    "closed_form_rmat",
    "descendant_eval",
    "eigenvalues",
    "exact_convexity_scan",
    "generate_r_fractions",
    "lipschitz_modulus",
    "lower_dd",
    "lower_sum",
    "mean_eval",
    "positive_eigenvector",
    "sigma_weights",
    "sigma_weights_exact",
    "solve_descendants",
    "squeeze_values",
    "sufficiency_check",
    "upper_dd",
    "upper_sum",
    "w_sequence",
    "x1_upper_scan",
]
