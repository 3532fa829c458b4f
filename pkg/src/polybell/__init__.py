"""Exact arithmetic for p-Bell and poly-Bell numbers and polynomials.

The package computes every number by several independent routes (explicit
Stirling sums, a derivative recurrence, a triangle sweep, and a generalized
Bernoulli closed form), verifies the family's generating-function and
pointwise identities at truncated order over exact rationals, and
cross-checks the analytic representations (Dobinski-type series, oscillatory
integrals, Monte Carlo moments of a beta-mixed Poisson law) in floating
point.
"""

from .exact_core import (
    EgfSeries,
    Polynomial,
    Rational,
    RationalLike,
    egf_compose_em1,
    egf_constant,
    egf_derivative,
    egf_div,
    egf_em1,
    egf_exp,
    egf_exp_rz,
    egf_mul,
    egf_pow,
    egf_z,
    egf_zero,
    format_rational,
    parse_rational,
    poly_eval,
    rational,
)
from .identity_verifier import CheckReport, IDENTITY_IDS, run_all, thread_count
from .numeric_bridge import (
    NumericCheck,
    RngStream,
    beta_poisson_batch,
    beta_poisson_sample,
    cesaro_pbell,
    dobinski_pbell,
    dobinski_pbell_poly,
    hyp1f1,
    lower_inc_gamma,
    mc_moment_check,
    mgf_check,
    pmf_check,
)
from .pbell import (
    DEFAULT_BACKEND,
    BackendMismatch,
    PBellBackend,
    pbell_column,
    pbell_egf,
    pbell_explicit,
    pbell_gen_bernoulli,
    pbell_number,
    pbell_poly,
    pbell_poly_weighted,
    pbell_ramanujan_p1,
    pbell_recurrence,
    pbell_z_triangle,
    zpoly_triangle,
)
from .polybell import (
    duality_counterexample,
    iterated_integral_pbell,
    polybell_neg,
    polybell_neg_derivative,
    polybell_neg_int,
    polybell_neg_row_poly,
    polybell_poly,
    polybell_pos,
)
from .special_numbers import (
    CACHE,
    bell_number,
    bell_poly,
    bernoulli,
    gen_bernoulli,
    r_stirling2,
    reset_cache,
    stirling1,
    stirling2,
    weighted_stirling_poly,
    whitney2,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # exact_core
    "Rational",
    "RationalLike",
    "rational",
    "format_rational",
    "parse_rational",
    "Polynomial",
    "poly_eval",
    "EgfSeries",
    "egf_zero",
    "egf_constant",
    "egf_z",
    "egf_exp_rz",
    "egf_em1",
    "egf_mul",
    "egf_pow",
    "egf_exp",
    "egf_div",
    "egf_derivative",
    "egf_compose_em1",
    # special_numbers
    "CACHE",
    "reset_cache",
    "stirling1",
    "stirling2",
    "r_stirling2",
    "weighted_stirling_poly",
    "whitney2",
    "bernoulli",
    "gen_bernoulli",
    "bell_poly",
    "bell_number",
    # pbell
    "PBellBackend",
    "DEFAULT_BACKEND",
    "BackendMismatch",
    "pbell_explicit",
    "pbell_recurrence",
    "pbell_z_triangle",
    "pbell_gen_bernoulli",
    "pbell_number",
    "pbell_column",
    "pbell_egf",
    "pbell_ramanujan_p1",
    "pbell_poly",
    "pbell_poly_weighted",
    "zpoly_triangle",
    # polybell
    "polybell_pos",
    "polybell_neg",
    "polybell_neg_int",
    "polybell_neg_derivative",
    "polybell_neg_row_poly",
    "polybell_poly",
    "duality_counterexample",
    "iterated_integral_pbell",
    # identity_verifier
    "CheckReport",
    "IDENTITY_IDS",
    "run_all",
    "thread_count",
    # numeric_bridge
    "NumericCheck",
    "RngStream",
    "hyp1f1",
    "lower_inc_gamma",
    "dobinski_pbell",
    "dobinski_pbell_poly",
    "cesaro_pbell",
    "beta_poisson_sample",
    "beta_poisson_batch",
    "mc_moment_check",
    "mgf_check",
    "pmf_check",
]
