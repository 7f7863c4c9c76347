"""Exact and Monte Carlo tools for Verblunsky coefficients of random
orthogonal polynomials on the unit circle."""

from .alphamoments import (
    alpha_joint_moment,
    alpha_x_moment,
    count_tuples,
    nice_identity_check,
    tuple_counts_all_m,
    verify_cn_identity,
)
from .combinatorics import GapSequence, MultiIndex, MultiplicityVector, gap_sequences
from .gaussian import (
    MomentPolynomial,
    gaussian_x_moment,
    gaussian_x_moment_raw,
    multiplicity_free_moment,
    variance_pmf,
)
from .graphs import MCondGraph, c_via_graphs, count_colorings, enumerate_m_graphs
from .montecarlo import (
    SampleStats,
    mc_x_moment,
    pushforward_experiment,
    sample_alpha,
    sample_alpha_batch,
    sample_f,
    sample_f_batch,
)
from .opuc import (
    NotPositiveDefiniteError,
    jacobian_determinant,
    measure_density,
    reversed_polynomial,
    szego_identity_gap,
    trig_moments,
    verblunsky_from_moments,
    x_series_truncated,
)
from .ratfunc import BetaPoly, PoleError, RatFuncBeta

__version__ = "0.1.0"

__all__ = [
    "BetaPoly",
    "GapSequence",
    "MCondGraph",
    "MomentPolynomial",
    "MultiIndex",
    "MultiplicityVector",
    "NotPositiveDefiniteError",
    "PoleError",
    "RatFuncBeta",
    "SampleStats",
    "alpha_joint_moment",
    "alpha_x_moment",
    "c_via_graphs",
    "count_colorings",
    "count_tuples",
    "enumerate_m_graphs",
    "gap_sequences",
    "gaussian_x_moment",
    "gaussian_x_moment_raw",
    "jacobian_determinant",
    "mc_x_moment",
    "measure_density",
    "multiplicity_free_moment",
    "nice_identity_check",
    "pushforward_experiment",
    "reversed_polynomial",
    "sample_alpha",
    "sample_alpha_batch",
    "sample_f",
    "sample_f_batch",
    "szego_identity_gap",
    "trig_moments",
    "tuple_counts_all_m",
    "variance_pmf",
    "verblunsky_from_moments",
    "verify_cn_identity",
    "x_series_truncated",
]
