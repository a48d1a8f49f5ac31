"""Moment and concentration bounds from Stein couplings, with Monte Carlo checks."""

from ._core import (
    BoundValue,
    ConfigError,
    NumericError,
    binomial_A,
    c1,
    cor_bounded_tail,
    cor_normal_tail,
    empirical_norm,
    er_constant,
    er_moment_bound,
    generate_er_edges,
    h_k,
    local_dep_moment_bound,
    markov_tail,
    neighbourhood_norm_bound,
    normal_abs_norm,
    prop_independent_bound,
    run,
    thm1_moment_bound,
    thm2_moment_bound,
    thm4_normal_comparison_bound,
)

__all__ = [
    "BoundValue",
    "ConfigError",
    "NumericError",
    "binomial_A",
    "c1",
    "cor_bounded_tail",
    "cor_normal_tail",
    "empirical_norm",
    "er_constant",
    "er_moment_bound",
    "generate_er_edges",
    "h_k",
    "local_dep_moment_bound",
    "markov_tail",
    "neighbourhood_norm_bound",
    "normal_abs_norm",
    "prop_independent_bound",
    "run",
    "thm1_moment_bound",
    "thm2_moment_bound",
    "thm4_normal_comparison_bound",
]
