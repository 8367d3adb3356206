"""Subjective-logic operators and Monte Carlo density comparison."""

from ._slmc import (
    Beta,
    Opinion,
    SlmcError,
    beta_distance,
    beta_from_moments,
    beta_to_opinion,
    fuse,
    kde_bias_bound,
    kde_density,
    limit_case,
    multi_product,
    multiply,
    multiply_many,
    opinion_to_beta,
    product_moments,
    qualitative,
    quantitative,
    sample_beta,
)

__all__ = [
    "Beta",
    "Opinion",
    "SlmcError",
    "beta_distance",
    "beta_from_moments",
    "beta_to_opinion",
    "fuse",
    "kde_bias_bound",
    "kde_density",
    "limit_case",
    "multi_product",
    "multiply",
    "multiply_many",
    "opinion_to_beta",
    "product_moments",
    "qualitative",
    "quantitative",
    "sample_beta",
]
