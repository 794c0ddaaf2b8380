"""Exact distribution of the binary digit-sum drift ``s2(x + a) - s2(x)``."""

__version__ = "0.1.0"

from .digits import block_decomposition, pattern_count_l, s2, to_word
from .distribution import TailedDistribution, close_distribution, moment, mu, run_bits, step
from .exactnum import DyadicRational
from .prefixes import empirical_frequency, enumerate_prefixes, prefix_measure
from .variance import V, ratio_scan, variance

__all__ = [
    "DyadicRational",
    "TailedDistribution",
    "V",
    "block_decomposition",
    "close_distribution",
    "empirical_frequency",
    "enumerate_prefixes",
    "moment",
    "mu",
    "pattern_count_l",
    "prefix_measure",
    "ratio_scan",
    "run_bits",
    "s2",
    "step",
    "to_word",
    "variance",
]
