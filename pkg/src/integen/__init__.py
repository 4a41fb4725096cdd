"""Synthetic (integrand, integral) pairs for elementary transcendental functions.

Pairs are built inside differential towers Q(x)(t1, ..., tn) of log and exp
extensions and every pair is checked by exact differentiation.
"""

from .dataset import dataset_stats, from_prefix, to_prefix
from .generator import GenConfig, IntegrablePair, generate_item
from .kernel import LiouvilleForm, hermite_reduce, integrate_rational, tr_integrate
from .tower import Tower
from .verifier import verify_dataset, verify_pair

__all__ = [
    "GenConfig",
    "IntegrablePair",
    "LiouvilleForm",
    "Tower",
    "dataset_stats",
    "from_prefix",
    "generate_item",
    "hermite_reduce",
    "integrate_rational",
    "to_prefix",
    "tr_integrate",
    "verify_dataset",
    "verify_pair",
]
