"""Monte Carlo estimation of thresholds for properties too large to enumerate."""

from .checkers import (
    has_hamilton_cycle,
    has_min_degree,
    has_perfect_matching,
    has_perfect_matching_hypergraph,
    has_subgraph,
    has_triangle_factor,
)
from .estimate import (
    critical_trend,
    empirical_critical_p,
    estimate_mu,
    triangle_factor_scale,
    wilson_interval,
)
from .registry import PROPERTY_BUILDERS, Property, build_property, property_names
from .sampling import sample_gnp, sample_hypergraph, trial_rng
from .structures import CriticalEstimate, HypergraphSpec, MCEstimate

__all__ = [
    "PROPERTY_BUILDERS",
    "CriticalEstimate",
    "HypergraphSpec",
    "MCEstimate",
    "Property",
    "build_property",
    "critical_trend",
    "empirical_critical_p",
    "estimate_mu",
    "has_hamilton_cycle",
    "has_min_degree",
    "has_perfect_matching",
    "has_perfect_matching_hypergraph",
    "has_subgraph",
    "has_triangle_factor",
    "property_names",
    "sample_gnp",
    "sample_hypergraph",
    "trial_rng",
    "triangle_factor_scale",
    "wilson_interval",
]
