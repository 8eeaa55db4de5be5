"""Qubit routing analysis toolkit.

Computes graph-expansion routing lower bounds with witnesses, constructs and
verifies explicit swap schedules, certifies them against brute-force exact
routing numbers at small sizes, and numerically validates the entropy bounds
and transfer protocols with a dense state-vector simulator.
"""

__version__ = "0.1.0"

from .graphs import (
    Cut,
    Graph,
    Matching,
    build_graph,
    cut,
    degree_stats,
    diameter,
    generate,
    is_connected,
    max_matching,
)
from .routing import Permutation, Schedule, apply_schedule, verify_schedule
from .spectral import (
    cheeger_constant,
    edge_expansion,
    matching_expansion,
    normalized_laplacian,
    spectral_gap,
    vertex_expansion,
)

__all__ = [
    "Cut",
    "Graph",
    "Matching",
    "Permutation",
    "Schedule",
    "apply_schedule",
    "build_graph",
    "cheeger_constant",
    "cut",
    "degree_stats",
    "diameter",
    "edge_expansion",
    "generate",
    "is_connected",
    "matching_expansion",
    "max_matching",
    "normalized_laplacian",
    "spectral_gap",
    "verify_schedule",
    "vertex_expansion",
    "__version__",
]
