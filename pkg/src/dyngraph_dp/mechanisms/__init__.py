"""Continual-release mechanisms with a uniform ``step(update) -> release`` interface."""

from __future__ import annotations

from typing import Optional

from ..exact_stats import Stat, StatKind
from ..noise import PrivacyParams
from .base import Mechanism, Release, resolve_noise
from .dyadic import (BinaryTreeCounter, DyadicIndex, all_intervals, binary_tree_counter,
                     canonical_cover, dyadic_node_sums, max_level)
from .histogram import ContinualHistogram, DegreeListMechanism, SparsityError, continual_histogram
from .recompute import (CALIBRATION_BETA, RecomputeMechanism, TrivialBaseline, block_ends,
                        recompute_block_size)
from .triangles import (RestrictedTriangleMechanism, triangle_node_sensitivity,
                        triangle_node_vector, triangle_sigma)
from .wrapper import DegreeRestrictedWrapper, event_level_triangle, top_level

MECHANISMS = ("baseline", "recompute", "degree-list", "triangle-restricted", "triangle")


def build_mechanism(name: str, kind: StatKind, num_nodes: int, horizon: int,
                    params: PrivacyParams, seed=None, noise="auto",
                    deg_bound: Optional[float] = None, block: Optional[int] = None,
                    beta: float = 0.05) -> Mechanism:
    """Instantiate a mechanism by its CLI name."""
    if name == "baseline":
        return TrivialBaseline(kind, num_nodes, horizon)
    if name == "recompute":
        return RecomputeMechanism(kind, num_nodes, horizon, params, seed, noise, block=block)
    if name == "degree-list":
        if kind.stat is not Stat.DEGREE_LIST:
            raise ValueError("degree-list mechanism releases the degree-list statistic only")
        return DegreeListMechanism(num_nodes, horizon, params, seed, noise)
    if name in ("triangle-restricted", "triangle"):
        if kind.stat is not Stat.TRIANGLES:
            raise ValueError(f"{name} mechanism releases triangle counts only")
        if name == "triangle":
            return event_level_triangle(num_nodes, horizon, params, beta, seed, noise)
        if deg_bound is None:
            raise ValueError("triangle-restricted needs a degree bound")
        return RestrictedTriangleMechanism(num_nodes, horizon, deg_bound, params, seed, noise)
    raise ValueError(f"unknown mechanism {name!r}; choose from {', '.join(MECHANISMS)}")


__all__ = [
    "BinaryTreeCounter", "CALIBRATION_BETA", "ContinualHistogram", "DegreeListMechanism",
    "DegreeRestrictedWrapper", "DyadicIndex", "MECHANISMS", "Mechanism", "RecomputeMechanism",
    "Release", "RestrictedTriangleMechanism", "SparsityError", "TrivialBaseline",
    "all_intervals", "binary_tree_counter", "block_ends", "build_mechanism", "canonical_cover",
    "continual_histogram", "dyadic_node_sums", "event_level_triangle", "max_level",
    "recompute_block_size", "resolve_noise", "top_level", "triangle_node_sensitivity",
    "triangle_node_vector", "triangle_sigma",
]
