"""Triangle counting under a max-degree promise via a Gaussian binary tree."""

from __future__ import annotations

import math
from typing import Optional


from ..exact_stats import TRIANGLES, difference_sequence
from ..graph_stream import DynamicGraph, Update, UpdateSequence
from ..noise import NoiseKind, PrivacyParams, gaussian_sigma
from .base import Mechanism, Seed, noise_source, resolve_noise
from .dyadic import BinaryTreeCounter, DyadicIndex, dyadic_node_sums


def _log2_horizon(horizon: int) -> float:
    # log2(1) = 0 would give zero noise; one level is always present
    return max(math.log2(horizon), 1.0)


def triangle_node_sensitivity(horizon: int, degree_bound: float) -> float:
    """L2 bound 6 sqrt(T D log2 T) on the dyadic-node vector of triangle deltas."""
    return 6.0 * math.sqrt(horizon * degree_bound * _log2_horizon(horizon))


def triangle_sigma(horizon: int, degree_bound: float, params: PrivacyParams) -> float:
    return gaussian_sigma(triangle_node_sensitivity(horizon, degree_bound), params.eps, params.delta)


def triangle_node_vector(seq: UpdateSequence) -> dict[DyadicIndex, float]:
    """Exact s_[a,b] of the triangle difference sequence for every dyadic node."""
    return dyadic_node_sums(difference_sequence(TRIANGLES, seq), seq.horizon)


class RestrictedTriangleMechanism(Mechanism):
    """Noisy triangle count, private when every graph has max degree <= D.

    Each dyadic node holds the exact sum of triangle deltas over its
    interval plus one Gaussian draw.  Degree-promise violations do not stop
    the stream; the first offending step is kept in ``degree_violation``.
    """

    def __init__(self, num_nodes: int, horizon: int, degree_bound: float,
                 params: PrivacyParams, seed: Seed = None, noise="auto",
                 record: bool = False):
        super().__init__()
        if params.delta == 0:
            raise ValueError("the restricted triangle mechanism needs delta > 0")
        kind = resolve_noise(noise, params)
        if kind is NoiseKind.LAPLACE:
            raise ValueError("the restricted triangle mechanism uses Gaussian noise")
        if not degree_bound > 0:
            raise ValueError("degree bound must be positive")
        self.num_nodes = num_nodes
        self.horizon = horizon
        self.degree_bound = degree_bound
        self.noise_kind = kind
        self.sigma = triangle_sigma(horizon, degree_bound, params)
        source = noise_source(seed, kind)
        node_noise = None
        if kind is NoiseKind.GAUSSIAN:
            node_noise = lambda n: source.gaussian(self.sigma, n)
        self.counter = BinaryTreeCounter(horizon, 1, node_noise, record=record)
        self.graph = DynamicGraph(num_nodes)
        self.degree_violation: Optional[int] = None

    def _step(self, upd: Update) -> float:
        before = self.graph.triangles
        self.graph.apply(upd)
        if (self.degree_violation is None and not upd.is_noop
                and max(self.graph.degrees[u] for u in upd.edge) > self.degree_bound):
            self.degree_violation = self.t
        return float(self.counter.step(self.graph.triangles - before)[0])

    def query(self, t: int) -> float:
        """Release at an earlier step (needs ``record=True``)."""
        return float(self.counter.query(t)[0])

    def error_bound(self, beta: float) -> float:
        """Max error over all t holding with probability ~1 - beta (cover sums of
        at most L+1 node draws, union bound over T steps)."""
        levels = self.counter.levels
        return self.sigma * math.sqrt(levels * 2.0 * math.log(self.horizon / beta))
