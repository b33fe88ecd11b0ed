"""Turning degree-restricted mechanisms into unrestricted ones.

A private degree-list tracker estimates the running max degree.  Level j
covers estimates below 2**j and runs the inner mechanism with bound
D_j = gamma + 2**j, gamma being the tracker's own high-probability error.
When the estimate crosses into a higher level, a fresh inner instance is
started on a rebuild prefix that re-inserts the current edges (outputs
suppressed), then continues on the live stream.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..graph_stream import DynamicGraph, Update
from ..noise import NoiseKind, PrivacyParams
from .base import Mechanism, Release, resolve_noise
from .histogram import DegreeListMechanism
from .triangles import RestrictedTriangleMechanism

# (degree bound, horizon, seed) -> mechanism
InnerFactory = Callable[[float, int, np.random.SeedSequence], Mechanism]


def top_level(num_nodes: int) -> int:
    return max(1, math.ceil(math.log2(num_nodes))) if num_nodes > 1 else 1


class DegreeRestrictedWrapper(Mechanism):
    def __init__(self, inner_factory: InnerFactory, num_nodes: int, horizon: int,
                 params: PrivacyParams, beta_s: float = 0.05, seed=None, noise="auto"):
        super().__init__()
        if not 0 < beta_s < 1:
            raise ValueError("beta_s must lie in (0, 1)")
        self.num_nodes = num_nodes
        self.horizon = horizon
        self.params = params
        self.beta_s = beta_s
        self.factory = inner_factory
        self.top = top_level(num_nodes)
        root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        # child 0 drives the tracker, child j the level-j instance
        self._seeds = root.spawn(self.top + 1)
        disabled = resolve_noise(noise, params) is NoiseKind.NONE
        tracker_noise = "none" if disabled else "laplace"
        self.tracker = DegreeListMechanism(num_nodes, horizon, PrivacyParams(params.eps),
                                           self._seeds[0], tracker_noise)
        self.gamma = self.tracker.error_bound(beta_s)
        self.graph = DynamicGraph(num_nodes)
        self.level = 1
        self.inner = self.factory(self.degree_bound(1), horizon, self._seeds[1])
        self.escalations: list[tuple[int, int]] = []

    def threshold(self, level: int) -> int:
        return 2 ** level

    def degree_bound(self, level: int) -> float:
        return self.gamma + 2 ** level

    def level_for(self, estimate: float) -> int:
        for j in range(1, self.top + 1):
            if estimate < self.threshold(j):
                return j
        return self.top

    @property
    def privacy_cost(self) -> tuple[float, float]:
        eps, delta = self.params.eps, self.params.delta
        log_n = math.log2(self.num_nodes) if self.num_nodes > 1 else 0.0
        return (eps * (2 + log_n),
                delta * (1 + log_n) + self.beta_s * (1 + math.exp(eps)))

    def _escalate(self, level: int, upd: Update) -> None:
        edges = self.graph.edges()
        horizon = len(edges) + self.horizon - self.t + 1
        inner = self.factory(self.degree_bound(level), horizon, self._seeds[level])
        for u, v in edges:
            inner.step(Update.insert(u, v))
        self.inner = inner
        self.level = level
        self.escalations.append((self.t, level))

    def _step(self, upd: Update) -> Release:
        self.tracker.step(upd)
        level = self.level_for(self.tracker.noisy_max_degree)
        if level > self.level:
            self._escalate(level, upd)
        out = self.inner.step(upd)
        self.graph.apply(upd)
        return out


def event_level_triangle(num_nodes: int, horizon: int, params: PrivacyParams,
                         beta_s: float = 0.05, seed=None, noise="auto") -> DegreeRestrictedWrapper:
    """Triangle counts with no degree promise: the restricted Gaussian tree
    run inside the degree-level wrapper."""
    if params.delta == 0:
        raise ValueError("event-level triangle counting needs delta > 0")
    inner_noise = "none" if resolve_noise(noise, params) is NoiseKind.NONE else "gaussian"

    def factory(bound: float, inner_horizon: int, inner_seed) -> Mechanism:
        return RestrictedTriangleMechanism(num_nodes, inner_horizon, bound, params,
                                           inner_seed, inner_noise)

    return DegreeRestrictedWrapper(factory, num_nodes, horizon, params, beta_s, seed, noise)
