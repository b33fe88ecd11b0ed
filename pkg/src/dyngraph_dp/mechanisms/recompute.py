"""Block recomputation for statistics of bounded static sensitivity, plus the
trivial constant baseline."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..exact_stats import ExactTracker, StatKind, empty_value, static_sensitivity
from ..graph_stream import Update
from ..noise import NoiseKind, PrivacyParams, gaussian_sigma
from .base import Mechanism, Release, Seed, as_release, noise_source, resolve_noise

CALIBRATION_BETA = 0.05


def recompute_block_size(horizon: int, params: PrivacyParams, dim: int = 1,
                         beta: float = CALIBRATION_BETA) -> int:
    """B balancing staleness against per-release noise."""
    log_term = math.log(horizon * dim / beta)
    if params.pure:
        raw = math.sqrt(horizon / params.eps * log_term)
    else:
        raw = (horizon / params.eps ** 2 * log_term * math.log(1.0 / params.delta)) ** (1.0 / 3.0)
    return max(1, math.ceil(raw))


def block_ends(horizon: int, block: int) -> list[int]:
    """[B, 2B, ..., T]: the last step of every block, the final block ending at T."""
    ends = list(range(block, horizon, block))
    ends.append(horizon)
    return ends


class RecomputeMechanism(Mechanism):
    """Release a fresh noisy f(G_t) at each block end and hold it in between.

    There are ceil(T/B) releases, so Laplace noise has scale ceil(T/B) D1/eps
    and Gaussian noise is calibrated to L2 sensitivity sqrt(ceil(T/B)) D2.
    Any two item-level (hence also event-level) neighbors give neighboring
    graphs at every release step, so the calibration covers both relations.
    """

    def __init__(self, kind: StatKind, num_nodes: int, horizon: int, params: PrivacyParams,
                 seed: Seed = None, noise="auto", block: Optional[int] = None,
                 item_level: bool = True, degree_bound: Optional[int] = None):
        super().__init__()
        self.kind = kind
        self.num_nodes = num_nodes
        self.horizon = horizon
        self.params = params
        self.item_level = item_level
        self.dim = kind.dimension(num_nodes)
        self.block = block if block is not None else recompute_block_size(horizon, params, self.dim)
        if self.block < 1:
            raise ValueError("block size must be positive")
        self.releases = math.ceil(horizon / self.block)
        self.l1, self.l2 = static_sensitivity(kind, num_nodes, degree_bound)
        self.noise_kind = resolve_noise(noise, params)
        if self.noise_kind is NoiseKind.LAPLACE:
            self.scale = self.releases * self.l1 / params.eps
        elif self.noise_kind is NoiseKind.GAUSSIAN:
            self.scale = gaussian_sigma(math.sqrt(self.releases) * self.l2, params.eps, params.delta)
        else:
            self.scale = 0.0
        self._source = noise_source(seed, self.noise_kind)
        self._tracker = ExactTracker(kind, num_nodes)
        self._ends = set(block_ends(horizon, self.block))
        self.current: Release = as_release(empty_value(kind, num_nodes), kind.is_vector)

    def _noise(self) -> np.ndarray:
        if self.noise_kind is NoiseKind.LAPLACE:
            return self._source.laplace(self.scale, self.dim)
        if self.noise_kind is NoiseKind.GAUSSIAN:
            return self._source.gaussian(self.scale, self.dim)
        return np.zeros(self.dim)

    def _step(self, upd: Update) -> Release:
        value = self._tracker.step(upd)
        if self.t in self._ends:
            noisy = np.asarray(value, dtype=float).reshape(-1) + self._noise()
            self.current = as_release(noisy, self.kind.is_vector)
        return self.current.copy() if self.kind.is_vector else self.current

    def error_bound(self, beta: float = CALIBRATION_BETA) -> float:
        """Staleness B*D1 plus the Laplace tail over ceil(T/B) x k draws."""
        stale = self.block * self.l1
        if self.noise_kind is NoiseKind.NONE:
            return stale
        k = self.releases * self.dim
        if self.noise_kind is NoiseKind.LAPLACE:
            return stale + self.scale * math.log(k / beta)
        return stale + self.scale * math.sqrt(2.0 * math.log(2.0 * k / beta))


class TrivialBaseline(Mechanism):
    """Always release f of the edgeless graph; needs no privacy budget."""

    def __init__(self, kind: StatKind, num_nodes: int, horizon: int):
        super().__init__()
        self.kind = kind
        self.num_nodes = num_nodes
        self.horizon = horizon
        self.value = as_release(empty_value(kind, num_nodes), kind.is_vector)

    def _step(self, upd: Update) -> Release:
        return self.value.copy() if self.kind.is_vector else self.value
