"""b-bounded continual histogram and the private degree-list tracker built on it."""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from ..graph_stream import InvalidUpdate, Update, UpdateKind
from ..noise import NoiseKind, PrivacyParams, gaussian_sigma
from .base import Mechanism, Seed, noise_source, resolve_noise
from .dyadic import BinaryTreeCounter, max_level


class SparsityError(ValueError):
    """A histogram step touched more coordinates than its bound allows."""


class ContinualHistogram:
    """Running sums of ``dim`` coordinates, one binary-tree counter per coordinate.

    Neighboring streams differ in at most two steps, each touching at most
    ``bound`` coordinates, and each step feeds one node per level.  Hence the
    Laplace scale 2b(L+1)/eps and, for Gaussian noise, L2 sensitivity
    sqrt(2b(L+1)), where L = floor(log2 T).
    """

    def __init__(self, dim: int, bound: int, horizon: int, params: PrivacyParams,
                 seed: Seed = None, noise: Union[str, NoiseKind, None] = "auto",
                 record: bool = False):
        if dim < 1 or bound < 1:
            raise ValueError("dim and bound must be positive")
        self.dim = dim
        self.bound = bound
        self.horizon = horizon
        self.params = params
        self.noise_kind = resolve_noise(noise, params)
        self.levels = max_level(horizon) + 1
        source = noise_source(seed, self.noise_kind)
        if self.noise_kind is NoiseKind.LAPLACE:
            self.scale = 2.0 * bound * self.levels / params.eps
            node_noise = lambda n: source.laplace(self.scale, n)
        elif self.noise_kind is NoiseKind.GAUSSIAN:
            self.scale = gaussian_sigma(math.sqrt(2.0 * bound * self.levels), params.eps, params.delta)
            node_noise = lambda n: source.gaussian(self.scale, n)
        else:
            self.scale = 0.0
            node_noise = None
        self.counter = BinaryTreeCounter(horizon, dim, node_noise, record=record)

    @property
    def t(self) -> int:
        return self.counter.t

    def step(self, x) -> np.ndarray:
        x = np.asarray(x)
        if x.shape != (self.dim,):
            raise ValueError(f"expected a length-{self.dim} vector, got shape {x.shape}")
        nz = np.flatnonzero(x)
        if len(nz) > self.bound:
            raise SparsityError(f"{len(nz)} nonzero entries exceed bound {self.bound}")
        if np.any(np.abs(x[nz]) != 1):
            raise ValueError("entries must lie in {-1, 0, 1}")
        return self.counter.step_sparse(nz, x[nz])

    def step_sparse(self, indices, values) -> np.ndarray:
        if len(indices) > self.bound:
            raise SparsityError(f"{len(indices)} nonzero entries exceed bound {self.bound}")
        return self.counter.step_sparse(list(indices), values)

    def error_bound(self, beta: float) -> float:
        """L-inf error over all t and coordinates holding with probability 1 - beta.

        Union bound over at most 2dT node draws (Laplace) or dT released
        sums of L+1 independent Gaussians each.
        """
        if not 0 < beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if self.noise_kind is NoiseKind.NONE:
            return 0.0
        count = self.dim * self.horizon
        if self.noise_kind is NoiseKind.LAPLACE:
            return self.levels * self.scale * math.log(2.0 * count / beta)
        return self.scale * math.sqrt(self.levels) * math.sqrt(2.0 * math.log(2.0 * count / beta))


def continual_histogram(xs, bound: int, params: PrivacyParams, seed: Seed = None,
                        noise="auto") -> list[np.ndarray]:
    """Run a histogram over the rows of ``xs`` and return every release."""
    xs = np.asarray(xs)
    hist = ContinualHistogram(xs.shape[1], bound, len(xs), params, seed, noise)
    return [hist.step(x) for x in xs]


class DegreeListMechanism(Mechanism):
    """Noisy degree vector at every step: a histogram with d = N and b = 2."""

    def __init__(self, num_nodes: int, horizon: int, params: PrivacyParams,
                 seed: Seed = None, noise="auto"):
        super().__init__()
        self.num_nodes = num_nodes
        self.horizon = horizon
        self.hist = ContinualHistogram(num_nodes, 2, horizon, params, seed, noise)
        self._edges: set[tuple[int, int]] = set()
        self.noisy_max_degree = -math.inf
        self.last: np.ndarray = np.zeros(num_nodes)

    def _step(self, upd: Update) -> np.ndarray:
        if upd.is_noop:
            out = self.hist.step_sparse([], [])
        else:
            edge = upd.edge
            if edge[1] >= self.num_nodes:
                raise InvalidUpdate(f"node-out-of-range: {upd}")
            if upd.kind is UpdateKind.INSERT:
                if edge in self._edges:
                    raise InvalidUpdate(f"insert-present: {upd}")
                self._edges.add(edge)
                sign = 1.0
            else:
                if edge not in self._edges:
                    raise InvalidUpdate(f"delete-absent: {upd}")
                self._edges.discard(edge)
                sign = -1.0
            out = self.hist.step_sparse(list(edge), [sign, sign])
        self.noisy_max_degree = max(self.noisy_max_degree, float(out.max()))
        self.last = out
        return out

    def error_bound(self, beta: float) -> float:
        return self.hist.error_bound(beta)
