"""Dyadic intervals and the binary-tree (prefix-sum) counter."""

from __future__ import annotations

from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np


class DyadicIndex(NamedTuple):
    """Interval ``[block * 2**level + 1, (block + 1) * 2**level]``."""

    level: int
    block: int

    @property
    def start(self) -> int:
        return self.block * (1 << self.level) + 1

    @property
    def end(self) -> int:
        return (self.block + 1) << self.level

    @property
    def interval(self) -> tuple[int, int]:
        return self.start, self.end


def max_level(horizon: int) -> int:
    """floor(log2 T)."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    return horizon.bit_length() - 1


def canonical_cover(t: int, horizon: Optional[int] = None) -> list[DyadicIndex]:
    """Greedy largest-power-of-two decomposition of ``[1, t]``.

    One interval per set bit of ``t``, largest first.
    """
    if t < 1 or (horizon is not None and t > horizon):
        raise ValueError(f"t={t} outside [1, {horizon}]")
    cover = []
    offset = 0
    for level in range(t.bit_length() - 1, -1, -1):
        if t >> level & 1:
            cover.append(DyadicIndex(level, offset >> level))
            offset += 1 << level
    return cover


def all_intervals(horizon: int) -> list[DyadicIndex]:
    """Every dyadic interval of levels 0..floor(log2 T) that starts within [1, T]."""
    out = []
    for level in range(max_level(horizon) + 1):
        size = 1 << level
        out.extend(DyadicIndex(level, j) for j in range(-(-horizon // size)))
    return out


def dyadic_node_sums(deltas: Sequence[float], horizon: Optional[int] = None) -> dict[DyadicIndex, float]:
    """Exact partial sums s_[a,b] over every interval of :func:`all_intervals`.

    Steps past the end of ``deltas`` contribute zero.
    """
    horizon = len(deltas) if horizon is None else horizon
    prefix = np.concatenate([[0.0], np.cumsum(np.asarray(deltas, dtype=float))])
    last = len(deltas)
    sums = {}
    for idx in all_intervals(horizon):
        a, b = idx.interval
        sums[idx] = prefix[min(b, last)] - prefix[min(a - 1, last)]
    return sums


NodeNoise = Callable[[int], np.ndarray]


class BinaryTreeCounter:
    """Continual prefix sums over a horizon of ``T`` steps.

    Each dyadic node gets one noise draw (``node_noise(dim)``) at the step its
    interval closes; the release at ``t`` sums the noisy nodes of
    ``canonical_cover(t)``.  With ``record=True`` every closed noisy node is
    kept so past releases can be re-queried.
    """

    def __init__(self, horizon: int, dim: int = 1, node_noise: Optional[NodeNoise] = None,
                 record: bool = False):
        self.horizon = horizon
        self.dim = dim
        self.levels = max_level(horizon) + 1
        self.node_noise = node_noise
        self.t = 0
        self._open = np.zeros((self.levels, dim))
        self._latest = np.zeros((self.levels, dim))
        self.nodes: Optional[dict[DyadicIndex, np.ndarray]] = {} if record else None

    def _close(self, level: int) -> None:
        noisy = self._open[level].copy()
        if self.node_noise is not None:
            noisy += self.node_noise(self.dim)
        self._latest[level] = noisy
        self._open[level] = 0.0
        if self.nodes is not None:
            self.nodes[DyadicIndex(level, (self.t >> level) - 1)] = noisy

    def step(self, delta) -> np.ndarray:
        """Consume one delta (scalar or length-``dim`` vector); return the release."""
        if self.t >= self.horizon:
            raise ValueError(f"counter horizon {self.horizon} exhausted")
        self.t += 1
        self._open += np.asarray(delta, dtype=float)
        return self._finish()

    def step_sparse(self, indices, values) -> np.ndarray:
        """Like :meth:`step` but touching only ``indices``."""
        if self.t >= self.horizon:
            raise ValueError(f"counter horizon {self.horizon} exhausted")
        self.t += 1
        if len(indices):
            self._open[:, indices] += np.asarray(values, dtype=float)
        return self._finish()

    def _finish(self) -> np.ndarray:
        t = self.t
        level = 0
        while level < self.levels and t % (1 << level) == 0:
            self._close(level)
            level += 1
        return self.current()

    def current(self) -> np.ndarray:
        t = self.t
        out = np.zeros(self.dim)
        level = 0
        while t:
            if t & 1:
                out += self._latest[level]
            t >>= 1
            level += 1
        return out

    def query(self, t: int) -> np.ndarray:
        """Re-derive the release at an earlier step from recorded nodes."""
        if self.nodes is None:
            raise ValueError("counter was not created with record=True")
        if not 1 <= t <= self.t:
            raise ValueError(f"t={t} outside [1, {self.t}]")
        out = np.zeros(self.dim)
        # same summation order as current(), so re-queries are bit-identical
        for idx in reversed(canonical_cover(t)):
            out += self.nodes[idx]
        return out


def binary_tree_counter(deltas: Sequence[float], node_noise: Optional[NodeNoise] = None,
                        horizon: Optional[int] = None) -> list[float]:
    """Run a scalar counter over ``deltas`` and return every release."""
    counter = BinaryTreeCounter(horizon or len(deltas), 1, node_noise)
    return [float(counter.step(d)[0]) for d in deltas]
