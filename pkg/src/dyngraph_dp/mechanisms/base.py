"""Common streaming interface shared by every continual-release mechanism."""

from __future__ import annotations

from typing import Union

import numpy as np

from ..graph_stream import Update, UpdateSequence
from ..noise import NoiseKind, NoiseSource, PrivacyParams

Seed = Union[int, np.random.SeedSequence, None]
Release = Union[float, np.ndarray]


def resolve_noise(noise: Union[str, NoiseKind, None], params: PrivacyParams) -> NoiseKind:
    """Map ``auto`` to Laplace under pure DP and Gaussian otherwise."""
    if noise is None or noise == "auto":
        return NoiseKind.LAPLACE if params.pure else NoiseKind.GAUSSIAN
    if isinstance(noise, NoiseKind):
        return noise
    return NoiseKind(noise)


def noise_source(seed: Seed, kind: NoiseKind) -> NoiseSource:
    return NoiseSource(seed, enabled=kind is not NoiseKind.NONE)


class Mechanism:
    """Consume one update per call to :meth:`step` and release a value.

    Subclasses set ``num_nodes`` and ``horizon`` and implement ``_step``.
    """

    num_nodes: int
    horizon: int

    def __init__(self):
        self.t = 0

    def step(self, upd: Update) -> Release:
        if self.t >= self.horizon:
            raise ValueError(f"mechanism horizon {self.horizon} exhausted")
        self.t += 1
        return self._step(upd)

    def _step(self, upd: Update) -> Release:
        raise NotImplementedError

    def run(self, seq: UpdateSequence) -> list[Release]:
        if seq.num_nodes != self.num_nodes:
            raise ValueError(f"sequence has N={seq.num_nodes}, mechanism expects {self.num_nodes}")
        return [self.step(upd) for upd in seq.updates]


def as_release(value, is_vector: bool) -> Release:
    if is_vector:
        return np.asarray(value, dtype=float)
    return float(np.asarray(value).reshape(-1)[0])
