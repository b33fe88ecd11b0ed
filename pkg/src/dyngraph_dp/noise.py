"""Seeded noise sources and the one-shot Laplace / Gaussian mechanisms.

Draws come from a counter-based Philox stream so that a (seed, call order)
pair fixes every sample bit for bit.  Laplace noise uses the inverse CDF,
Gaussian noise the Box-Muller transform.  These samplers aim at statistical
correctness only; they are not hardened against floating-point side channels.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

_HALF_ULP = 2.0 ** -54


class NoiseKind(enum.Enum):
    LAPLACE = "laplace"
    GAUSSIAN = "gaussian"
    NONE = "none"


@dataclass(frozen=True)
class NoiseSpec:
    """``scale`` is the Laplace scale b or the Gaussian sigma."""

    kind: NoiseKind
    scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind is not NoiseKind.NONE and not self.scale > 0:
            raise ValueError(f"{self.kind.value} noise needs a positive scale, got {self.scale}")


@dataclass(frozen=True)
class PrivacyParams:
    eps: float
    delta: float = 0.0

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not 0 <= self.delta < 1:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")

    @property
    def pure(self) -> bool:
        return self.delta == 0


class NoiseSource:
    """Stateful stream of Laplace/Gaussian draws; disabled sources return zeros."""

    def __init__(self, seed: Optional[int] = None, enabled: bool = True):
        self.enabled = enabled
        self.seed = seed
        self._rng = np.random.Generator(np.random.Philox(seed))

    @classmethod
    def disabled(cls) -> "NoiseSource":
        return cls(0, enabled=False)

    def _open_uniform(self, size: int) -> np.ndarray:
        # shift [0, 1) grid by half a step so 0 and 1 never occur
        return self._rng.random(size) + _HALF_ULP

    def laplace(self, scale: float, size: int) -> np.ndarray:
        if not self.enabled:
            return np.zeros(size)
        if not scale > 0:
            raise ValueError(f"Laplace scale must be positive, got {scale}")
        p = self._open_uniform(size)
        return np.where(p < 0.5, scale * np.log(2.0 * p), -scale * np.log(2.0 - 2.0 * p))

    def gaussian(self, sigma: float, size: int) -> np.ndarray:
        if not self.enabled:
            return np.zeros(size)
        if not sigma > 0:
            raise ValueError(f"Gaussian sigma must be positive, got {sigma}")
        pairs = (size + 1) // 2
        u1 = self._open_uniform(pairs)
        u2 = self._rng.random(pairs)
        radius = np.sqrt(-2.0 * np.log(u1))
        z = np.concatenate([radius * np.cos(2 * np.pi * u2), radius * np.sin(2 * np.pi * u2)])
        return sigma * z[:size]


def make_source(seed: Optional[int], noise: Union[bool, str, NoiseKind] = True) -> NoiseSource:
    """Mechanism helper: ``noise`` False / "none" disables all draws."""
    if isinstance(noise, NoiseKind):
        noise = noise is not NoiseKind.NONE
    elif isinstance(noise, str):
        noise = noise != "none"
    return NoiseSource(seed, enabled=bool(noise))


def sample(spec: NoiseSpec, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be nonnegative")
    source = NoiseSource(spec.seed, enabled=spec.kind is not NoiseKind.NONE)
    if spec.kind is NoiseKind.LAPLACE:
        return source.laplace(spec.scale, n)
    if spec.kind is NoiseKind.GAUSSIAN:
        return source.gaussian(spec.scale, n)
    return np.zeros(n)


def gaussian_sigma(l2_sensitivity: float, eps: float, delta: float) -> float:
    """sigma = sqrt(2 ln(2/delta)) * Delta_2 / eps."""
    if not 0 < delta < 1:
        raise ValueError(f"Gaussian noise needs delta in (0, 1), got {delta}")
    return math.sqrt(2.0 * math.log(2.0 / delta)) * l2_sensitivity / eps


def laplace_mechanism(values, l1_sensitivity: float, params: PrivacyParams,
                      seed: Optional[int] = None, noise: bool = True) -> np.ndarray:
    """values + Lap(Delta_1 / eps) per coordinate."""
    if params.delta != 0:
        raise ValueError("the Laplace mechanism is pure DP; delta must be 0")
    if not l1_sensitivity > 0:
        raise ValueError("sensitivity must be positive")
    v = np.atleast_1d(np.asarray(values, dtype=float))
    return v + make_source(seed, noise).laplace(l1_sensitivity / params.eps, v.size).reshape(v.shape)


def gaussian_mechanism(values, l2_sensitivity: float, params: PrivacyParams,
                       seed: Optional[int] = None, noise: bool = True) -> np.ndarray:
    """values + N(0, sigma^2) per coordinate, sigma = sqrt(2 ln(2/delta)) Delta_2 / eps."""
    if params.delta == 0:
        raise ValueError("the Gaussian mechanism needs delta > 0")
    if not params.eps < 1:
        raise ValueError("the Gaussian mechanism guarantee requires eps < 1")
    if not l2_sensitivity > 0:
        raise ValueError("sensitivity must be positive")
    sigma = gaussian_sigma(l2_sensitivity, params.eps, params.delta)
    v = np.atleast_1d(np.asarray(values, dtype=float))
    return v + make_source(seed, noise).gaussian(sigma, v.size).reshape(v.shape)


def laplace_error_bound(l1_sensitivity: float, eps: float, k: int, beta: float) -> float:
    """L-inf error of the Laplace mechanism holding with probability 1 - beta."""
    return l1_sensitivity / eps * math.log(k / beta)


def gaussian_error_bound(l2_sensitivity: float, eps: float, delta: float, k: int, beta: float) -> float:
    return 2.0 * l2_sensitivity / eps * math.sqrt(math.log(2.0 / delta) * math.log(2.0 * k / beta))
