"""Random valid update sequences for experiments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..graph_stream import NOOP, DynamicGraph, Update, UpdateKind, UpdateSequence


@dataclass(frozen=True)
class StreamModel:
    """``uniform``, ``capped:D`` or ``insert:p``."""

    name: str
    param: Optional[float] = None

    @classmethod
    def parse(cls, text: str) -> "StreamModel":
        name, _, arg = text.partition(":")
        if name == "uniform":
            if arg:
                raise ValueError("uniform takes no argument")
            return cls(name)
        if name == "capped":
            cap = int(arg) if arg else 0
            if cap < 1:
                raise ValueError("capped:D needs D >= 1")
            return cls(name, cap)
        if name == "insert":
            p = float(arg) if arg else -1.0
            if not 0 <= p <= 1:
                raise ValueError("insert:p needs p in [0, 1]")
            return cls(name, p)
        raise ValueError(f"unknown stream model {text!r}")

    def __str__(self) -> str:
        if self.param is None:
            return self.name
        return f"{self.name}:{self.param:g}"


def _random_pair(rng: np.random.Generator, n: int) -> tuple[int, int]:
    u, v = rng.choice(n, size=2, replace=False)
    return (int(u), int(v)) if u < v else (int(v), int(u))


def random_sequence(num_nodes: int, horizon: int, model="uniform", seed=None) -> UpdateSequence:
    """Valid stream from the empty graph.

    uniform: flip a uniformly random pair each step.
    capped:D: like uniform, but an insert that would push a degree above D
    becomes a no-op.
    insert:p: with probability p insert a uniformly random absent pair,
    otherwise delete a uniformly random present edge (no-op if impossible).
    """
    if num_nodes < 2 or horizon < 1:
        raise ValueError("need N >= 2 and T >= 1")
    if isinstance(model, str):
        model = StreamModel.parse(model)
    rng = np.random.default_rng(seed)
    g = DynamicGraph(num_nodes)
    present: list[tuple[int, int]] = []
    index: dict[tuple[int, int], int] = {}
    pairs_total = num_nodes * (num_nodes - 1) // 2
    updates = []

    def add(e):
        index[e] = len(present)
        present.append(e)

    def remove(e):
        i = index.pop(e)
        last = present.pop()
        if i < len(present):
            present[i] = last
            index[last] = i

    for _ in range(horizon):
        if model.name == "insert":
            if rng.random() < model.param:
                if len(present) == pairs_total:
                    upd = NOOP
                else:
                    e = _random_pair(rng, num_nodes)
                    while e in index:
                        e = _random_pair(rng, num_nodes)
                    upd = Update.insert(*e)
            elif present:
                upd = Update.delete(*present[int(rng.integers(len(present)))])
            else:
                upd = NOOP
        else:
            e = _random_pair(rng, num_nodes)
            if e in index:
                upd = Update.delete(*e)
            elif model.name == "capped" and max(g.degrees[e[0]], g.degrees[e[1]]) >= model.param:
                upd = NOOP
            else:
                upd = Update.insert(*e)
        g.apply(upd)
        if not upd.is_noop:
            if upd.kind is UpdateKind.INSERT:
                add(upd.edge)
            else:
                remove(upd.edge)
        updates.append(upd)
    return UpdateSequence(num_nodes, tuple(updates))
