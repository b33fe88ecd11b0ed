import os
import sys

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from dyngraph_dp.graph_stream import NOOP, Update, UpdateSequence  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def random_valid_sequence(rng: np.random.Generator, n: int, horizon: int, noop_rate: float = 0.1,
                          max_degree=None) -> UpdateSequence:
    """Independent generator: flip random pairs, sometimes idle."""
    edges = set()
    deg = [0] * n
    ups = []
    for _ in range(horizon):
        if n < 2 or rng.random() < noop_rate:
            ups.append(NOOP)
            continue
        u, v = sorted(int(x) for x in rng.choice(n, 2, replace=False))
        if (u, v) in edges:
            edges.remove((u, v))
            deg[u] -= 1
            deg[v] -= 1
            ups.append(Update.delete(u, v))
        elif max_degree is not None and max(deg[u], deg[v]) >= max_degree:
            ups.append(NOOP)
        else:
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
            ups.append(Update.insert(u, v))
    return UpdateSequence(n, tuple(ups))


@st.composite
def sequences(draw, max_nodes=8, max_horizon=40):
    n = draw(st.integers(2, max_nodes))
    horizon = draw(st.integers(1, max_horizon))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_valid_sequence(np.random.default_rng(seed), n, horizon)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
