"""Exact (non-private) graph statistics and their difference sequences."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .graph_stream import DynamicGraph, InvalidUpdate, Update, UpdateKind, UpdateSequence

StatValue = Union[int, np.ndarray]


class Stat(enum.Enum):
    EDGES = "edges"
    TRIANGLES = "triangles"
    HIGH_DEGREE = "high-degree"
    DEGREE_LIST = "degree-list"
    DEGREE_HIST = "degree-hist"
    MATCHING = "matching"
    COMPONENTS = "components"


@dataclass(frozen=True)
class StatKind:
    stat: Stat
    tau: int = 0

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if self.stat is not Stat.HIGH_DEGREE and self.tau:
            raise ValueError("tau only applies to high-degree")

    @property
    def is_vector(self) -> bool:
        return self.stat in (Stat.DEGREE_LIST, Stat.DEGREE_HIST)

    def dimension(self, num_nodes: int) -> int:
        return num_nodes if self.is_vector else 1

    @classmethod
    def parse(cls, text: str) -> "StatKind":
        """``edges``, ``triangles``, ``high-degree:3``, ``degree-list``, ..."""
        name, _, arg = text.partition(":")
        try:
            stat = Stat(name)
        except ValueError:
            raise ValueError(f"unknown statistic {text!r}") from None
        if stat is Stat.HIGH_DEGREE:
            return cls(stat, int(arg) if arg else 1)
        if arg:
            raise ValueError(f"{name} takes no argument")
        return cls(stat)

    def __str__(self) -> str:
        if self.stat is Stat.HIGH_DEGREE:
            return f"{self.stat.value}:{self.tau}"
        return self.stat.value


EDGES = StatKind(Stat.EDGES)
TRIANGLES = StatKind(Stat.TRIANGLES)
DEGREE_LIST = StatKind(Stat.DEGREE_LIST)
DEGREE_HIST = StatKind(Stat.DEGREE_HIST)
MATCHING = StatKind(Stat.MATCHING)
COMPONENTS = StatKind(Stat.COMPONENTS)


def high_degree(tau: int) -> StatKind:
    return StatKind(Stat.HIGH_DEGREE, tau)


ALL_KINDS = (EDGES, TRIANGLES, high_degree(1), high_degree(2), DEGREE_LIST,
             DEGREE_HIST, MATCHING, COMPONENTS)


# --- connected components --------------------------------------------------

def count_components(adjacency: Sequence[set[int]]) -> int:
    n = len(adjacency)
    seen = [False] * n
    count = 0
    for s in range(n):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adjacency[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
    return count


# --- maximum matching (Edmonds) --------------------------------------------

def _augment_from(adjacency: Sequence[set[int]], mate: list[int], root: int) -> bool:
    """Search an augmenting path from the exposed vertex ``root`` with blossom
    contraction; flip it into ``mate`` and return True if one exists."""
    n = len(adjacency)
    parent = [-1] * n
    base = list(range(n))
    in_tree = [False] * n
    in_tree[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        on_path = [False] * n
        while True:
            a = base[a]
            on_path[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if on_path[b]:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
        while base[v] != b:
            in_blossom[base[v]] = in_blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for u in adjacency[v]:
            if base[v] == base[u] or mate[v] == u:
                continue
            if u == root or (mate[u] != -1 and parent[mate[u]] != -1):
                # odd cycle: contract the blossom onto its base
                b = lca(v, u)
                in_blossom = [False] * n
                mark_path(v, b, u, in_blossom)
                mark_path(u, b, v, in_blossom)
                for i in range(n):
                    if in_blossom[base[i]]:
                        base[i] = b
                        if not in_tree[i]:
                            in_tree[i] = True
                            queue.append(i)
            elif parent[u] == -1:
                parent[u] = v
                if mate[u] == -1:
                    while u != -1:
                        pv = parent[u]
                        nxt = mate[pv]
                        mate[u] = pv
                        mate[pv] = u
                        u = nxt
                    return True
                in_tree[mate[u]] = True
                queue.append(mate[u])
    return False


def maximum_matching(adjacency: Sequence[set[int]], mate: Optional[list[int]] = None) -> list[int]:
    """Maximum cardinality matching of a general graph as a mate array
    (``-1`` for exposed vertices).  ``mate`` may seed the search with any
    valid matching; it is updated in place."""
    n = len(adjacency)
    if mate is None:
        mate = [-1] * n
        for v in range(n):
            if mate[v] == -1:
                for u in adjacency[v]:
                    if mate[u] == -1:
                        mate[u], mate[v] = v, u
                        break
    for v in range(n):
        if mate[v] == -1 and adjacency[v]:
            _augment_from(adjacency, mate, v)
    return mate


def matching_size(adjacency: Sequence[set[int]]) -> int:
    mate = maximum_matching(adjacency)
    return sum(1 for m in mate if m != -1) // 2


# --- values and deltas -----------------------------------------------------

def exact_value(kind: StatKind, g: DynamicGraph) -> StatValue:
    stat = kind.stat
    if stat is Stat.EDGES:
        return g.edge_count
    if stat is Stat.TRIANGLES:
        return g.triangles
    if stat is Stat.HIGH_DEGREE:
        return sum(1 for d in g.degrees if d >= kind.tau)
    if stat is Stat.DEGREE_LIST:
        return np.array(g.degrees, dtype=np.int64)
    if stat is Stat.DEGREE_HIST:
        return np.bincount(g.degrees, minlength=g.num_nodes).astype(np.int64)
    if stat is Stat.MATCHING:
        return matching_size(g.adjacency)
    if stat is Stat.COMPONENTS:
        return count_components(g.adjacency)
    raise AssertionError(stat)


def empty_value(kind: StatKind, num_nodes: int) -> StatValue:
    """f of the edgeless graph on ``num_nodes`` nodes."""
    return exact_value(kind, DynamicGraph(num_nodes))


def triangle_delta(g: DynamicGraph, upd: Update) -> int:
    """Change in triangle count caused by applying ``upd`` to ``g`` (not applied)."""
    problem = g.check(upd)
    if problem is not None:
        raise InvalidUpdate(f"{problem}: {upd}")
    if upd.is_noop:
        return 0
    common = g.common_neighbors(*upd.edge)
    return common if upd.kind is UpdateKind.INSERT else -common


class ExactTracker:
    """Replays a stream and reports f(G_t) after every step.

    Matching is maintained by augmenting the previous maximum matching: an
    insertion raises the maximum by at most one, and deleting a matched edge
    lowers the current matching by one while the maximum drops by at most one
    (any augmenting path then ends at a freed endpoint).
    """

    def __init__(self, kind: StatKind, num_nodes: int):
        self.kind = kind
        self.graph = DynamicGraph(num_nodes)
        self._mate = [-1] * num_nodes

    def step(self, upd: Update) -> StatValue:
        g = self.graph
        g.apply(upd)
        if self.kind.stat is not Stat.MATCHING:
            return exact_value(self.kind, g)
        mate = self._mate
        if not upd.is_noop:
            u, v = upd.edge
            if upd.kind is UpdateKind.DELETE and mate[u] == v:
                mate[u] = mate[v] = -1
                for x in (u, v):
                    if mate[x] == -1 and g.adjacency[x]:
                        if _augment_from(g.adjacency, mate, x):
                            break
            elif upd.kind is UpdateKind.INSERT:
                if mate[u] == -1 and mate[v] == -1:
                    mate[u], mate[v] = v, u
                else:
                    # the new path runs through (u, v) but may start anywhere
                    for x in range(g.num_nodes):
                        if mate[x] == -1 and g.adjacency[x]:
                            if _augment_from(g.adjacency, mate, x):
                                break
        return sum(1 for m in mate if m != -1) // 2


def exact_trace(kind: StatKind, seq: UpdateSequence) -> list[StatValue]:
    """[f(G_1), ..., f(G_T)]."""
    tracker = ExactTracker(kind, seq.num_nodes)
    return [tracker.step(upd) for upd in seq.updates]


def difference_sequence(kind: StatKind, seq: UpdateSequence) -> list[StatValue]:
    """Entry t is f(G_t) - f(G_{t-1}), with G_0 the empty graph."""
    prev = empty_value(kind, seq.num_nodes)
    out = []
    for value in exact_trace(kind, seq):
        out.append(value - prev)
        prev = value
    return out


def static_sensitivity(kind: StatKind, num_nodes: Optional[int] = None,
                       degree_bound: Optional[int] = None) -> tuple[float, float]:
    """(L1, L2) change of f under a single edge flip.

    Triangles need ``num_nodes`` (any edge lies in at most N-2 triangles) or,
    on degree-restricted inputs, ``degree_bound`` (at most D-1 triangles).
    """
    stat = kind.stat
    if stat in (Stat.EDGES, Stat.MATCHING, Stat.COMPONENTS):
        return 1.0, 1.0
    if stat is Stat.TRIANGLES:
        if degree_bound is not None:
            bound = max(degree_bound - 1, 0)
        elif num_nodes is not None:
            bound = max(num_nodes - 2, 0)
        else:
            raise ValueError("triangle sensitivity needs num_nodes or degree_bound")
        return float(bound), float(bound)
    if stat is Stat.HIGH_DEGREE:
        # both endpoints can cross the threshold in the same direction
        return 2.0, 2.0
    if stat is Stat.DEGREE_LIST:
        return 2.0, math.sqrt(2.0)
    if stat is Stat.DEGREE_HIST:
        # two endpoints leave the same bucket and enter the same bucket
        return 4.0, 2.0 * math.sqrt(2.0)
    raise AssertionError(stat)


def value_range(kind: StatKind, num_nodes: int) -> tuple[int, int]:
    """Bounds used by the optional post-processing clamp."""
    n = num_nodes
    stat = kind.stat
    if stat is Stat.EDGES:
        return 0, n * (n - 1) // 2
    if stat is Stat.TRIANGLES:
        return 0, n * (n - 1) * (n - 2) // 6
    if stat in (Stat.HIGH_DEGREE, Stat.COMPONENTS, Stat.DEGREE_HIST):
        return 0, n
    if stat is Stat.MATCHING:
        return 0, n // 2
    if stat is Stat.DEGREE_LIST:
        return 0, n - 1
    raise AssertionError(stat)
