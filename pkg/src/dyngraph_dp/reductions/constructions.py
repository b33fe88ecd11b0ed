"""Transformations from query-release datasets to dynamic graph sequences.

Each construction returns a :class:`ReductionOutput`: the sequence, the
steps at which the statistic encodes a query answer, the scale factor, and
an optional baseline step whose value is subtracted before rescaling.  All
timesteps in comments and code are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..exact_stats import EDGES, TRIANGLES, StatKind, high_degree
from ..graph_stream import NOOP, Update, UpdateKind, UpdateSequence
from .gadgets import Gadget, GadgetError, verify_gadget


def _binary(array, ndim: int, what: str) -> np.ndarray:
    arr = np.asarray(array, dtype=np.int64)
    if arr.ndim != ndim:
        raise ValueError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{what} must be 0/1")
    return arr


@dataclass(eq=False)
class SubmatrixInstance:
    """Secret n x n matrix Y with queries (a, b) asking for a^T Y b."""

    Y: np.ndarray
    queries: list[tuple[np.ndarray, np.ndarray]]
    w: int = 1
    block: Optional[int] = None

    def __post_init__(self):
        self.Y = _binary(self.Y, 2, "Y")
        n, cols = self.Y.shape
        if n != cols:
            raise ValueError(f"Y must be square, got {self.Y.shape}")
        self.queries = [(_binary(a, 1, "a"), _binary(b, 1, "b")) for a, b in self.queries]
        for a, b in self.queries:
            if len(a) != n or len(b) != n:
                raise ValueError(f"query vectors must have length {n}")
        if not self.queries:
            raise ValueError("at least one query is required")
        if self.w < 1:
            raise ValueError("w must be positive")
        if self.block is not None and (self.block < 1 or n % self.block):
            raise ValueError(f"block size {self.block} must divide n={n}")

    @property
    def n(self) -> int:
        return self.Y.shape[0]

    def answers(self) -> list[int]:
        return [int(a @ self.Y @ b) for a, b in self.queries]


@dataclass(eq=False)
class MarginalsInstance:
    """n x d binary rows; query j is the column sum (n times the j-th marginal)."""

    Y: np.ndarray

    def __post_init__(self):
        self.Y = _binary(self.Y, 2, "Y")
        if 0 in self.Y.shape:
            raise ValueError("Y must be nonempty")

    @property
    def n(self) -> int:
        return self.Y.shape[0]

    @property
    def d(self) -> int:
        return self.Y.shape[1]

    def answers(self) -> list[int]:
        return [int(s) for s in self.Y.sum(axis=0)]


@dataclass(eq=False)
class InnerProductInstance:
    """Secret y in {0,1}^n with query vectors q; answer l is y . q_l."""

    y: np.ndarray
    queries: list[np.ndarray]

    def __post_init__(self):
        self.y = _binary(self.y, 1, "y")
        self.queries = [_binary(q, 1, "q") for q in self.queries]
        if not self.queries:
            raise ValueError("at least one query is required")
        if any(len(q) != len(self.y) for q in self.queries):
            raise ValueError(f"queries must have length {len(self.y)}")

    @property
    def n(self) -> int:
        return len(self.y)

    def answers(self) -> list[int]:
        return [int(self.y @ q) for q in self.queries]


@dataclass
class ReductionOutput:
    seq: UpdateSequence
    query_times: list[int]
    scale: int
    stat: StatKind
    baseline_time: Optional[int] = None
    sign: int = 1
    relation: str = "event"
    answers: list[int] = field(default_factory=list)

    def __post_init__(self):
        times = self.query_times
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("query times must be strictly increasing")
        if times and (times[0] < 1 or times[-1] > self.seq.horizon):
            raise ValueError("query times must lie in [1, T]")


class SequenceBuilder:
    """Assign updates to fixed 1-based slots; unassigned slots become no-ops."""

    def __init__(self, horizon: int):
        self.horizon = horizon
        self._slots: dict[int, Update] = {}

    def put(self, t: int, upd: Update) -> None:
        if not 1 <= t <= self.horizon:
            raise ValueError(f"slot {t} outside [1, {self.horizon}]")
        if t in self._slots:
            raise ValueError(f"slot {t} assigned twice")
        self._slots[t] = upd

    def build(self, num_nodes: int) -> UpdateSequence:
        return UpdateSequence(num_nodes, tuple(self._slots.get(t, NOOP) for t in range(1, self.horizon + 1)))


def _toggle(edge, present: bool, revert: bool = False) -> Update:
    """Insert for absent-flavored gadgets, delete for present ones; ``revert`` flips it."""
    insert = present == revert
    kind = UpdateKind.INSERT if insert else UpdateKind.DELETE
    return Update(kind, edge)


def _copy_edge(g: Gadget, copy: int, edge) -> tuple[int, int]:
    off = copy * g.num_nodes
    return edge[0] + off, edge[1] + off


def _build_copies(b: SequenceBuilder, g: Gadget, copies: int) -> None:
    """Insert H for every copy, lexicographic in (copy, gadget edge)."""
    m_g = len(g.edges)
    for c in range(copies):
        for k, e in enumerate(g.edges):
            b.put(c * m_g + k + 1, Update.insert(*_copy_edge(g, c, e)))


# --- triangle counting from submatrix queries ------------------------------

def submatrix_to_triangles(inst: SubmatrixInstance) -> ReductionOutput:
    """f_triangles at t_m equals w * a_m^T Y b_m.

    Nodes x_i, v_j, z_l; the Y phase writes x_i-v_j at n(i-1)+j.  Query m
    attaches the a-rows and b-columns to all w z-nodes, then detaches them.
    """
    if inst.block is not None:
        raise ValueError("use submatrix_to_triangles_bounded for blocked instances")
    n, w, k = inst.n, inst.w, len(inst.queries)
    x = lambda i: i - 1
    v = lambda j: n + j - 1
    z = lambda l: 2 * n + l - 1
    horizon = n * n + 4 * k * n * w
    b = SequenceBuilder(horizon)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if inst.Y[i - 1, j - 1]:
                b.put(n * (i - 1) + j, Update.insert(x(i), v(j)))
    times = []
    for m, (av, bv) in enumerate(inst.queries, start=1):
        s = n * n + 4 * n * w * (m - 1)
        for i in range(1, n + 1):
            if av[i - 1]:
                for l in range(1, w + 1):
                    b.put(s + (i - 1) * w + l, Update.insert(x(i), z(l)))
                    b.put(s + 2 * n * w + (i - 1) * w + l, Update.delete(x(i), z(l)))
        for j in range(1, n + 1):
            if bv[j - 1]:
                for l in range(1, w + 1):
                    b.put(s + n * w + (j - 1) * w + l, Update.insert(v(j), z(l)))
                    b.put(s + 3 * n * w + (j - 1) * w + l, Update.delete(v(j), z(l)))
        times.append(s + 2 * n * w)
    return ReductionOutput(b.build(2 * n + w), times, w, TRIANGLES, answers=inst.answers())


def submatrix_to_triangles_bounded(inst: SubmatrixInstance) -> ReductionOutput:
    """Blocked variant with max degree at most 2B + w.

    Y splits into (n/B)^2 blocks of size B x B, each with private x, v and z
    nodes, so a node only meets its own block.
    """
    if inst.block is None:
        raise ValueError("bounded reduction needs a block size B")
    n, w, B, k = inst.n, inst.w, inst.block, len(inst.queries)
    nb = n // B
    width = 2 * B + w

    def base(p1, p2):
        return (p1 * nb + p2) * width

    x = lambda p1, p2, il: base(p1, p2) + il
    v = lambda p1, p2, jl: base(p1, p2) + B + jl
    z = lambda p1, p2, l: base(p1, p2) + 2 * B + l - 1
    phase = n * n * w // B
    horizon = n * n + 4 * k * phase
    b = SequenceBuilder(horizon)
    for i in range(n):
        for j in range(n):
            if inst.Y[i, j]:
                p1, p2 = i // B, j // B
                b.put(n * i + j + 1, Update.insert(x(p1, p2, i % B), v(p1, p2, j % B)))
    times = []
    for m, (av, bv) in enumerate(inst.queries, start=1):
        s = n * n + 4 * phase * (m - 1)
        slot = 0
        for p1 in range(nb):
            for il in range(B):
                for l in range(1, w + 1):
                    for p2 in range(nb):
                        slot += 1
                        if av[p1 * B + il]:
                            b.put(s + slot, Update.insert(x(p1, p2, il), z(p1, p2, l)))
                            b.put(s + 2 * phase + slot, Update.delete(x(p1, p2, il), z(p1, p2, l)))
        slot = 0
        for p2 in range(nb):
            for jl in range(B):
                for l in range(1, w + 1):
                    for p1 in range(nb):
                        slot += 1
                        if bv[p2 * B + jl]:
                            b.put(s + phase + slot, Update.insert(v(p1, p2, jl), z(p1, p2, l)))
                            b.put(s + 3 * phase + slot, Update.delete(v(p1, p2, jl), z(p1, p2, l)))
        times.append(s + 2 * phase)
    return ReductionOutput(b.build(nb * nb * width), times, w, TRIANGLES, answers=inst.answers())


# --- gadget-based reductions -----------------------------------------------

def innerproduct_to_f(inst: InnerProductInstance, g: Gadget) -> ReductionOutput:
    """f(G_{t_l}) - f(G_{t_0}) = w * (y . q_l) with n disjoint gadget copies.

    e1 of copy j is toggled iff y_j = 1; for query l, e2 of copy j is
    toggled iff q_l[j] = 1 and reverted before the next query.
    """
    if not g.two_edge:
        raise GadgetError("inner-product reduction needs a 2-edge gadget")
    verify_gadget(g)
    n, k = inst.n, len(inst.queries)
    m_g = len(g.edges)
    t0 = (m_g + 1) * n
    b = SequenceBuilder((m_g + 2 * k) * n)
    _build_copies(b, g, n)
    for j in range(n):
        if inst.y[j]:
            b.put(m_g * n + j + 1, _toggle(_copy_edge(g, j, g.e1), g.present))
    times = []
    for l, q in enumerate(inst.queries, start=1):
        for j in range(n):
            if q[j]:
                e2 = _copy_edge(g, j, g.e2)
                b.put(t0 + 2 * (l - 1) * n + j + 1, _toggle(e2, g.present))
                if l < k:
                    b.put(t0 + (2 * l - 1) * n + j + 1, _toggle(e2, g.present, revert=True))
        times.append((m_g + 2 * l) * n)
    return ReductionOutput(b.build(g.num_nodes * n), times, g.weight, g.stat, t0, g.sign,
                           "event", inst.answers())


def marginals_to_f(inst: MarginalsInstance, g: Gadget) -> ReductionOutput:
    """Column sums from a 1-edge gadget: e1 of copy i is toggled for column j
    iff Y_i[j] = 1, then reverted before the next column.

    H is built in m_g*n steps, followed by n idle steps so that the toggle
    phases start at t_0 = (m_g + 1) n.
    """
    if g.two_edge:
        raise GadgetError("marginals reduction needs a 1-edge gadget (convert it first)")
    verify_gadget(g)
    n, d = inst.n, inst.d
    m_g = len(g.edges)
    t0 = (m_g + 1) * n
    b = SequenceBuilder((m_g + 2 * d) * n)
    _build_copies(b, g, n)
    times = []
    for j in range(1, d + 1):
        for i in range(n):
            if inst.Y[i, j - 1]:
                e1 = _copy_edge(g, i, g.e1)
                b.put(t0 + 2 * (j - 1) * n + i + 1, _toggle(e1, g.present))
                if j < d:
                    b.put(t0 + (2 * j - 1) * n + i + 1, _toggle(e1, g.present, revert=True))
        times.append((m_g + 2 * j) * n)
    return ReductionOutput(b.build(g.num_nodes * n), times, g.weight, g.stat, t0, g.sign,
                           "item", inst.answers())


def output_determined_variant(inst: MarginalsInstance, g: Gadget) -> ReductionOutput:
    """Column sums from a 2-edge gadget: e1 is toggled on every copy first,
    then e2 of copy i is toggled for column j iff Y_i[j] = 1."""
    if not g.two_edge:
        raise GadgetError("output-determined reduction needs a 2-edge gadget")
    verify_gadget(g)
    n, d = inst.n, inst.d
    m_g = len(g.edges)
    t0 = (m_g + 1) * n
    b = SequenceBuilder((m_g + 2 * d) * n)
    _build_copies(b, g, n)
    for i in range(n):
        b.put(m_g * n + i + 1, _toggle(_copy_edge(g, i, g.e1), g.present))
    times = []
    for j in range(1, d + 1):
        for i in range(n):
            if inst.Y[i, j - 1]:
                e2 = _copy_edge(g, i, g.e2)
                b.put(t0 + 2 * (j - 1) * n + i + 1, _toggle(e2, g.present))
                if j < d:
                    b.put(t0 + (2 * j - 1) * n + i + 1, _toggle(e2, g.present, revert=True))
        times.append((m_g + 2 * j) * n)
    return ReductionOutput(b.build(g.num_nodes * n), times, g.weight, g.stat, t0, g.sign,
                           "item", inst.answers())


# --- direct item-level reductions ------------------------------------------

def marginals_to_triangles(inst: MarginalsInstance, w: int = 1) -> ReductionOutput:
    """f_triangles at t_j equals w times column sum j.

    Each row i owns a cross pair e_i between V0 and V1 (s = ceil(sqrt n) nodes
    each); both sides are joined to all w nodes of W up front, so inserting
    e_i closes w triangles.
    """
    if w < 1:
        raise ValueError("w must be positive")
    n, d = inst.n, inst.d
    s = math.isqrt(n - 1) + 1
    v0 = list(range(s))
    v1 = list(range(s, 2 * s))
    wn = list(range(2 * s, 2 * s + w))
    t0 = 2 * s * w
    b = SequenceBuilder(t0 + 2 * n * d)
    t = 0
    for u in v0 + v1:
        for x in wn:
            t += 1
            b.put(t, Update.insert(u, x))
    times = []
    for j in range(1, d + 1):
        for i in range(n):
            if inst.Y[i, j - 1]:
                e = (v0[i // s], v1[i % s])
                b.put(t0 + 2 * (j - 1) * n + i + 1, Update.insert(*e))
                b.put(t0 + (2 * j - 1) * n + i + 1, Update.delete(*e))
        times.append(t0 + (2 * j - 1) * n)
    return ReductionOutput(b.build(2 * s + w), times, w, TRIANGLES, None, 1, "item", inst.answers())


def pair_nodes(n: int) -> int:
    """Smallest N >= 2 whose N(N-1)/2 node pairs number at least n."""
    size = 2
    while size * (size - 1) // 2 < n:
        size += 1
    return size


def marginals_to_edgecount(inst: MarginalsInstance) -> ReductionOutput:
    """f_edges at t_j = (2j-1)n equals column sum j; pair e_i is present iff Y_i[j] = 1."""
    n, d = inst.n, inst.d
    size = pair_nodes(n)
    pairs = [(u, v) for u in range(size) for v in range(u + 1, size)][:n]
    b = SequenceBuilder(2 * n * d)
    times = []
    for j in range(1, d + 1):
        for i in range(n):
            if inst.Y[i, j - 1]:
                b.put(2 * (j - 1) * n + i + 1, Update.insert(*pairs[i]))
                if j < d:
                    b.put((2 * j - 1) * n + i + 1, Update.delete(*pairs[i]))
        times.append((2 * j - 1) * n)
    return ReductionOutput(b.build(size), times, 1, EDGES, None, 1, "item", inst.answers())


# --- post-processing transformers ------------------------------------------

def pad(out: ReductionOutput, num_nodes: int, horizon: int) -> ReductionOutput:
    """Append isolated nodes and trailing no-ops to reach exactly (N, T)."""
    seq = out.seq
    if num_nodes < seq.num_nodes or horizon < seq.horizon:
        raise ValueError(f"cannot shrink (N={seq.num_nodes}, T={seq.horizon}) to ({num_nodes}, {horizon})")
    padded = UpdateSequence(num_nodes, seq.updates + (NOOP,) * (horizon - seq.horizon))
    return ReductionOutput(padded, list(out.query_times), out.scale, out.stat, out.baseline_time,
                           out.sign, out.relation, list(out.answers))


def lift_tau(seq: UpdateSequence, tau: int) -> tuple[UpdateSequence, int]:
    """Prefix ``seq`` with tau-1 new nodes joined to every node and to each other.

    Returns (H, t0) with f_{d>=1}(G_t) = f_{d>=tau}(H_{t0+t}) - (tau-1) for all t,
    given N >= 2.
    """
    if tau < 1:
        raise ValueError("tau must be at least 1")
    n = seq.num_nodes
    extra = list(range(n, n + tau - 1))
    prefix = [Update.insert(u, x) for u in extra for x in range(n)]
    prefix += [Update.insert(a, b) for i, a in enumerate(extra) for b in extra[i + 1:]]
    return UpdateSequence(n + tau - 1, tuple(prefix) + seq.updates), len(prefix)


def lift_reduction(out: ReductionOutput, tau: int) -> ReductionOutput:
    """Apply :func:`lift_tau` to a reduction for the negated f_{d>=1}."""
    if out.stat != high_degree(1):
        raise ValueError("tau lifting applies to high-degree:1 reductions")
    if out.baseline_time is None:
        raise ValueError("tau lifting needs a baseline step to cancel the tau-1 offset")
    seq, t0 = lift_tau(out.seq, tau)
    return ReductionOutput(seq, [t + t0 for t in out.query_times], out.scale, high_degree(tau),
                           out.baseline_time + t0, out.sign, out.relation, list(out.answers))
