"""Dynamic graph sequences: update encoding, replay, neighbor relations, text format.

A sequence is a fixed-length list of single-edge updates over ``N`` nodes,
starting from the empty graph.  Every timestep carries exactly one update,
which may be a no-op.

Text format::

    N T
    + u v
    - u v
    .

one line per timestep, trailing newline required.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

EdgeKey = tuple[int, int]


class StreamFormatError(ValueError):
    """Raised when a stream file cannot be parsed."""


class InvalidUpdate(ValueError):
    """Raised when an update does not apply to the current graph."""


def edge_key(u: int, v: int) -> EdgeKey:
    """Canonical undirected edge ``(min, max)``; rejects self-loops."""
    u, v = int(u), int(v)
    if u == v:
        raise ValueError(f"self-loop on node {u}")
    if u < 0 or v < 0:
        raise ValueError(f"negative node id in ({u}, {v})")
    return (u, v) if u < v else (v, u)


class UpdateKind(enum.Enum):
    INSERT = "+"
    DELETE = "-"
    NOOP = "."


@dataclass(frozen=True)
class Update:
    kind: UpdateKind
    edge: Optional[EdgeKey] = None

    def __post_init__(self):
        if self.kind is UpdateKind.NOOP:
            if self.edge is not None:
                raise ValueError("NoOp carries no edge")
        elif self.edge is None:
            raise ValueError(f"{self.kind.name} needs an edge")
        elif self.edge[0] >= self.edge[1]:
            raise ValueError(f"edge {self.edge} is not canonical (u < v)")

    @classmethod
    def insert(cls, u: int, v: int) -> "Update":
        return cls(UpdateKind.INSERT, edge_key(u, v))

    @classmethod
    def delete(cls, u: int, v: int) -> "Update":
        return cls(UpdateKind.DELETE, edge_key(u, v))

    @classmethod
    def noop(cls) -> "Update":
        return NOOP

    @property
    def is_noop(self) -> bool:
        return self.kind is UpdateKind.NOOP

    def __str__(self) -> str:
        if self.is_noop:
            return "."
        return f"{self.kind.value} {self.edge[0]} {self.edge[1]}"


NOOP = Update(UpdateKind.NOOP)


@dataclass(frozen=True)
class UpdateSequence:
    """Length-``T`` stream of updates over ``num_nodes`` nodes."""

    num_nodes: int
    updates: tuple[Update, ...]

    def __post_init__(self):
        if self.num_nodes < 1:
            raise ValueError("num_nodes must be positive")
        if not isinstance(self.updates, tuple):
            object.__setattr__(self, "updates", tuple(self.updates))

    @property
    def horizon(self) -> int:
        return len(self.updates)

    def __len__(self) -> int:
        return len(self.updates)

    def __iter__(self) -> Iterator[Update]:
        return iter(self.updates)

    def __getitem__(self, t: int) -> Update:
        """Update at 1-based timestep ``t``."""
        if not 1 <= t <= len(self.updates):
            raise IndexError(f"timestep {t} outside [1, {len(self.updates)}]")
        return self.updates[t - 1]

    def graphs(self) -> Iterator["DynamicGraph"]:
        """Yield the replayed graph after each timestep (same mutable object)."""
        g = DynamicGraph(self.num_nodes)
        for upd in self.updates:
            g.apply(upd)
            yield g


@dataclass(frozen=True)
class Violation:
    t: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"t={self.t}: {self.kind}: {self.message}"


class DynamicGraph:
    """Simple undirected graph with maintained degrees, edge and triangle counts."""

    def __init__(self, num_nodes: int):
        if num_nodes < 1:
            raise ValueError("num_nodes must be positive")
        self.num_nodes = num_nodes
        self.adjacency: list[set[int]] = [set() for _ in range(num_nodes)]
        self.degrees: list[int] = [0] * num_nodes
        self.edge_count = 0
        self.triangles = 0

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[EdgeKey]) -> "DynamicGraph":
        g = cls(num_nodes)
        for u, v in edges:
            g.apply(Update.insert(u, v))
        return g

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph(self.num_nodes)
        g.adjacency = [set(nb) for nb in self.adjacency]
        g.degrees = list(self.degrees)
        g.edge_count = self.edge_count
        g.triangles = self.triangles
        return g

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self) -> list[EdgeKey]:
        return sorted((u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    def common_neighbors(self, u: int, v: int) -> int:
        a, b = self.adjacency[u], self.adjacency[v]
        if len(a) > len(b):
            a, b = b, a
        return sum(1 for x in a if x in b)

    def check(self, upd: Update) -> Optional[str]:
        """Return a violation kind if ``upd`` cannot be applied, else None."""
        if upd.is_noop:
            return None
        u, v = upd.edge
        if v >= self.num_nodes:
            return "node-out-of-range"
        present = v in self.adjacency[u]
        if upd.kind is UpdateKind.INSERT and present:
            return "insert-present"
        if upd.kind is UpdateKind.DELETE and not present:
            return "delete-absent"
        return None

    def apply(self, upd: Update) -> "DynamicGraph":
        problem = self.check(upd)
        if problem is not None:
            raise InvalidUpdate(f"{problem}: {upd}")
        if upd.is_noop:
            return self
        u, v = upd.edge
        # triangle delta excludes the edge itself, so count before mutating
        common = self.common_neighbors(u, v)
        if upd.kind is UpdateKind.INSERT:
            self.adjacency[u].add(v)
            self.adjacency[v].add(u)
            self.degrees[u] += 1
            self.degrees[v] += 1
            self.edge_count += 1
            self.triangles += common
        else:
            self.adjacency[u].discard(v)
            self.adjacency[v].discard(u)
            self.degrees[u] -= 1
            self.degrees[v] -= 1
            self.edge_count -= 1
            self.triangles -= common
        return self

    def __repr__(self) -> str:
        return f"<DynamicGraph N={self.num_nodes} m={self.edge_count}>"


def apply_update(g: DynamicGraph, upd: Update) -> DynamicGraph:
    """Mutate ``g`` by ``upd`` and return it."""
    return g.apply(upd)


def validate(seq: UpdateSequence) -> Optional[Violation]:
    """Replay from the empty graph; return the first violation or None."""
    g = DynamicGraph(seq.num_nodes)
    for t, upd in enumerate(seq.updates, start=1):
        problem = g.check(upd)
        if problem is not None:
            return Violation(t, problem, str(upd))
        g.apply(upd)
    return None


def is_valid(seq: UpdateSequence) -> bool:
    return validate(seq) is None


def _check_comparable(s1: UpdateSequence, s2: UpdateSequence) -> None:
    if s1.num_nodes != s2.num_nodes or s1.horizon != s2.horizon:
        raise ValueError(
            f"dimension mismatch: (N={s1.num_nodes}, T={s1.horizon}) vs "
            f"(N={s2.num_nodes}, T={s2.horizon})"
        )


def are_item_neighbors(s1: UpdateSequence, s2: UpdateSequence) -> bool:
    """True iff all differing timesteps concern a single edge."""
    _check_comparable(s1, s2)
    touched: set[EdgeKey] = set()
    for a, b in zip(s1.updates, s2.updates):
        if a == b:
            continue
        for upd in (a, b):
            if upd.edge is not None:
                touched.add(upd.edge)
        if len(touched) > 1:
            return False
    return True


def _touches_between(updates: Sequence[Update], edge: EdgeKey, lo: int, hi: int) -> bool:
    # 0-based, exclusive on both ends
    return any(updates[i].edge == edge for i in range(lo + 1, hi))


def are_event_neighbors(s1: UpdateSequence, s2: UpdateSequence) -> bool:
    """True iff one sequence equals the other with one update replaced by a
    no-op, or with an update and the next opposite update of the same edge
    replaced by no-ops."""
    _check_comparable(s1, s2)
    diff = [i for i, (a, b) in enumerate(zip(s1.updates, s2.updates)) if a != b]
    if not diff:
        return True
    if len(diff) > 2:
        return False
    for x, y in ((s1.updates, s2.updates), (s2.updates, s1.updates)):
        if any(not y[i].is_noop for i in diff):
            continue
        if any(x[i].is_noop for i in diff):
            continue
        first = x[diff[0]]
        edge = first.edge
        if len(diff) == 1:
            # second change at the sentinel T+1: edge untouched for the rest
            if not _touches_between(x, edge, diff[0], len(x)):
                return True
            continue
        second = x[diff[1]]
        if second.edge != edge or second.kind is first.kind:
            continue
        if not _touches_between(x, edge, diff[0], diff[1]):
            return True
    return False


def parse_sequence(text: str) -> UpdateSequence:
    """Parse the line-oriented stream format (see module docstring)."""
    if not text.endswith("\n"):
        raise StreamFormatError("missing trailing newline")
    lines = text[:-1].split("\n")
    header = lines[0].split()
    if len(header) != 2:
        raise StreamFormatError(f"header must be 'N T', got {lines[0]!r}")
    try:
        n, horizon = int(header[0]), int(header[1])
    except ValueError as exc:
        raise StreamFormatError(f"bad header {lines[0]!r}") from exc
    if n < 1 or horizon < 1:
        raise StreamFormatError("N and T must be positive")
    body = lines[1:]
    if len(body) != horizon:
        raise StreamFormatError(f"header says T={horizon} but found {len(body)} update lines")
    updates = []
    for lineno, line in enumerate(body, start=2):
        parts = line.split()
        if parts == ["."]:
            updates.append(NOOP)
            continue
        if len(parts) != 3 or parts[0] not in ("+", "-"):
            raise StreamFormatError(f"line {lineno}: malformed update {line!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
            if u >= n or v >= n:
                raise ValueError(f"node id >= N={n}")
            edge = edge_key(u, v)
        except ValueError as exc:
            raise StreamFormatError(f"line {lineno}: {exc}") from exc
        kind = UpdateKind.INSERT if parts[0] == "+" else UpdateKind.DELETE
        updates.append(Update(kind, edge))
    return UpdateSequence(n, tuple(updates))


def serialize_sequence(seq: UpdateSequence) -> str:
    lines = [f"{seq.num_nodes} {seq.horizon}"]
    lines.extend(str(upd) for upd in seq.updates)
    return "\n".join(lines) + "\n"


def read_sequence(path) -> UpdateSequence:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_sequence(fh.read())


def write_sequence(seq: UpdateSequence, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(serialize_sequence(seq))
