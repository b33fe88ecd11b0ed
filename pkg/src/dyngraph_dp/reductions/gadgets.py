"""Distinguishing gadgets: small graphs where toggling designated edges shifts
a statistic by exactly the gadget weight."""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from typing import Iterable, Optional

from ..exact_stats import COMPONENTS, MATCHING, StatKind, exact_value, high_degree
from ..graph_stream import DynamicGraph, EdgeKey, edge_key


class GadgetError(ValueError):
    """A gadget fails its distinguishing property."""


@dataclass(frozen=True)
class Gadget:
    """Graph H on ``num_nodes`` nodes with toggle edges ``e1`` and optional ``e2``.

    ``present`` says whether the toggle edges start inside H (toggling
    deletes them) or outside it (toggling inserts them).  ``sign = -1``
    marks a gadget for the negated statistic.
    """

    name: str
    num_nodes: int
    edges: tuple[EdgeKey, ...]
    e1: EdgeKey
    e2: Optional[EdgeKey]
    present: bool
    weight: int
    stat: StatKind
    sign: int = 1

    @property
    def size(self) -> tuple[int, int]:
        return self.num_nodes, len(self.edges)

    @property
    def two_edge(self) -> bool:
        return self.e2 is not None

    @property
    def toggle_edges(self) -> tuple[EdgeKey, ...]:
        return (self.e1,) if self.e2 is None else (self.e1, self.e2)

    def value(self, edges: Iterable[EdgeKey]) -> int:
        """Signed statistic of the gadget graph with the given edge set."""
        return self.sign * int(exact_value(self.stat, DynamicGraph.from_edges(self.num_nodes, edges)))

    def toggled(self, which: Iterable[EdgeKey]) -> set[EdgeKey]:
        """Edge set of H after toggling every edge in ``which``."""
        edges = set(self.edges)
        for e in which:
            if self.present:
                edges.discard(e)
            else:
                edges.add(e)
        return edges


def verify_gadget(g: Gadget) -> None:
    """Check the distinguishing property over every subset of the toggle edges."""
    for e in g.toggle_edges:
        if (e in g.edges) != g.present:
            raise GadgetError(f"{g.name}: toggle edge {e} presence disagrees with present={g.present}")
    if g.weight <= 0:
        raise GadgetError(f"{g.name}: weight must be positive")
    base = g.value(g.edges)
    toggles = g.toggle_edges
    for mask in product((False, True), repeat=len(toggles)):
        chosen = [e for e, on in zip(toggles, mask) if on]
        expected = base + g.weight if all(mask) else base
        got = g.value(g.toggled(chosen))
        if got != expected:
            raise GadgetError(f"{g.name}: toggling {chosen} gives {got}, expected {expected}")


def _build(name, num_nodes, edges, e1, e2, present, stat, sign=1, weight=1) -> Gadget:
    g = Gadget(name, num_nodes, tuple(sorted(edge_key(*e) for e in edges)), edge_key(*e1),
               None if e2 is None else edge_key(*e2), present, weight, stat, sign)
    verify_gadget(g)
    return g


def mm_gadget() -> Gadget:
    # path b-c; adding a-b and c-d yields a perfect matching
    return _build("mm", 4, [(1, 2)], (0, 1), (2, 3), False, MATCHING)


def cc_gadget() -> Gadget:
    # triangle a-b-c; removing a-b and b-c isolates b
    return _build("cc", 3, [(0, 1), (1, 2), (0, 2)], (0, 1), (1, 2), True, COMPONENTS)


def neg_d1_gadget() -> Gadget:
    # 4-cycle a-b-d-c-a; removing a-b and a-c isolates a
    return _build("neg-d1", 4, [(0, 1), (1, 3), (2, 3), (0, 2)], (0, 1), (0, 2), True,
                  high_degree(1), sign=-1)


def builtin_gadgets() -> dict[str, Gadget]:
    return {g.name: g for g in (mm_gadget(), cc_gadget(), neg_d1_gadget())}


def convert_2edge_to_1edge(g: Gadget) -> Gadget:
    """Fix e2 in its toggled state, leaving a 1-edge gadget on e1 with the same weight."""
    if not g.two_edge:
        raise GadgetError(f"{g.name} is not a 2-edge gadget")
    verify_gadget(g)
    edges = g.toggled([g.e2])
    out = replace(g, name=f"{g.name}-1edge", edges=tuple(sorted(edges)), e2=None)
    verify_gadget(out)
    return out
