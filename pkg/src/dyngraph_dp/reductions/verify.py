"""Checking reduction outputs against exact replay and decoding released values."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..exact_stats import empty_value, exact_trace
from ..graph_stream import are_event_neighbors, are_item_neighbors, validate
from .constructions import ReductionOutput


@dataclass
class ReductionReport:
    ok: bool
    recovered: list[Fraction]
    failures: list[tuple[Optional[int], str]] = field(default_factory=list)

    def __str__(self) -> str:
        if self.ok:
            return f"ok, recovered {[str(r) for r in self.recovered]}"
        return "; ".join(f"query {i}: {msg}" if i is not None else msg for i, msg in self.failures)


def neighbor_relation_holds(a: ReductionOutput, b: ReductionOutput) -> bool:
    """Check the relation ``a`` advertises between the two sequences."""
    if a.relation == "event":
        return are_event_neighbors(a.seq, b.seq)
    if a.relation == "item":
        return are_item_neighbors(a.seq, b.seq)
    raise ValueError(f"unknown relation {a.relation!r}")


def verify_reduction(out: ReductionOutput, expected: Optional[Sequence[int]] = None,
                     sibling: Optional[ReductionOutput] = None) -> ReductionReport:
    """Replay ``out.seq`` exactly and compare every decoded answer with ``expected``
    (defaults to ``out.answers``).  A ``sibling`` output is checked for the
    advertised neighboring relation."""
    expected = list(out.answers if expected is None else expected)
    failures: list[tuple[Optional[int], str]] = []
    violation = validate(out.seq)
    if violation is not None:
        return ReductionReport(False, [], [(None, f"invalid sequence: {violation}")])
    times = out.query_times
    if any(b <= a for a, b in zip(times, times[1:])) or not all(1 <= t <= out.seq.horizon for t in times):
        failures.append((None, "query times not strictly increasing within [1, T]"))
    if len(expected) != len(times):
        failures.append((None, f"{len(times)} query times but {len(expected)} expected answers"))
    trace = exact_trace(out.stat, out.seq)
    base = trace[out.baseline_time - 1] if out.baseline_time else empty_value(out.stat, out.seq.num_nodes)
    recovered = []
    for m, t in enumerate(times):
        if not 1 <= t <= len(trace):
            failures.append((m, f"query time {t} outside the sequence"))
            continue
        value = Fraction(out.sign * (int(trace[t - 1]) - int(base)), out.scale)
        recovered.append(value)
        if m < len(expected) and value != expected[m]:
            failures.append((m, f"recovered {value} at t={t}, expected {expected[m]}"))
    if sibling is not None and not neighbor_relation_holds(out, sibling):
        failures.append((None, f"sibling is not {out.relation}-level neighboring"))
    return ReductionReport(not failures, recovered, failures)


def decode_answers(released: Sequence, out: ReductionOutput) -> list[float]:
    """(released[t_m] - released[t_0]) / scale, signed; ``released[t]`` is the
    release after step t (1-based), and without a baseline step the exact
    f(G_0) of the edgeless graph is subtracted."""
    if len(released) != out.seq.horizon:
        raise ValueError(f"expected {out.seq.horizon} released values, got {len(released)}")
    if out.baseline_time:
        base = float(np.asarray(released[out.baseline_time - 1]).reshape(-1)[0])
    else:
        base = float(empty_value(out.stat, out.seq.num_nodes))
    return [out.sign * (float(np.asarray(released[t - 1]).reshape(-1)[0]) - base) / out.scale
            for t in out.query_times]
