"""Text formats for 0/1 matrices and reduction query-time sidecars.

Matrix::

    rows cols
    0 1 1
    1 0 0

Sidecar: ``#`` comment lines carrying the statistic, sign, relation and
expected answers, then one ``m t_m scale [t0]`` line per query.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..exact_stats import StatKind
from ..graph_stream import StreamFormatError, UpdateSequence
from ..reductions import ReductionOutput


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise StreamFormatError("empty matrix file")
    try:
        rows, cols = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise StreamFormatError(f"matrix header must be 'rows cols', got {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != rows:
        raise StreamFormatError(f"header says {rows} rows, found {len(body)}")
    out = np.zeros((rows, cols), dtype=np.int64)
    for r, line in enumerate(body):
        parts = line.split()
        if len(parts) != cols or any(p not in ("0", "1") for p in parts):
            raise StreamFormatError(f"row {r + 1}: expected {cols} entries in {{0,1}}")
        out[r] = [int(p) for p in parts]
    return out


def format_matrix(mat) -> str:
    mat = np.atleast_2d(np.asarray(mat, dtype=np.int64))
    lines = [f"{mat.shape[0]} {mat.shape[1]}"]
    lines.extend(" ".join(str(int(x)) for x in row) for row in mat)
    return "\n".join(lines) + "\n"


def read_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(mat, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_matrix(mat))


def format_sidecar(out: ReductionOutput) -> str:
    lines = [f"# stat={out.stat} sign={out.sign} relation={out.relation}"]
    if out.answers:
        lines.append("# answers=" + ",".join(str(a) for a in out.answers))
    for m, t in enumerate(out.query_times, start=1):
        fields = [str(m), str(t), str(out.scale)]
        if out.baseline_time:
            fields.append(str(out.baseline_time))
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def parse_sidecar(text: str, seq: UpdateSequence) -> ReductionOutput:
    meta: dict[str, str] = {}
    times, scale, baseline = [], None, None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                key, _, value = token.partition("=")
                meta[key] = value
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            raise StreamFormatError(f"sidecar line must be 'm t_m scale [t0]', got {line!r}")
        m, t, s = int(parts[0]), int(parts[1]), int(parts[2])
        if m != len(times) + 1:
            raise StreamFormatError(f"query index {m} out of order")
        if scale is not None and s != scale:
            raise StreamFormatError("scale must be the same on every line")
        scale = s
        t0: Optional[int] = int(parts[3]) if len(parts) == 4 else None
        if times and t0 != baseline:
            raise StreamFormatError("baseline must be the same on every line")
        baseline = t0
        times.append(t)
    if scale is None:
        raise StreamFormatError("sidecar lists no queries")
    answers = [int(a) for a in meta["answers"].split(",")] if meta.get("answers") else []
    return ReductionOutput(seq, times, scale, StatKind.parse(meta.get("stat", "triangles")),
                           baseline, int(meta.get("sign", 1)), meta.get("relation", "event"), answers)


def write_sidecar(out: ReductionOutput, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_sidecar(out))


def read_sidecar(path, seq: UpdateSequence) -> ReductionOutput:
    with open(path, encoding="utf-8") as fh:
        return parse_sidecar(fh.read(), seq)
