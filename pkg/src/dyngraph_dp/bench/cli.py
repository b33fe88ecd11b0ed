"""Command-line entry point: validate, run, sweep, reduce, verify-reduction, decode."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

import numpy as np

from ..exact_stats import StatKind
from ..graph_stream import StreamFormatError, read_sequence, validate, write_sequence
from ..mechanisms import MECHANISMS
from .. import reductions as red
from .generators import StreamModel, random_sequence
from .harness import RunConfig, format_csv, format_sweep, parse_csv, run_experiment, sweep
from .textio import read_matrix, read_sidecar, write_sidecar

REDUCTIONS = ("submatrix", "submatrix-bounded", "inner-product", "marginals", "marginals-od",
              "marginals-triangles", "marginals-edges")


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _add_mech_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stat", type=StatKind.parse, default=StatKind.parse("triangles"),
                   help="edges, triangles, high-degree:TAU, degree-list, degree-hist, matching, components")
    p.add_argument("--mech", choices=MECHANISMS, default="recompute")
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--deg-bound", type=float, default=None)
    p.add_argument("--block", type=int, default=None, help="override the recompute block size B")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", choices=("auto", "laplace", "gaussian", "none"), default="auto")
    p.add_argument("--clamp", action="store_true", help="clip releases to the statistic's range")
    p.add_argument("--verbose", action="store_true", help="dump vector releases per coordinate")
    p.add_argument("--jobs", type=int, default=1, help="parallel trial workers")
    p.add_argument("--out", default=None)


def _config(args) -> RunConfig:
    return RunConfig(args.mech, args.stat, args.eps, args.delta, args.beta, args.deg_bound, args.block,
                     args.trials, args.seed, args.noise, args.clamp, args.verbose, args.jobs)


def cmd_validate(args) -> int:
    seq = read_sequence(args.file)
    violation = validate(seq)
    if violation is None:
        print(f"valid N={seq.num_nodes} T={seq.horizon}")
        return 0
    print(f"invalid {violation}")
    return 1


def cmd_run(args) -> int:
    if args.input:
        seq = read_sequence(args.input)
    elif args.random:
        n, horizon = _int_list(args.random)
        seq = random_sequence(n, horizon, args.model, args.seq_seed)
    else:
        raise SystemExit("run needs --input FILE or --random N,T")
    result = run_experiment(_config(args), seq)
    _emit(format_csv(result), args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = _config(args)
    deg_bounds = _int_list(args.D) if args.D else [None]
    points = sweep(cfg, _int_list(args.T), _int_list(args.N), deg_bounds, _float_list(args.eps_grid),
                   args.model, args.seq_seed)
    _emit(format_sweep(cfg, points), args.out)
    return 0


def _query_rows(path: str) -> list[np.ndarray]:
    return list(read_matrix(path))


def build_reduction(args) -> red.ReductionOutput:
    kind = args.kind
    if kind in ("submatrix", "submatrix-bounded"):
        Y = read_matrix(args.Y)
        queries = list(zip(_query_rows(args.a), _query_rows(args.b)))
        block = args.block if kind == "submatrix-bounded" else None
        inst = red.SubmatrixInstance(Y, queries, args.w, block)
        out = red.submatrix_to_triangles_bounded(inst) if block else red.submatrix_to_triangles(inst)
    elif kind == "inner-product":
        y = read_matrix(args.Y).reshape(-1)
        inst = red.InnerProductInstance(y, _query_rows(args.q))
        out = red.innerproduct_to_f(inst, red.builtin_gadgets()[args.gadget])
    else:
        inst = red.MarginalsInstance(read_matrix(args.Y))
        if kind == "marginals":
            out = red.marginals_to_f(inst, red.convert_2edge_to_1edge(red.builtin_gadgets()[args.gadget]))
        elif kind == "marginals-od":
            out = red.output_determined_variant(inst, red.builtin_gadgets()[args.gadget])
        elif kind == "marginals-triangles":
            out = red.marginals_to_triangles(inst, args.w)
        else:
            out = red.marginals_to_edgecount(inst)
    if args.tau > 1:
        out = red.lift_reduction(out, args.tau)
    if args.pad_nodes or args.pad_steps:
        out = red.pad(out, max(args.pad_nodes or 0, out.seq.num_nodes),
                      max(args.pad_steps or 0, out.seq.horizon))
    return out


def cmd_reduce(args) -> int:
    out = build_reduction(args)
    write_sequence(out.seq, args.out)
    sidecar = args.queries or args.out + ".queries"
    write_sidecar(out, sidecar)
    print(f"wrote {args.out} (N={out.seq.num_nodes} T={out.seq.horizon}) and {sidecar}")
    return 0


def cmd_verify(args) -> int:
    seq = read_sequence(args.seq)
    out = read_sidecar(args.queries, seq)
    expected = _int_list(args.expected) if args.expected else None
    sibling = None
    if args.sibling:
        sibling = read_sidecar(args.sibling_queries or args.sibling + ".queries", read_sequence(args.sibling))
    report = red.verify_reduction(out, expected, sibling)
    print(("PASS " if report.ok else "FAIL ") + str(report))
    return 0 if report.ok else 1


def cmd_decode(args) -> int:
    out = read_sidecar(args.queries, read_sequence(args.seq))
    rows = parse_csv(open(args.released, encoding="utf-8").read())
    if args.trial not in rows:
        raise SystemExit(f"trial {args.trial} not in {args.released}")
    released = [float(rel) for _, _, rel, _ in rows[args.trial]]
    for m, ans in enumerate(red.decode_answers(released, out), start=1):
        print(f"{m} {ans!r}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dyngraph-dp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a stream file replays cleanly")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="measure a mechanism's error over repeated trials")
    p.add_argument("--input", help="stream file")
    p.add_argument("--random", help="N,T for a generated stream")
    p.add_argument("--model", default="uniform", type=StreamModel.parse,
                   help="uniform | capped:D | insert:p")
    p.add_argument("--seq-seed", type=int, default=0)
    _add_mech_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="error quantiles over a parameter grid")
    p.add_argument("--T", required=True, help="comma-separated horizons")
    p.add_argument("--N", required=True, help="comma-separated node counts")
    p.add_argument("--D", default="", help="comma-separated degree caps")
    p.add_argument("--eps-grid", required=True, help="comma-separated epsilons")
    p.add_argument("--model", default=None)
    p.add_argument("--seq-seed", type=int, default=0)
    _add_mech_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reduce", help="emit a reduction stream and its query-time sidecar")
    p.add_argument("kind", choices=REDUCTIONS)
    p.add_argument("--Y", required=True, help="matrix file (a 1 x n matrix for inner-product)")
    p.add_argument("--a", help="submatrix row-query file, one query per row")
    p.add_argument("--b", help="submatrix column-query file, one query per row")
    p.add_argument("--q", help="inner-product query file, one query per row")
    p.add_argument("--w", type=int, default=1)
    p.add_argument("--block", type=int, default=None)
    p.add_argument("--gadget", choices=("mm", "cc", "neg-d1"), default="mm")
    p.add_argument("--tau", type=int, default=1, help="lift a neg-d1 reduction to high-degree:tau")
    p.add_argument("--pad-nodes", type=int, default=None)
    p.add_argument("--pad-steps", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--queries", default=None, help="sidecar path (default OUT.queries)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify-reduction", help="replay a reduction and check its answers")
    p.add_argument("--seq", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--expected", default=None, help="comma-separated answers (default from sidecar)")
    p.add_argument("--sibling", default=None, help="stream built from a one-bit perturbation")
    p.add_argument("--sibling-queries", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decode", help="recover query answers from a run CSV")
    p.add_argument("--seq", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--released", required=True, help="CSV written by 'run'")
    p.add_argument("--trial", type=int, default=1)
    p.set_defaults(func=cmd_decode)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StreamFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
