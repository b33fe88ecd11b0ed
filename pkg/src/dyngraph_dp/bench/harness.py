"""Repeated-trial error measurement and parameter sweeps, written as CSV."""

from __future__ import annotations

import io
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from ..exact_stats import StatKind, exact_trace, value_range
from ..graph_stream import UpdateSequence, validate
from ..mechanisms import build_mechanism
from ..noise import PrivacyParams
from .generators import random_sequence

CSV_HEADER = "trial,t,exact,released,abs_error"


@dataclass(frozen=True)
class RunConfig:
    mech: str
    stat: StatKind
    eps: float = 1.0
    delta: float = 0.0
    beta: float = 0.05
    deg_bound: Optional[float] = None
    block: Optional[int] = None
    trials: int = 1
    seed: int = 0
    noise: str = "auto"
    clamp: bool = False
    verbose: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        PrivacyParams(self.eps, self.delta)

    @property
    def params(self) -> PrivacyParams:
        return PrivacyParams(self.eps, self.delta)


@dataclass
class ExperimentRecord:
    trial: int
    released: list
    errors: np.ndarray
    runtime_ms: float

    @property
    def max_error(self) -> float:
        return float(self.errors.max()) if len(self.errors) else 0.0


@dataclass
class ExperimentResult:
    config: RunConfig
    exact: list
    records: list[ExperimentRecord] = field(default_factory=list)

    @property
    def max_errors(self) -> np.ndarray:
        return np.array([r.max_error for r in self.records])

    def quantile(self, level: Optional[float] = None) -> float:
        """Empirical (1 - beta)-quantile of the per-trial max error."""
        level = 1.0 - self.config.beta if level is None else level
        return float(np.quantile(self.max_errors, level, method="inverted_cdf"))


def trial_seed(base_seed: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed, trial])


def _run_trial(cfg: RunConfig, seq: UpdateSequence, exact: list, trial: int) -> ExperimentRecord:
    mech = build_mechanism(cfg.mech, cfg.stat, seq.num_nodes, seq.horizon, cfg.params,
                           trial_seed(cfg.seed, trial), cfg.noise, cfg.deg_bound, cfg.block, cfg.beta)
    lo, hi = value_range(cfg.stat, seq.num_nodes)
    start = time.perf_counter()
    released, errors = [], np.empty(seq.horizon)
    for i, upd in enumerate(seq.updates):
        out = mech.step(upd)
        if cfg.clamp:
            out = np.clip(out, lo, hi) if cfg.stat.is_vector else float(min(max(out, lo), hi))
        released.append(out)
        errors[i] = np.max(np.abs(np.asarray(out, dtype=float) - np.asarray(exact[i], dtype=float)))
    return ExperimentRecord(trial, released, errors, (time.perf_counter() - start) * 1e3)


def run_experiment(cfg: RunConfig, seq: UpdateSequence) -> ExperimentResult:
    violation = validate(seq)
    if violation is not None:
        raise ValueError(f"invalid sequence: {violation}")
    exact = exact_trace(cfg.stat, seq)
    result = ExperimentResult(cfg, exact)
    trials = range(1, cfg.trials + 1)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            result.records = list(pool.map(_run_trial, itertools.repeat(cfg), itertools.repeat(seq),
                                           itertools.repeat(exact), trials))
    else:
        result.records = [_run_trial(cfg, seq, exact, k) for k in trials]
    return result


def _fmt(value) -> str:
    return repr(float(value))


def _fmt_cell(value, verbose: bool) -> str:
    if np.ndim(value) == 0:
        return _fmt(value)
    if not verbose:
        return "-"
    return ";".join(_fmt(x) for x in np.asarray(value).reshape(-1))


def format_csv(result: ExperimentResult) -> str:
    """Per-(trial, t) rows then '#' summary lines; runtimes are left out so the
    file depends only on the configuration and seed."""
    cfg = result.config
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for rec in result.records:
        for t, (ex, rel, err) in enumerate(zip(result.exact, rec.released, rec.errors), start=1):
            buf.write(f"{rec.trial},{t},{_fmt_cell(ex, cfg.verbose)},{_fmt_cell(rel, cfg.verbose)},{_fmt(err)}\n")
    buf.write(f"# mech={cfg.mech} stat={cfg.stat} eps={cfg.eps!r} delta={cfg.delta!r} "
              f"noise={cfg.noise} trials={cfg.trials} seed={cfg.seed}\n")
    for rec in result.records:
        buf.write(f"# trial={rec.trial} max_error={_fmt(rec.max_error)}\n")
    buf.write(f"# quantile={1.0 - cfg.beta!r} max_error_quantile={_fmt(result.quantile())}\n")
    return buf.getvalue()


def parse_csv(text: str) -> dict[int, list[tuple[int, str, str, float]]]:
    """Rows grouped by trial: (t, exact, released, abs_error)."""
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("not an experiment CSV")
    out: dict[int, list] = {}
    for line in lines[1:]:
        if line.startswith("#") or not line:
            continue
        trial, t, ex, rel, err = line.split(",")
        out.setdefault(int(trial), []).append((int(t), ex, rel, float(err)))
    return out


def parse_summary(text: str) -> dict[str, float]:
    """Per-trial max errors keyed 'trial=k' plus 'max_error_quantile'."""
    out = {}
    for line in text.splitlines():
        if not line.startswith("# "):
            continue
        fields = dict(tok.partition("=")[::2] for tok in line[2:].split())
        if "trial" in fields and "max_error" in fields:
            out[f"trial={fields['trial']}"] = float(fields["max_error"])
        if "max_error_quantile" in fields:
            out["max_error_quantile"] = float(fields["max_error_quantile"])
    return out


SWEEP_HEADER = "T,N,D,eps,delta,trials,quantile,max_error_quantile,mean_max_error"


@dataclass(frozen=True)
class SweepPoint:
    horizon: int
    num_nodes: int
    deg_bound: Optional[int]
    eps: float
    quantile: float
    mean_max_error: float


def sweep(cfg: RunConfig, horizons: Sequence[int], nodes: Sequence[int], deg_bounds: Sequence[Optional[int]],
          epsilons: Sequence[float], model: Optional[str] = None, seq_seed: int = 0) -> list[SweepPoint]:
    """Run :func:`run_experiment` at every grid point.

    Each point draws its stream from ``model`` (default ``capped:D`` when a
    degree bound is given, else ``uniform``) with ``seq_seed``; the mechanism
    seeds are shared across points so epsilon sweeps rescale the same noise.
    """
    grid = list(itertools.product(horizons, nodes, deg_bounds, epsilons))
    if not grid:
        raise ValueError("empty sweep grid")
    points = []
    for horizon, n, dbound, eps in grid:
        spec = model or (f"capped:{dbound}" if dbound else "uniform")
        seq = random_sequence(n, horizon, spec, seq_seed)
        point_cfg = replace(cfg, eps=eps, deg_bound=dbound if dbound else cfg.deg_bound)
        res = run_experiment(point_cfg, seq)
        points.append(SweepPoint(horizon, n, dbound, eps, res.quantile(), float(res.max_errors.mean())))
    return points


def format_sweep(cfg: RunConfig, points: Sequence[SweepPoint]) -> str:
    lines = [SWEEP_HEADER]
    for p in points:
        d = "" if p.deg_bound is None else str(p.deg_bound)
        lines.append(f"{p.horizon},{p.num_nodes},{d},{p.eps!r},{cfg.delta!r},{cfg.trials},"
                     f"{1.0 - cfg.beta!r},{_fmt(p.quantile)},{_fmt(p.mean_max_error)}")
    return "\n".join(lines) + "\n"


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(xs, dtype=float)), np.log(np.asarray(ys, dtype=float)), 1)[0])
