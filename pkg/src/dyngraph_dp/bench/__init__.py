"""Experiment harness: stream generators, text formats, trial runner, CLI."""

from .generators import StreamModel, random_sequence
from .harness import (CSV_HEADER, ExperimentRecord, ExperimentResult, RunConfig, SweepPoint,
                      format_csv, format_sweep, loglog_slope, parse_csv, parse_summary,
                      run_experiment, sweep, trial_seed)
from .textio import (format_matrix, format_sidecar, parse_matrix, parse_sidecar, read_matrix,
                     read_sidecar, write_matrix, write_sidecar)

__all__ = [
    "CSV_HEADER", "ExperimentRecord", "ExperimentResult", "RunConfig", "StreamModel", "SweepPoint",
    "format_csv", "format_matrix", "format_sidecar", "format_sweep", "loglog_slope", "parse_csv",
    "parse_matrix", "parse_sidecar", "parse_summary", "random_sequence", "read_matrix",
    "read_sidecar", "run_experiment", "sweep", "trial_seed", "write_matrix", "write_sidecar",
]
