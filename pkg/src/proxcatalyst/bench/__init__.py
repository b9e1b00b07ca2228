"""Benchmark harness: key=value configs, budgeted runs, trace CSVs."""

from .config import ConfigError, ExperimentConfig, load_config, parse_kv
from .runner import (BenchAbort, CSV_HEADER, Row, RunOutcome, build_problem,
                     compare_to_csv, run_experiment, rows_to_csv, write_csv)

__all__ = [
    "ConfigError", "ExperimentConfig", "load_config", "parse_kv",
    "BenchAbort", "CSV_HEADER", "Row", "RunOutcome", "build_problem",
    "compare_to_csv", "run_experiment", "rows_to_csv", "write_csv",
]
