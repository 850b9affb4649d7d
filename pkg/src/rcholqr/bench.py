"""Seeded multi-trial experiment harness with CSV/JSON reporting.

A trial re-draws the sketch operators from seed_i = mix_seed(master_seed, i)
and runs one factorization; the deterministic algorithm simply repeats.  A
trial SUCCEEDS when no Cholesky stage breaks down and the measured
orthogonality stays at or below the configured threshold; breakdowns are
recorded with their stage, quality misses as QUALITY_FAIL.  Summary averages
cover successful trials only.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
import time
from dataclasses import dataclass

import numpy as np

from . import generators, qr, sparse
from .bounds import CHOLQR2, MR, SR, BoundReport
from .errors import CholeskyBreakdown, ParamError
from .sketch import build_gaussian, build_multisketch, mix_seed

SUCCESS = "SUCCESS"
QUALITY_FAIL = "QUALITY_FAIL"

CSV_COLUMNS = ("trial", "seed", "outcome", "orthogonality", "residual",
               "wall_time_s")


@dataclass
class ExperimentConfig:
    generator: generators.GeneratorSpec | str  # spec or Matrix Market path
    algorithm: str
    s1: int = 0  # CountSketch rows for mr; the Gaussian size for sr
    s2: int = 0
    e1: float = 0.5
    p1: float = 0.6
    e2: float = 0.5
    p2: float = 0.4
    trials: int = 30
    master_seed: int = 0
    success_orth_threshold: float = 1e-12


@dataclass
class ExperimentRecord:
    trial: int
    seed: int
    outcome: str
    orthogonality: float | None
    residual: float | None
    wall_time_s: float


@dataclass
class ExperimentSummary:
    trials: int
    successes: int
    mean_orthogonality: float | None
    mean_residual: float | None
    mean_wall_time_s: float | None


def load_input(config: ExperimentConfig) -> np.ndarray:
    source = config.generator
    if isinstance(source, (str, os.PathLike)):
        return sparse.to_dense(sparse.read_matrix_market(source))
    made = generators.generate(source)
    if isinstance(made, sparse.CSRMatrix):
        return sparse.to_dense(made)
    return made


def _validate(config: ExperimentConfig, m: int, n: int) -> None:
    if config.trials < 1:
        raise ParamError("need trials >= 1")
    if config.algorithm == MR:
        if not n <= config.s2 <= config.s1 <= m:
            raise ParamError(
                f"need n <= s2 <= s1 <= m, got s1={config.s1}, s2={config.s2}")
    elif config.algorithm == SR:
        if not n <= config.s1 <= m:
            raise ParamError(f"need n <= s <= m, got s={config.s1}")
    elif config.algorithm != CHOLQR2:
        raise ParamError(f"unknown algorithm {config.algorithm!r}")


def _run_trial(x: np.ndarray, config: ExperimentConfig, seed: int):
    if config.algorithm == MR:
        op = build_multisketch(config.s1, config.s2, x.shape[0], seed)
        return qr.mr_cholesky_qr2(x, op)
    if config.algorithm == SR:
        op = build_gaussian(config.s1, x.shape[0], seed)
        return qr.sr_cholesky_qr2(x, op)
    return qr.cholesky_qr2(x)


def run_experiment(config: ExperimentConfig,
                   x: np.ndarray | None = None,
                   ) -> tuple[list[ExperimentRecord], ExperimentSummary]:
    """Run the configured trials; returns per-trial records plus a summary.

    Pass ``x`` to reuse an already materialized input across configurations.
    """
    if x is None:
        x = load_input(config)
    _validate(config, x.shape[0], x.shape[1])
    records: list[ExperimentRecord] = []
    for trial in range(config.trials):
        seed = mix_seed(config.master_seed, trial)
        start = time.perf_counter()
        try:
            result = _run_trial(x, config, seed)
        except CholeskyBreakdown as err:
            elapsed = time.perf_counter() - start
            records.append(ExperimentRecord(
                trial, seed, f"BREAKDOWN({err.stage})", None, None, elapsed))
            continue
        elapsed = time.perf_counter() - start
        orth = result.diagnostics.orthogonality
        outcome = SUCCESS if orth <= config.success_orth_threshold else QUALITY_FAIL
        records.append(ExperimentRecord(
            trial, seed, outcome, orth, result.diagnostics.residual, elapsed))
    good = [r for r in records if r.outcome == SUCCESS]
    summary = ExperimentSummary(
        trials=config.trials,
        successes=len(good),
        mean_orthogonality=_mean([r.orthogonality for r in good]),
        mean_residual=_mean([r.residual for r in good]),
        mean_wall_time_s=_mean([r.wall_time_s for r in good]),
    )
    return records, summary


def _mean(values) -> float | None:
    return float(np.mean(values)) if values else None


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6e}"


def emit_csv(records: list[ExperimentRecord], path) -> None:
    """Header plus one row per trial; floats in 6-digit scientific notation."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([r.trial, r.seed, r.outcome,
                             _fmt(r.orthogonality), _fmt(r.residual),
                             _fmt(r.wall_time_s)])


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    value = float(value)
    return value if np.isfinite(value) else None  # inf: beyond measurement


def emit_json(report: BoundReport, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(_jsonable(dataclasses.asdict(report)), handle, indent=2)
        handle.write("\n")
