"""Integrated squared error and the Monte Carlo robustness benchmark."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import DimensionMismatchError, FunctionalDataError, Grid, make_grid
from .depths import DepthKind, DepthMethod, compute_depths
from .estimators import TrimSpec, depth_trimmed_mean, untrimmed_mean
from .simulation import MODEL_IDS, ModelSpec, generate_model, replication_rng, true_mean

__all__ = [
    "METHODS",
    "BenchmarkConfig",
    "ResultRow",
    "ResultTable",
    "ReplicationError",
    "ise",
    "run_replication",
    "run_benchmark",
]

log = logging.getLogger(__name__)

# Benchmark estimators; "mean" is the untrimmed baseline.
METHODS = ("hrd", "fmj", "bd", "mbd", "fsd", "mean")


class ReplicationError(RuntimeError):
    def __init__(self, model_id, replication, cause):
        super().__init__(f"model {model_id}, replication {replication} failed: {cause}")
        self.model_id = model_id
        self.replication = replication


def ise(estimate, grid: Grid) -> float:
    """Grid average of ``(estimate - 4t)**2``."""
    estimate = np.asarray(estimate, dtype=float)
    if estimate.shape != (grid.size,):
        raise DimensionMismatchError(
            f"estimate has shape {estimate.shape}, grid has {grid.size} points"
        )
    return float(np.mean((estimate - true_mean(grid.points)) ** 2))


@dataclass(frozen=True)
class BenchmarkConfig:
    master_seed: int = 0
    S: int = 1000
    n: int = 50
    T: int = 30
    q: float = 0.1
    alpha: float = 0.2
    K: float = 25.0
    models: Tuple[int, ...] = MODEL_IDS
    methods: Tuple[str, ...] = METHODS
    band_J: int = 3
    mbd_j: int = 2

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(int(m) for m in self.models))
        object.__setattr__(self, "methods", tuple(str(m).lower() for m in self.methods))
        if self.S < 1:
            raise FunctionalDataError("S must be at least 1")
        if not self.models:
            raise FunctionalDataError("no models requested")
        if not self.methods:
            raise FunctionalDataError("no methods requested")
        for m in self.models:
            if m not in MODEL_IDS:
                raise FunctionalDataError(f"unknown model {m}")
        for name in self.methods:
            if name not in METHODS:
                raise FunctionalDataError(f"unknown method {name!r}; choose from {METHODS}")
        TrimSpec(self.alpha).n_kept(self.n)
        for m in self.depth_methods().values():
            if m.kind is DepthKind.BD and m.band_order > self.n:
                raise FunctionalDataError(f"band_J={self.band_J} exceeds n={self.n}")
            if m.kind is DepthKind.MBD and m.mbd_order > self.n:
                raise FunctionalDataError(f"mbd_j={self.mbd_j} exceeds n={self.n}")

    def model_spec(self, model_id: int) -> ModelSpec:
        return ModelSpec(model_id, n=self.n, q=self.q, K=self.K, grid=make_grid(self.T))

    def depth_methods(self) -> Dict[str, DepthMethod]:
        return {
            name: DepthMethod(name, band_order=self.band_J, mbd_order=self.mbd_j)
            for name in self.methods
            if name != "mean"
        }


@dataclass(frozen=True)
class ResultRow:
    method: str
    model: int
    mean_ise: float
    se_ise: float
    S: int


@dataclass
class ResultTable:
    rows: List[ResultRow] = field(default_factory=list)

    def get(self, method: str, model: int) -> ResultRow:
        for row in self.rows:
            if row.method == method and row.model == model:
                return row
        raise KeyError((method, model))

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)


def run_replication(spec: ModelSpec, methods: Sequence[str], alpha: float,
                    rng: np.random.Generator, band_J: int = 3, mbd_j: int = 2,
                    sample=None) -> Dict[str, float]:
    """ISE of each estimator on one freshly generated sample.

    All methods share the same sample. Pass ``sample`` to skip generation.
    """
    if sample is None:
        sample = generate_model(spec, rng)
    trim = TrimSpec(alpha)
    out = {}
    for name in methods:
        if name == "mean":
            estimate = untrimmed_mean(sample)
        else:
            method = DepthMethod(name, band_order=band_J, mbd_order=mbd_j)
            estimate = depth_trimmed_mean(sample, compute_depths(sample, method), trim)
        out[name] = ise(estimate, sample.grid)
    return out


def _run_block(config: BenchmarkConfig, model_id: int, start: int, stop: int) -> np.ndarray:
    spec = config.model_spec(model_id)
    block = np.empty((stop - start, len(config.methods)))
    for r in range(start, stop):
        rng = replication_rng(config.master_seed, model_id, r)
        try:
            res = run_replication(spec, config.methods, config.alpha, rng,
                                  config.band_J, config.mbd_j)
        except Exception as exc:
            raise ReplicationError(model_id, r, exc) from exc
        block[r - start] = [res[name] for name in config.methods]
    return block


def _summarize(config, model_id, errors, rows):
    S = errors.shape[0]
    means = errors.mean(axis=0)
    ses = errors.std(axis=0, ddof=1) / np.sqrt(S) if S > 1 else np.zeros(len(config.methods))
    for k, name in enumerate(config.methods):
        rows.append(ResultRow(name, model_id, float(means[k]), float(ses[k]), S))


def run_benchmark(config: BenchmarkConfig, workers: Optional[int] = None,
                  block_size: int = 50, return_errors: bool = False):
    """Mean ISE and its standard error for every (method, model) pair.

    Replications are split into blocks that may run in worker processes;
    each replication draws from its own seeded stream and results are
    reassembled in replication order, so the table does not depend on
    ``workers``. Rows are ordered method-major.
    """
    if workers is None:
        workers = os.cpu_count() or 1
    tasks = [
        (m, start, min(start + block_size, config.S))
        for m in config.models
        for start in range(0, config.S, block_size)
    ]
    if workers <= 1:
        blocks = [_run_block(config, *task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_block, config, *task) for task in tasks]
            blocks = [f.result() for f in futures]

    errors = {m: [] for m in config.models}
    for (m, _, _), block in zip(tasks, blocks):
        errors[m].append(block)
    errors = {m: np.concatenate(b) for m, b in errors.items()}

    by_model = []
    for m in config.models:
        _summarize(config, m, errors[m], by_model)
        log.info("model %d done (%d replications)", m, config.S)
    order = {name: k for k, name in enumerate(config.methods)}
    table = ResultTable(sorted(by_model, key=lambda r: (order[r.method], config.models.index(r.model))))
    if return_errors:
        return table, errors
    return table
