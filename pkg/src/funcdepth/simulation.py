"""Gaussian-process curves and the six contamination models.

Every model shares the mean ``g(t) = 4t``. Models 0-2 add noise with
covariance ``exp(-0.45 |s - t|)``, Models 3-5 with ``exp(-(s - t)**2)``.

Random draws per curve happen in a fixed order: the contamination flag,
then the sign (Models 3-5, drawn even for clean curves), then the onset
time (Models 3-4), then the ``T`` standard normals of the noise. Normals
come from numpy's ``Generator.standard_normal`` (ziggurat on PCG64 output).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import FunctionalDataError, FunctionalSample, Grid, make_grid

__all__ = [
    "CholeskyError",
    "CovarianceKernel",
    "ModelSpec",
    "cholesky_factor",
    "gram_matrix",
    "gp_sample",
    "make_rng",
    "replication_rng",
    "generate_model",
    "true_mean",
    "MODEL_IDS",
]

MODEL_IDS = (0, 1, 2, 3, 4, 5)
JITTER = 1e-10


class CholeskyError(FunctionalDataError, np.linalg.LinAlgError):
    pass


class CovarianceKernel(str, enum.Enum):
    EXP_ABS = "exp_abs"
    SQ_EXP = "sq_exp"

    def __call__(self, s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        if self is CovarianceKernel.EXP_ABS:
            return np.exp(-0.45 * np.abs(t - s))
        return np.exp(-((s - t) ** 2))


@dataclass(frozen=True)
class ModelSpec:
    model_id: int
    n: int = 50
    q: float = 0.1
    K: float = 25.0
    l: float = 2 / 30
    grid: Grid = field(default_factory=lambda: make_grid(30))

    def __post_init__(self):
        if self.model_id not in MODEL_IDS:
            raise FunctionalDataError(f"unknown model {self.model_id!r}; expected 0-5")
        if self.n < 1:
            raise FunctionalDataError("n must be positive")
        if not 0 <= self.q <= 1:
            raise FunctionalDataError(f"q must lie in [0, 1], got {self.q}")
        if not 0 < self.l < 1:
            raise FunctionalDataError(f"peak width l must lie in (0, 1), got {self.l}")
        if not np.isfinite(self.K):
            raise FunctionalDataError("K must be finite")

    @property
    def kernel(self) -> CovarianceKernel:
        return CovarianceKernel.EXP_ABS if self.model_id <= 2 else CovarianceKernel.SQ_EXP


def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_seed_words(seed)))


def replication_rng(master_seed: int, model_id: int, replication: int) -> np.random.Generator:
    """Independent stream for one replication of one model."""
    words = _seed_words(master_seed) + [int(model_id), int(replication)]
    return np.random.default_rng(np.random.SeedSequence(words))


def _seed_words(seed):
    seed = int(seed) & (2**64 - 1)
    return [seed & 0xFFFFFFFF, seed >> 32]


def cholesky_factor(M) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T == M``.

    A matrix that fails to factor is retried once with ``1e-10`` added to
    the diagonal.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise FunctionalDataError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.allclose(M, M.T, rtol=0, atol=1e-12 * max(1.0, np.abs(M).max())):
        raise FunctionalDataError("matrix is not symmetric")
    try:
        return np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        pass
    try:
        return np.linalg.cholesky(M + JITTER * np.eye(M.shape[0]))
    except np.linalg.LinAlgError:
        raise CholeskyError("matrix is not positive definite, even after jitter") from None


def gram_matrix(grid: Grid, kernel: CovarianceKernel) -> np.ndarray:
    t = grid.points
    return CovarianceKernel(kernel)(t[:, None], t[None, :])


@lru_cache(maxsize=16)
def _factor(grid: Grid, kernel: CovarianceKernel) -> np.ndarray:
    L = cholesky_factor(gram_matrix(grid, kernel))
    L.setflags(write=False)
    return L


def gp_sample(grid: Grid, kernel: CovarianceKernel, rng: np.random.Generator) -> np.ndarray:
    """One zero-mean Gaussian-process path on ``grid``."""
    L = _factor(grid, CovarianceKernel(kernel))
    return L @ rng.standard_normal(grid.size)


def true_mean(t) -> np.ndarray:
    return 4.0 * np.asarray(t, dtype=float)


def generate_model(spec: ModelSpec, rng: np.random.Generator,
                   force_outliers: Optional[bool] = None, return_base: bool = False):
    """Draw ``spec.n`` labelled curves from the chosen contamination model.

    ``force_outliers`` pins every contamination flag (True or False) without
    changing the order of the random draws. With ``return_base`` the clean
    curves (mean plus noise, before any peak/jump/shift) are returned as well.
    """
    m = spec.model_id
    t = spec.grid.points
    T = t.size
    L = _factor(spec.grid, spec.kernel)
    g = true_mean(t)

    z = np.empty((spec.n, T))
    contaminated = np.zeros(spec.n, dtype=bool)
    signs = np.zeros(spec.n)
    onsets = np.full(spec.n, np.nan)
    for i in range(spec.n):
        if m != 0:
            contaminated[i] = rng.random() < spec.q
        if m >= 3:
            signs[i] = 1.0 if rng.random() < 0.5 else -1.0
        if m == 3:
            onsets[i] = rng.uniform(0.0, 1.0 - spec.l)
        elif m == 4:
            onsets[i] = rng.uniform(0.0, 1.0)
        z[i] = rng.standard_normal(T)
    if force_outliers is not None and m != 0:
        contaminated[:] = bool(force_outliers)

    noise = z @ L.T
    base = g + noise
    values = base.copy()
    if m == 1:
        values[contaminated] = (8.0 * t - 2.0) + noise[contaminated]
    elif m == 2:
        values[contaminated] = 4.0 * np.exp(t) + noise[contaminated]
    elif m >= 3:
        if m == 3:
            support = (onsets[:, None] <= t) & (t <= onsets[:, None] + spec.l)
        elif m == 4:
            support = onsets[:, None] <= t
        else:
            support = np.ones((spec.n, T), dtype=bool)
        jump = np.where(support, (contaminated * signs * spec.K)[:, None], 0.0)
        values = base + jump

    sample = FunctionalSample(spec.grid, values, contaminated)
    if return_base:
        return sample, base
    return sample
