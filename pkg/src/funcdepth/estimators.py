"""Location estimators: depth-based trimmed mean and the plain mean."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DepthVector, DimensionMismatchError, FunctionalDataError, FunctionalSample

__all__ = ["TrimSpec", "depth_order", "depth_trimmed_mean", "untrimmed_mean"]


@dataclass(frozen=True)
class TrimSpec:
    alpha: float = 0.2

    def __post_init__(self):
        if not 0 <= self.alpha < 1:
            raise FunctionalDataError(f"alpha must lie in [0, 1), got {self.alpha}")

    def n_trimmed(self, n: int) -> int:
        # Integer part of n * alpha. The tiny slack keeps e.g. 50 * 0.2 (and
        # 3 * (1/3)) from being floored one short by binary rounding.
        return int(math.floor(n * self.alpha + 1e-9))

    def n_kept(self, n: int) -> int:
        kept = n - self.n_trimmed(n)
        if kept < 1:
            raise FunctionalDataError(f"alpha={self.alpha} leaves no curves out of {n}")
        return kept


def depth_order(depths) -> np.ndarray:
    """Indices from deepest to least deep; equal depths keep input order."""
    depths = np.asarray(depths, dtype=float)
    return np.argsort(-depths, kind="stable")


def depth_trimmed_mean(S: FunctionalSample, d, spec=TrimSpec()) -> np.ndarray:
    """Pointwise mean of the ``n - [n*alpha]`` deepest curves of ``S``."""
    if not isinstance(spec, TrimSpec):
        spec = TrimSpec(float(spec))
    values = d.values if isinstance(d, DepthVector) else np.asarray(d, dtype=float)
    if values.shape != (S.n,):
        raise DimensionMismatchError(f"{values.size} depths for {S.n} curves")
    keep = depth_order(values)[: spec.n_kept(S.n)]
    if keep.size == S.n:
        return untrimmed_mean(S)
    return S.values[np.sort(keep)].mean(axis=0)


def untrimmed_mean(S: FunctionalSample) -> np.ndarray:
    return S.values.mean(axis=0)
