"""Functional samples on a shared discrete grid.

Every curve in a sample is observed on the same abscissae, so a sample is
stored as one dense ``(n, T)`` array. Arrays handed out by these types are
read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "FunctionalDataError",
    "DimensionMismatchError",
    "DataError",
    "Grid",
    "FunctionalSample",
    "DepthVector",
    "make_grid",
    "validate_sample",
    "grid_norm",
]


class FunctionalDataError(ValueError):
    """Base class for invalid functional data or arguments."""


class DimensionMismatchError(FunctionalDataError):
    """Curves that should share a grid do not."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class DataError(FunctionalDataError):
    """Non-finite or otherwise unusable values."""


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Grid:
    points: np.ndarray

    def __post_init__(self):
        pts = _frozen(self.points)
        if pts.ndim != 1 or pts.size == 0:
            raise FunctionalDataError("grid needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise DataError("grid points must be finite")
        if np.any(np.diff(pts) <= 0):
            raise FunctionalDataError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.size

    def __len__(self):
        return self.points.size

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash(self.points.tobytes())


@dataclass(frozen=True, eq=False)
class FunctionalSample:
    """``n`` curves observed on one grid.

    ``values`` has shape ``(n, T)``; ``labels``, when present, holds one
    boolean per curve, True for outliers.
    """

    grid: Grid
    values: np.ndarray
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.ndim != 2 or vals.shape[0] == 0:
            raise FunctionalDataError("a sample needs at least one curve")
        if vals.shape[1] != self.grid.size:
            raise DimensionMismatchError(
                f"curves have {vals.shape[1]} values, grid has {self.grid.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise DataError("sample contains non-finite values")
        object.__setattr__(self, "values", vals)
        if self.labels is not None:
            labels = np.array(self.labels, dtype=bool)
            if labels.shape != (vals.shape[0],):
                raise DimensionMismatchError(
                    f"{labels.size} labels for {vals.shape[0]} curves"
                )
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, i):
        return self.values[i]

    def check_curve(self, x) -> np.ndarray:
        """Return ``x`` as a float array after checking it lives on this grid."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.grid.size,):
            raise DimensionMismatchError(
                f"curve has shape {x.shape}, grid has {self.grid.size} points"
            )
        if not np.all(np.isfinite(x)):
            raise DataError("curve contains non-finite values")
        return x


@dataclass(frozen=True, eq=False)
class DepthVector:
    method: str
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    def __len__(self):
        return self.values.size


def make_grid(T: int) -> Grid:
    """Grid ``[1/T, 2/T, ..., 1]``.

    >>> make_grid(4).points
    array([0.25, 0.5 , 0.75, 1.  ])
    """
    if isinstance(T, bool) or int(T) != T or T < 1:
        raise FunctionalDataError(f"grid size must be a positive integer, got {T!r}")
    T = int(T)
    return Grid(np.arange(1, T + 1) / T)


def validate_sample(grid: Grid, rows: Sequence[Sequence[float]], labels=None) -> FunctionalSample:
    """Build a sample from raw rows, rejecting ragged or non-finite input."""
    if len(rows) == 0:
        raise FunctionalDataError("no curves given")
    for i, row in enumerate(rows):
        if len(row) != grid.size:
            raise DimensionMismatchError(
                f"row {i} has {len(row)} values, expected {grid.size}", row=i
            )
    try:
        values = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DataError(f"non-numeric value in sample: {exc}") from None
    bad = ~np.isfinite(values)
    if bad.any():
        i, k = np.argwhere(bad)[0]
        raise DataError(f"row {i} has non-finite value at grid index {k}")
    return FunctionalSample(grid, values, labels)


def grid_norm(a) -> float:
    """Euclidean norm of the curve values (no quadrature weights)."""
    # hypot rescales internally, so subnormal or huge values neither
    # underflow to zero nor overflow.
    return math.hypot(*np.asarray(a, dtype=float).ravel().tolist())
