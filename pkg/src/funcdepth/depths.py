"""Sample depths for functional data.

Each public depth takes a target curve and a reference sample. The
``*_batch`` kernels depth a whole block of targets against one reference
array at once; ``compute_depths`` uses them to depth every curve of a sample
against that same sample.

All order comparisons are non-strict, and a target that belongs to the
sample is compared with itself like any other member.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Union

import numba
import numpy as np

from .core import (
    DepthVector,
    DimensionMismatchError,
    FunctionalDataError,
    FunctionalSample,
)

__all__ = [
    "BandwidthError",
    "DepthKind",
    "DepthMethod",
    "dominates",
    "half_region_depth",
    "functional_majority_depth",
    "in_band",
    "band_fraction",
    "band_depth",
    "modified_band_depth",
    "functional_spatial_depth",
    "spatial_sign",
    "h_mode_depth",
    "hmode_bandwidth",
    "compute_depths",
]

class BandwidthError(FunctionalDataError):
    """The h-mode bandwidth came out non-positive."""


class DepthKind(str, enum.Enum):
    HRD = "hrd"
    FMJ = "fmj"
    BD = "bd"
    MBD = "mbd"
    FSD = "fsd"
    HMODE = "hmode"


@dataclass(frozen=True)
class DepthMethod:
    """A depth together with its tuning constants.

    ``bandwidth`` is either ``"quantile"`` (h is the ``bandwidth_quantile``
    quantile of the pairwise distances within the reference sample) or a
    fixed positive number.
    """

    kind: DepthKind
    band_order: int = 3
    mbd_order: int = 2
    bandwidth: Union[str, float] = "quantile"
    bandwidth_quantile: float = 0.15

    def __post_init__(self):
        object.__setattr__(self, "kind", DepthKind(self.kind))
        if self.band_order < 2 or self.mbd_order < 2:
            raise FunctionalDataError("band orders must be at least 2")
        if isinstance(self.bandwidth, str):
            if self.bandwidth != "quantile":
                raise FunctionalDataError(f"unknown bandwidth rule {self.bandwidth!r}")
        elif not self.bandwidth > 0:
            raise BandwidthError(f"bandwidth must be positive, got {self.bandwidth}")
        if not 0 <= self.bandwidth_quantile <= 1:
            raise FunctionalDataError("bandwidth_quantile must lie in [0, 1]")

    @property
    def name(self) -> str:
        return self.kind.value


def _as_curve(x, T):
    x = np.asarray(x, dtype=float)
    if x.shape != (T,):
        raise DimensionMismatchError(f"curve has shape {x.shape}, expected ({T},)")
    return x


def _target_and_ref(x, S):
    if isinstance(S, FunctionalSample):
        ref = S.values
        x = S.check_curve(x)
    else:
        ref = np.asarray(S, dtype=float)
        if ref.ndim != 2 or ref.shape[0] == 0:
            raise FunctionalDataError("reference sample must be a non-empty (n, T) array")
        x = _as_curve(x, ref.shape[1])
    return x[None, :], ref


def dominates(a, b) -> bool:
    """True when ``a(t) >= b(t)`` at every grid point."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"curves of shape {a.shape} and {b.shape}")
    return bool(np.all(a >= b))


# -- half region / majority ---------------------------------------------------


def _domination_counts(targets, ref):
    """Number of reference curves above and below each target, everywhere."""
    above = np.all(ref[None, :, :] >= targets[:, None, :], axis=2).sum(axis=1)
    below = np.all(ref[None, :, :] <= targets[:, None, :], axis=2).sum(axis=1)
    return above, below


def half_region_depth_batch(targets, ref):
    above, below = _domination_counts(targets, ref)
    return np.minimum(above, below) / ref.shape[0]


def half_region_depth(x, S) -> float:
    """Smaller of the sample fractions lying above and below ``x``.

    >>> half_region_depth([1.0], [[0.0], [1.0], [2.0]])
    0.6666666666666666
    """
    return float(half_region_depth_batch(*_target_and_ref(x, S))[0])


def functional_majority_depth_batch(targets, ref):
    n = ref.shape[0]
    upper_mass, lower_mass = _domination_counts(ref, ref)
    # On a tie both half regions count as majority regions.
    upper_major = upper_mass >= lower_mass
    lower_major = lower_mass >= upper_mass
    x_above = np.all(targets[:, None, :] >= ref[None, :, :], axis=2)
    x_below = np.all(targets[:, None, :] <= ref[None, :, :], axis=2)
    inside = (x_above & upper_major) | (x_below & lower_major)
    return inside.sum(axis=1) / n


def functional_majority_depth(x, S) -> float:
    """Fraction of sample curves whose majority half region contains ``x``."""
    return float(functional_majority_depth_batch(*_target_and_ref(x, S))[0])


# -- bands --------------------------------------------------------------------


def _band_tuple(x, curves):
    x = np.asarray(x, dtype=float)
    curves = np.asarray(curves, dtype=float)
    if curves.ndim != 2 or curves.shape[0] < 2:
        raise FunctionalDataError("a band needs at least two curves")
    if curves.shape[1:] != x.shape:
        raise DimensionMismatchError("band curves and target are on different grids")
    lo = curves.min(axis=0)
    hi = curves.max(axis=0)
    return (lo <= x) & (x <= hi)


def in_band(x, curves) -> bool:
    """True when ``x`` lies between the envelopes of ``curves`` everywhere."""
    return bool(np.all(_band_tuple(x, curves)))


def band_fraction(x, curves) -> float:
    """Fraction of grid points at which ``x`` lies inside the band."""
    return float(np.mean(_band_tuple(x, curves)))


def _pack(mask):
    """Pack a boolean (..., T) array into uint64 words along the last axis."""
    T = mask.shape[-1]
    n_words = -(-T // 64)
    packed = np.packbits(mask, axis=-1, bitorder="little")
    pad = n_words * 8 - packed.shape[-1]
    if pad:
        packed = np.concatenate(
            [packed, np.zeros(packed.shape[:-1] + (pad,), dtype=np.uint8)], axis=-1
        )
    return np.ascontiguousarray(packed).view(np.uint64)


@numba.njit(cache=True, nogil=True)
def _count_covering_subsets(ge, le, full, j):
    # Walks the (j-1)-prefixes of the j-subsets of range(n) in lexicographic
    # order, keeping the OR of the first p members' masks at level p so a
    # step only redoes the levels whose index changed. The last member is
    # scanned in a tight inner loop.
    m, n, n_words = ge.shape
    counts = np.zeros(m, dtype=np.int64)
    head = j - 1
    idx = np.empty(j, dtype=np.int64)
    acc_ge = np.zeros((j, n_words), dtype=np.uint64)
    acc_le = np.zeros((j, n_words), dtype=np.uint64)
    for a in range(m):
        total = 0
        for p in range(head):
            idx[p] = p
        p = 0
        while True:
            for level in range(p, head):
                for w in range(n_words):
                    acc_ge[level + 1, w] = acc_ge[level, w] | ge[a, idx[level], w]
                    acc_le[level + 1, w] = acc_le[level, w] | le[a, idx[level], w]
            start = idx[head - 1] + 1 if head > 0 else 0
            for k in range(start, n):
                covered = True
                for w in range(n_words):
                    if ((acc_ge[head, w] | ge[a, k, w]) != full[w]
                            or (acc_le[head, w] | le[a, k, w]) != full[w]):
                        covered = False
                        break
                if covered:
                    total += 1
            p = head - 1
            while p >= 0 and idx[p] == n - j + p:
                p -= 1
            if p < 0:
                break
            idx[p] += 1
            for r in range(p + 1, head):
                idx[r] = idx[r - 1] + 1
        counts[a] = total
    return counts


def _band_containment_counts(targets, ref, j):
    """For each target, the number of ``j``-subsets of ``ref`` whose band holds it.

    Every subset is enumerated. Per target, reference curve ``i`` is reduced
    to two bit masks over the grid (where it is >= and <= the target); a
    subset contains the target iff the OR of each mask over its members
    covers the whole grid.
    """
    n, T = ref.shape
    if j > n:
        raise FunctionalDataError(f"band order {j} exceeds sample size {n}")
    ge = _pack(ref[None, :, :] >= targets[:, None, :])
    le = _pack(ref[None, :, :] <= targets[:, None, :])
    full = _pack(np.ones((1, T), dtype=bool))[0]
    return _count_covering_subsets(ge, le, full, j)


def band_depth_batch(targets, ref, J=3):
    n = ref.shape[0]
    if not 2 <= J <= n:
        raise FunctionalDataError(f"band order J={J} needs 2 <= J <= n={n}")
    totals = [Fraction(0)] * targets.shape[0]
    for j in range(2, J + 1):
        counts = _band_containment_counts(targets, ref, j)
        c = comb(n, j)
        totals = [acc + Fraction(int(k), c) for acc, k in zip(totals, counts)]
    return np.array([float(v) for v in totals])


def band_depth(x, S, J: int = 3) -> float:
    """Band depth summed over band orders ``2..J``.

    >>> band_depth([0.0], [[0.0], [1.0], [2.0]], J=3)
    1.6666666666666667
    """
    return float(band_depth_batch(*_target_and_ref(x, S), J=J)[0])


def modified_band_depth_batch(targets, ref, j=2):
    # At each grid point, a j-subset misses the target iff all members lie
    # strictly below it or all lie strictly above it. Summing the hits over
    # the grid counts (subset, point) containments exactly.
    n, T = ref.shape
    if not 2 <= j <= n:
        raise FunctionalDataError(f"band order j={j} needs 2 <= j <= n={n}")
    strictly_below = (ref[None, :, :] < targets[:, None, :]).sum(axis=1)
    strictly_above = (ref[None, :, :] > targets[:, None, :]).sum(axis=1)
    table = [comb(k, j) for k in range(n + 1)]
    dtype = np.int64 if comb(n, j) * T < 2**62 else object
    table = np.array(table, dtype=dtype)
    hits = comb(n, j) - table[strictly_below] - table[strictly_above]
    totals = hits.sum(axis=1)
    denom = T * comb(n, j)
    return np.array([float(Fraction(int(h), denom)) for h in totals])


def modified_band_depth(x, S, j: int = 2) -> float:
    """Mean over ``j``-subsets of the grid fraction where ``x`` is in the band."""
    return float(modified_band_depth_batch(*_target_and_ref(x, S), j=j)[0])


# -- spatial ------------------------------------------------------------------


def spatial_sign(v):
    """``v / ||v||``, with the zero curve mapped to itself."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    return v / norm if norm > 0 else np.zeros_like(v)


def functional_spatial_depth_batch(targets, ref):
    diffs = targets[:, None, :] - ref[None, :, :]
    norms = np.linalg.norm(diffs, axis=2, keepdims=True)
    signs = np.divide(diffs, norms, out=np.zeros_like(diffs), where=norms > 0)
    mean_sign = _compensated_sum(signs) / ref.shape[0]
    return 1.0 - np.linalg.norm(mean_sign, axis=1)


def _compensated_sum(a):
    """Neumaier-compensated sum over axis 1.

    Signs from a sample symmetric about the target then cancel to well
    below rounding level of the final ``1 - norm``.
    """
    total = np.zeros((a.shape[0], a.shape[2]))
    comp = np.zeros_like(total)
    for i in range(a.shape[1]):
        x = a[:, i, :]
        t = total + x
        big = np.abs(total) >= np.abs(x)
        comp += np.where(big, (total - t) + x, (x - t) + total)
        total = t
    return total + comp


def functional_spatial_depth(x, S) -> float:
    """One minus the norm of the average spatial sign of ``x - x_i``."""
    return float(functional_spatial_depth_batch(*_target_and_ref(x, S))[0])


# -- h-mode -------------------------------------------------------------------


def hmode_bandwidth(ref, quantile=0.15) -> float:
    """Quantile of the pairwise grid-norm distances within ``ref``."""
    ref = np.asarray(ref, dtype=float)
    n = ref.shape[0]
    if n < 2:
        raise BandwidthError("the quantile bandwidth needs at least two curves")
    iu = np.triu_indices(n, k=1)
    dist = np.linalg.norm(ref[:, None, :] - ref[None, :, :], axis=2)[iu]
    h = float(np.quantile(dist, quantile))
    if not h > 0:
        raise BandwidthError(f"bandwidth {h} is not positive (near-identical curves?)")
    return h


def _resolve_bandwidth(ref, bandwidth, quantile):
    if isinstance(bandwidth, str):
        if bandwidth != "quantile":
            raise FunctionalDataError(f"unknown bandwidth rule {bandwidth!r}")
        return hmode_bandwidth(ref, quantile)
    h = float(bandwidth)
    if not h > 0:
        raise BandwidthError(f"bandwidth must be positive, got {h}")
    return h


def h_mode_depth_batch(targets, ref, bandwidth="quantile", quantile=0.15):
    h = _resolve_bandwidth(ref, bandwidth, quantile)
    dist = np.linalg.norm(targets[:, None, :] - ref[None, :, :], axis=2)
    return np.exp(-0.5 * (dist / h) ** 2).mean(axis=1)


def h_mode_depth(x, S, bandwidth: Union[str, float] = "quantile", quantile: float = 0.15) -> float:
    """Gaussian-kernel h-mode depth.

    Distance based and sensitive to local modes, so it is not used as a
    ranking for the trimmed mean.
    """
    return float(h_mode_depth_batch(*_target_and_ref(x, S), bandwidth, quantile)[0])


# -- batch entry point --------------------------------------------------------


def depth_matrix(targets, ref, method: DepthMethod) -> np.ndarray:
    """Depth of each row of ``targets`` with respect to the rows of ``ref``."""
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    ref = np.asarray(ref, dtype=float)
    if targets.shape[1] != ref.shape[1]:
        raise DimensionMismatchError("targets and reference are on different grids")
    kind = method.kind
    if kind is DepthKind.HRD:
        return half_region_depth_batch(targets, ref)
    if kind is DepthKind.FMJ:
        return functional_majority_depth_batch(targets, ref)
    if kind is DepthKind.BD:
        return band_depth_batch(targets, ref, method.band_order)
    if kind is DepthKind.MBD:
        return modified_band_depth_batch(targets, ref, method.mbd_order)
    if kind is DepthKind.FSD:
        return functional_spatial_depth_batch(targets, ref)
    if kind is DepthKind.HMODE:
        return h_mode_depth_batch(targets, ref, method.bandwidth, method.bandwidth_quantile)
    raise FunctionalDataError(f"unknown depth {kind!r}")


def compute_depths(S: FunctionalSample, method: Union[DepthMethod, str]) -> DepthVector:
    """Depth of every curve of ``S`` with respect to ``S`` itself."""
    if not isinstance(method, DepthMethod):
        method = DepthMethod(method)
    return DepthVector(method.name, depth_matrix(S.values, S.values, method))
