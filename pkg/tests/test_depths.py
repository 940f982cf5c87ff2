import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from funcdepth.core import DimensionMismatchError, FunctionalDataError, FunctionalSample, make_grid
from funcdepth.depths import (
    BandwidthError,
    DepthMethod,
    band_depth,
    band_fraction,
    compute_depths,
    dominates,
    functional_majority_depth,
    functional_spatial_depth,
    h_mode_depth,
    half_region_depth,
    hmode_bandwidth,
    in_band,
    modified_band_depth,
)

from conftest import constants
from naive import (
    naive_band_depth,
    naive_half_region_depth,
    naive_modified_band_depth,
    naive_spatial_depth,
)


def const(c, T=3):
    return np.full(T, float(c))


# -- dominates ----------------------------------------------------------------


def test_dominates():
    a = np.array([0.3, 1.0])
    assert dominates(a, a)
    assert dominates(const(2, 2), const(1, 2))
    assert not dominates([0, 2], [1, 1])
    assert not dominates([1, 1], [0, 2])
    with pytest.raises(DimensionMismatchError):
        dominates([1, 2], [1, 2, 3])


# -- half region --------------------------------------------------------------


def test_half_region_examples(three_constants):
    assert half_region_depth(const(1), three_constants) == 2 / 3
    assert half_region_depth(const(0), three_constants) == 1 / 3
    same = FunctionalSample(make_grid(3), np.tile([0.1, 0.7, 0.2], (5, 1)))
    assert half_region_depth([0.1, 0.7, 0.2], same) == 1.0


def test_grid_mismatch(three_constants):
    for f in (half_region_depth, functional_majority_depth, functional_spatial_depth):
        with pytest.raises(DimensionMismatchError):
            f([1.0, 2.0], three_constants)


# -- majority -----------------------------------------------------------------


def test_majority_examples():
    s = constants([0, 1, 2, 3])
    assert functional_majority_depth(const(1), s) == 1.0
    assert functional_majority_depth(const(0), s) == 3 / 4


def test_majority_crossing_curve_is_zero():
    s = constants([0, 1, 2], T=2)
    # Starts below every curve and ends above every curve.
    assert functional_majority_depth([-5.0, 5.0], s) == 0.0


def test_majority_tie_counts_both_sides():
    # Two crossing curves: each dominates only itself, so every reference
    # has masses 1/2 and 1/2 and both of its half regions are majority
    # regions. [0, 1] lies in the upper region of itself but in neither
    # region of [1, 0]; a constant 2 lies above both references.
    s = FunctionalSample(make_grid(2), [[0.0, 1.0], [1.0, 0.0]])
    assert functional_majority_depth([0.0, 1.0], s) == 0.5
    assert functional_majority_depth([2.0, 2.0], s) == 1.0
    assert functional_majority_depth([-1.0, -1.0], s) == 1.0


# -- bands --------------------------------------------------------------------


def test_band_membership():
    assert in_band(const(1), [const(0), const(2)])
    assert band_fraction(const(1), [const(0), const(2)]) == 1.0
    assert not in_band([0, 3], [[0, 0], [2, 2]])
    assert band_fraction([0, 3], [[0, 0], [2, 2]]) == 0.5
    assert in_band(const(2), [const(0), const(2)])
    with pytest.raises(FunctionalDataError):
        in_band(const(1), [const(0)])
    with pytest.raises(DimensionMismatchError):
        in_band([1, 1], [const(0), const(2)])


def test_band_depth_examples(three_constants):
    assert band_depth(const(1), three_constants, J=2) == 1.0
    assert band_depth(const(0), three_constants, J=3) == 5 / 3
    for J in (2, 3):
        assert band_depth(const(5), three_constants, J=J) == 0.0
    with pytest.raises(FunctionalDataError):
        band_depth(const(1), three_constants, J=4)


def test_band_depth_multiword_grid(rng):
    # T > 64 exercises masks spanning several machine words.
    vals = rng.integers(-2, 3, size=(6, 130)).astype(float)
    s = FunctionalSample(make_grid(130), vals)
    x = np.median(vals, axis=0)
    assert band_depth(x, s, J=3) == naive_band_depth(list(x), vals.tolist(), 3)


def test_modified_band_depth_examples(three_constants):
    assert modified_band_depth(const(1), three_constants, j=2) == 1.0
    assert modified_band_depth(const(0), three_constants, j=2) == 2 / 3
    pair = FunctionalSample(make_grid(2), [[0, 0], [2, 2]])
    assert modified_band_depth([0, 3], pair, j=2) == 0.5
    with pytest.raises(FunctionalDataError):
        modified_band_depth(const(1), three_constants, j=4)


# -- spatial ------------------------------------------------------------------


def test_spatial_examples():
    x = np.array([0.3, -1.0, 2.0])
    c = np.array([1.0, 0.5, -0.25])
    assert functional_spatial_depth(x, FunctionalSample(make_grid(3), [x - c, x + c])) == 1.0
    pair = constants([0, 2])
    assert functional_spatial_depth(const(0), pair) == 0.5
    assert functional_spatial_depth(const(1), pair) == 1.0


def test_spatial_three_constants(three_constants):
    # Hand derivation: x = 0 sees signs {0, -e, -e} with e a unit vector, so
    # the averaged sign has norm 2/3.
    d = compute_depths(three_constants, "fsd").values
    assert d[1] == 1.0
    assert d[0] == pytest.approx(1 / 3, abs=1e-15)
    assert d[2] == pytest.approx(1 / 3, abs=1e-15)


# -- h-mode -------------------------------------------------------------------


def test_hmode_identical_curves():
    s = FunctionalSample(make_grid(3), np.tile([1.0, 2.0, 3.0], (4, 1)))
    assert h_mode_depth([1.0, 2.0, 3.0], s, bandwidth=0.7) == 1.0
    with pytest.raises(BandwidthError):
        h_mode_depth([1.0, 2.0, 3.0], s)


@pytest.mark.parametrize("d, h, T", [(1.0, 1.0, 3), (0.5, 2.0, 30), (2.0, 0.3, 4)])
def test_hmode_two_point_formula(d, h, T):
    s = constants([0, d], T=T)
    expected = (1 + math.exp(-((d * math.sqrt(T) / h) ** 2) / 2)) / 2
    assert h_mode_depth(const(0, T), s, bandwidth=h) == pytest.approx(expected, rel=1e-14)


def test_hmode_vanishes_far_away(three_constants):
    depths = [h_mode_depth(const(c), three_constants, bandwidth=1.0) for c in (3, 10, 100, 1e4)]
    assert all(a >= b for a, b in zip(depths, depths[1:]))
    assert depths[-1] == 0.0


def test_hmode_quantile_bandwidth():
    s = constants([0, 1, 2, 4], T=1)
    # Pairwise distances 1, 1, 2, 2, 3, 4; linear-interpolated 15% quantile.
    assert hmode_bandwidth(s.values) == pytest.approx(1.0)
    assert hmode_bandwidth(s.values, 0.5) == pytest.approx(2.0)


def test_bad_bandwidth():
    with pytest.raises(BandwidthError):
        DepthMethod("hmode", bandwidth=0.0)
    with pytest.raises(BandwidthError):
        h_mode_depth(const(0), constants([0, 1]), bandwidth=-1.0)


# -- batch --------------------------------------------------------------------


def test_compute_depths_examples(three_constants):
    assert compute_depths(three_constants, "hrd").values.tolist() == [1 / 3, 2 / 3, 1 / 3]
    assert compute_depths(three_constants, DepthMethod("mbd", mbd_order=2)).values.tolist() == [
        2 / 3, 1.0, 2 / 3]
    single = FunctionalSample(make_grid(5), [[1, 2, 3, 4, 5]])
    assert compute_depths(single, "fsd").values.tolist() == [1.0]


def test_depth_method_validation():
    with pytest.raises(FunctionalDataError):
        DepthMethod("bd", band_order=1)
    with pytest.raises(ValueError):
        DepthMethod("tukey")


# -- properties ---------------------------------------------------------------

SINGLE = {
    "hrd": lambda x, s, m: half_region_depth(x, s),
    "fmj": lambda x, s, m: functional_majority_depth(x, s),
    "bd": lambda x, s, m: band_depth(x, s, m.band_order),
    "mbd": lambda x, s, m: modified_band_depth(x, s, m.mbd_order),
    "fsd": lambda x, s, m: functional_spatial_depth(x, s),
    "hmode": lambda x, s, m: h_mode_depth(x, s, m.bandwidth),
}


@st.composite
def small_samples(draw, max_n=8, max_T=5, lo=-3, hi=3, min_n=1):
    n = draw(st.integers(min_n, max_n))
    T = draw(st.integers(1, max_T))
    vals = draw(arrays(np.int64, (n, T), elements=st.integers(lo, hi)))
    return FunctionalSample(make_grid(T), vals.astype(float))


@given(small_samples(min_n=3), st.sampled_from(sorted(SINGLE)))
def test_batch_matches_single(s, kind):
    method = DepthMethod(kind, band_order=3, mbd_order=2, bandwidth=1.5)
    batch = compute_depths(s, method).values
    assert batch.shape == (s.n,)
    for i in range(s.n):
        assert batch[i] == SINGLE[kind](s.values[i], s, method)


@given(small_samples(min_n=3))
def test_depth_ranges(s):
    for kind in ("hrd", "fmj", "mbd", "fsd"):
        d = compute_depths(s, kind).values
        assert np.all((d >= 0) & (d <= 1 + 1e-15)), kind
    bd = compute_depths(s, DepthMethod("bd", band_order=3)).values
    assert np.all((bd >= 0) & (bd <= 2))
    hm = compute_depths(s, DepthMethod("hmode", bandwidth=1.0)).values
    assert np.all((hm > 0) & (hm <= 1))


@given(small_samples(min_n=2), st.data())
def test_order_depths_invariant_under_increasing_maps(s, data):
    T = s.grid.size
    shifts = data.draw(arrays(np.int64, T, elements=st.integers(-50, 50)))
    scales = data.draw(arrays(np.int64, T, elements=st.integers(-3, 3)))
    cubic = data.draw(st.booleans())
    # Per-index strictly increasing maps that are exact on small integers.
    v = s.values ** 3 if cubic else s.values
    mapped = FunctionalSample(s.grid, v * np.exp2(scales) + shifts)
    for kind in ("hrd", "fmj", "bd", "mbd"):
        m = DepthMethod(kind, band_order=min(3, s.n), mbd_order=2)
        assert np.array_equal(compute_depths(s, m).values, compute_depths(mapped, m).values), kind


# Multiples of 1/64: sums and differences stay exact, so translating a
# sample cannot merge two distinct curves.
reals = st.integers(-640, 640).map(lambda k: k / 64)


@settings(max_examples=60)
@given(st.tuples(st.integers(1, 8), st.integers(1, 6)).flatmap(
    lambda shape: arrays(float, shape, elements=reals)),
       st.floats(0.01, 100), st.data())
def test_spatial_translation_scale_invariance(vals, a, data):
    T = vals.shape[1]
    b = data.draw(arrays(float, T, elements=reals))
    s = FunctionalSample(make_grid(T), vals)
    moved = FunctionalSample(make_grid(T), a * vals + b)
    d0 = compute_depths(s, "fsd").values
    d1 = compute_depths(moved, "fsd").values
    assert np.max(np.abs(d0 - d1)) <= 1e-12


@given(st.tuples(st.integers(1, 5), st.integers(1, 6)).flatmap(
    lambda shape: arrays(float, shape, elements=reals)), st.data())
def test_spatial_symmetric_sample_center_is_one(offsets, data):
    T = offsets.shape[1]
    m = data.draw(arrays(float, T, elements=reals))
    s = FunctionalSample(make_grid(T), np.vstack([m + offsets, m - offsets]))
    assert functional_spatial_depth(m, s) == 1.0


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_median_constant_is_deepest(n, rng):
    levels = np.sort(rng.choice(100, size=n, replace=False))
    s = constants(levels, T=4)
    mid = n // 2
    for m in (DepthMethod("hrd"), DepthMethod("bd", band_order=3), DepthMethod("mbd")):
        d = compute_depths(s, m).values
        assert np.argmax(d) == mid
        assert np.all(d[mid] > np.delete(d, mid))


@settings(max_examples=50)
@given(small_samples(min_n=2), st.floats(0.1, 5), st.floats(0, 10))
def test_hmode_decreases_moving_away(s, h, step):
    # Pushing the target up beyond every curve increases all distances.
    x = s.values.max(axis=0) + 1.0
    farther = x + step
    assert h_mode_depth(farther, s, bandwidth=h) <= h_mode_depth(x, s, bandwidth=h)


def test_band_oracle_equivalence_random(rng):
    """Subset enumeration vs. the naive definition on 1000 random samples."""
    for trial in range(1000):
        n = int(rng.integers(2, 9))
        T = int(rng.integers(1, 6))
        vals = rng.integers(-2, 3, size=(n, T)).astype(float)
        s = FunctionalSample(make_grid(T), vals)
        rows = vals.tolist()
        J = int(rng.integers(2, min(n, 4) + 1))
        j = int(rng.integers(2, n + 1))
        bd = compute_depths(s, DepthMethod("bd", band_order=J)).values
        mbd = compute_depths(s, DepthMethod("mbd", mbd_order=j)).values
        x_out = rng.integers(-3, 4, size=T).astype(float)
        for i in range(n):
            assert bd[i] == naive_band_depth(rows[i], rows, J), (trial, i)
            assert mbd[i] == naive_modified_band_depth(rows[i], rows, j), (trial, i)
        assert band_depth(x_out, s, J) == naive_band_depth(x_out.tolist(), rows, J)
        assert modified_band_depth(x_out, s, j) == naive_modified_band_depth(x_out.tolist(), rows, j)


@given(small_samples(min_n=1), st.data())
def test_hrd_and_fsd_match_naive(s, data):
    x = data.draw(arrays(np.int64, s.grid.size, elements=st.integers(-4, 4))).astype(float)
    rows = s.values.tolist()
    assert half_region_depth(x, s) == naive_half_region_depth(x.tolist(), rows)
    assert functional_spatial_depth(x, s) == pytest.approx(
        naive_spatial_depth(x.tolist(), rows), abs=1e-14)
