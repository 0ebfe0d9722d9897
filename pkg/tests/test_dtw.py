import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtwmean.dtw import (
    WarpingPath,
    as_series,
    cost_of_path,
    count_paths,
    dtw,
    dtw_bruteforce,
    enumerate_paths,
    squared_dtw,
)
from dtwmean.errors import GuardError

from conftest import random_int_series

series = st.lists(st.integers(-3, 3), min_size=1, max_size=6).map(lambda v: np.array(v, dtype=float))
real_series = st.lists(
    st.floats(-100, 100, allow_nan=False, allow_infinity=False), min_size=1, max_size=12
).map(np.array)


def test_as_series_validation():
    assert as_series(3.0).shape == (1,)
    with pytest.raises(ValueError):
        as_series([])
    with pytest.raises(ValueError):
        as_series([1.0, np.nan])
    with pytest.raises(ValueError):
        as_series([[1.0, 2.0]])
    with pytest.raises(ValueError):
        as_series([1.0])[0] = 2.0


def test_warping_path_invariants():
    WarpingPath(((1, 1), (2, 1), (3, 2)), 3, 2)
    with pytest.raises(ValueError):
        WarpingPath(((1, 1), (3, 2)), 3, 2)
    with pytest.raises(ValueError):
        WarpingPath(((1, 1), (2, 1)), 3, 2)
    with pytest.raises(ValueError):
        WarpingPath(((2, 1), (3, 2)), 3, 2)


@pytest.mark.parametrize(
    "points, expected",
    [
        (((1, 1), (2, 1), (3, 2)), 1.0),
        (((1, 1), (2, 1), (3, 1), (3, 2)), 5.0),
    ],
)
def test_cost_of_path_hand_sums(points, expected):
    assert cost_of_path([1, 2, 3], [1, 3], WarpingPath(points, 3, 2)) == expected


def test_cost_of_path_diagonal_identity(rng):
    x = rng.standard_normal(7)
    diag = WarpingPath(tuple((i, i) for i in range(1, 8)), 7, 7)
    assert cost_of_path(x, x, diag) == 0.0


def test_cost_of_path_order_mismatch():
    with pytest.raises(ValueError):
        cost_of_path([1, 2], [1, 3], WarpingPath(((1, 1), (2, 1), (3, 2)), 3, 2))


def test_dtw_examples():
    d, p = dtw([1, 2, 3], [1, 3])
    assert d == 1.0
    assert cost_of_path([1, 2, 3], [1, 3], p) == 1.0
    d, p = dtw([4, 7, 2], [4, 7, 2])
    assert d == 0.0
    assert p.points == ((1, 1), (2, 2), (3, 3))
    d, p = dtw([0], [2])
    assert d == 2.0
    assert p.points == ((1, 1),)


def test_backtrace_prefers_diagonal_then_vertical():
    # x=(0,0), y=(0): only vertical moves are possible
    assert dtw([0, 0], [0])[1].points == ((1, 1), (2, 1))
    # all three predecessors of (2, 2) tie at 0, so the diagonal wins
    assert dtw([0, 0], [0, 0])[1].points == ((1, 1), (2, 2))


@pytest.mark.parametrize("m, n, count", [(1, 1, 1), (2, 2, 3), (3, 2, 5), (3, 3, 13), (4, 3, 25)])
def test_enumerate_paths_counts(m, n, count):
    paths = list(enumerate_paths(m, n))
    assert len(paths) == count == count_paths(m, n)
    assert len(set(p.points for p in paths)) == count
    for p in paths:
        assert max(m, n) <= len(p) <= m + n - 1


def test_enumerate_paths_guard():
    with pytest.raises(GuardError):
        next(enumerate_paths(9, 2))


def test_dtw_bruteforce_examples(rng):
    assert dtw_bruteforce([1, 2, 3], [1, 3]) == 1.0
    assert dtw_bruteforce([0], [2]) == 2.0
    x = rng.standard_normal(6)
    assert dtw_bruteforce(x, x) == 0.0
    with pytest.raises(GuardError):
        dtw_bruteforce(np.zeros(9), np.zeros(2))


@settings(max_examples=300, deadline=None)
@given(series, series)
def test_dtw_matches_bruteforce(x, y):
    d, p = dtw(x, y)
    assert abs(d - dtw_bruteforce(x, y)) <= 1e-9
    assert abs(cost_of_path(x, y, p) - d * d) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(real_series, real_series)
def test_metric_like_properties(x, y):
    d = dtw(x, y)[0]
    assert d >= 0.0
    assert dtw(x, x)[0] == 0.0
    assert dtw(y, x)[0] == d


@settings(max_examples=200, deadline=None)
@given(real_series, real_series, st.floats(-10, 10, allow_nan=False))
def test_scale_equivariance(x, y, a):
    assert math.isclose(dtw(a * x, a * y)[0], abs(a) * dtw(x, y)[0], rel_tol=1e-9, abs_tol=1e-9)


def test_squared_dtw_agrees_with_dtw(rng):
    for _ in range(20):
        x = random_int_series(rng, 10)
        y = random_int_series(rng, 10)
        assert math.isclose(squared_dtw(x, y), dtw(x, y)[0] ** 2, rel_tol=1e-12, abs_tol=1e-12)
