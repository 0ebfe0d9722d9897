"""The numba kernels and the numpy fallbacks must agree bit for bit."""
import numpy as np
import pytest

from dtwmean import dtw as dtw_mod
from dtwmean import exact as exact_mod
from dtwmean._accel import HAVE_NUMBA

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


def test_accumulate_and_backtrace_agree(rng):
    for _ in range(50):
        x = rng.standard_normal(int(rng.integers(1, 30)))
        y = rng.standard_normal(int(rng.integers(1, 30)))
        D1 = dtw_mod._accumulate_nb(x, y)
        D2 = dtw_mod._accumulate_np(x, y)
        assert np.array_equal(D1, D2)
        for a, b in zip(dtw_mod._backtrace_nb(D1), dtw_mod._backtrace_py(D2)):
            assert np.array_equal(a, b)


def test_backtrace_agrees_on_ties(rng):
    for _ in range(50):
        x = rng.integers(0, 2, size=int(rng.integers(1, 8))).astype(float)
        y = rng.integers(0, 2, size=int(rng.integers(1, 8))).astype(float)
        D = dtw_mod._accumulate_np(x, y)
        for a, b in zip(dtw_mod._backtrace_nb(D), dtw_mod._backtrace_py(D)):
            assert np.array_equal(a, b)


@pytest.mark.parametrize("k, max_len", [(2, 12), (3, 6)])
def test_exact_dp_agrees(rng, k, max_len):
    for _ in range(15):
        S = [rng.integers(-2, 3, size=int(rng.integers(1, max_len + 1))).astype(float) for _ in range(k)]
        a = exact_mod.exact_mean_dp(S, backend="numba")
        b = exact_mod.exact_mean_dp(S, backend="numpy")
        assert np.array_equal(a.mean, b.mean)
        assert a.alignment == b.alignment


def test_tuple_search_agrees(rng):
    S = [rng.integers(-3, 4, size=3).astype(float) for _ in range(3)]
    shift = 0.0
    for L in (2, 4):
        stats = [exact_mod._path_block_stats(L, x, shift) for x in S]
        args = [a for st in stats for a in st[1:]]
        v1 = exact_mod._tuple_search_nb(*args, np.inf)
        v2 = exact_mod._tuple_search_np(*args, np.inf)
        assert v1[0] == pytest.approx(v2[0], abs=1e-9)
