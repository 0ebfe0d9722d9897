"""Dynamic time warping with squared local cost.

Series are 1-D float64 numpy arrays.  Warping paths use 1-based index pairs
``(i, j)`` so that a path of order ``m x n`` starts at ``(1, 1)`` and ends at
``(m, n)``.
"""
from dataclasses import dataclass
import math

import numpy as np

from ._accel import USE_NUMBA, njit
from .errors import GuardError

PATH_ENUM_LIMIT = 8

_STEPS = ((1, 0), (0, 1), (1, 1))


def as_series(x):
    """Return ``x`` as a read-only, finite, non-empty float64 vector."""
    arr = np.array(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError(f"time series must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("time series must contain at least one element")
    if not np.all(np.isfinite(arr)):
        raise ValueError("time series contains NaN or infinite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class WarpingPath:
    """Monotone lattice path of order ``m x n`` with 1-based points."""

    points: tuple
    m: int
    n: int

    def __post_init__(self):
        pts = tuple((int(i), int(j)) for i, j in self.points)
        object.__setattr__(self, "points", pts)
        if self.m < 1 or self.n < 1:
            raise ValueError(f"path order must be positive, got {self.m}x{self.n}")
        if not pts or pts[0] != (1, 1) or pts[-1] != (self.m, self.n):
            raise ValueError(f"path must run from (1, 1) to ({self.m}, {self.n})")
        for (i0, j0), (i1, j1) in zip(pts, pts[1:]):
            if (i1 - i0, j1 - j0) not in _STEPS:
                raise ValueError(f"illegal step ({i0}, {j0}) -> ({i1}, {j1})")

    @classmethod
    def from_arrays(cls, rows, cols, m, n):
        """Build a path from 0-based index arrays."""
        return cls(tuple(zip(np.asarray(rows) + 1, np.asarray(cols) + 1)), m, n)

    def arrays(self):
        """0-based ``(rows, cols)`` index arrays, handy for fancy indexing."""
        a = np.asarray(self.points, dtype=np.intp) - 1
        return a[:, 0], a[:, 1]

    def __len__(self):
        return len(self.points)


def cost_of_path(x, y, path):
    """Sum of squared differences of ``x`` and ``y`` along ``path``."""
    x = as_series(x)
    y = as_series(y)
    if (path.m, path.n) != (x.size, y.size):
        raise ValueError(
            f"path of order {path.m}x{path.n} does not fit series of lengths "
            f"{x.size} and {y.size}"
        )
    rows, cols = path.arrays()
    d = x[rows] - y[cols]
    return float(np.dot(d, d))


# --- accumulated cost ------------------------------------------------------


@njit
def _accumulate_nb(x, y):
    m = x.shape[0]
    n = y.shape[0]
    D = np.full((m + 1, n + 1), np.inf)
    D[0, 0] = 0.0
    for i in range(1, m + 1):
        xi = x[i - 1]
        for j in range(1, n + 1):
            d = xi - y[j - 1]
            best = D[i - 1, j - 1]
            if D[i - 1, j] < best:
                best = D[i - 1, j]
            if D[i, j - 1] < best:
                best = D[i, j - 1]
            D[i, j] = d * d + best
    return D


def _accumulate_np(x, y):
    # anti-diagonal wavefront: every cell on i + j = s depends only on s-1, s-2
    m = x.shape[0]
    n = y.shape[0]
    D = np.full((m + 1, n + 1), np.inf)
    D[0, 0] = 0.0
    for s in range(2, m + n + 1):
        i = np.arange(max(1, s - n), min(m, s - 1) + 1)
        j = s - i
        d = x[i - 1] - y[j - 1]
        best = np.minimum(np.minimum(D[i - 1, j - 1], D[i - 1, j]), D[i, j - 1])
        D[i, j] = d * d + best
    return D


@njit
def _backtrace_nb(D):
    i = D.shape[0] - 1
    j = D.shape[1] - 1
    rows = np.empty(i + j, dtype=np.intp)
    cols = np.empty(i + j, dtype=np.intp)
    k = 0
    while True:
        rows[k] = i - 1
        cols[k] = j - 1
        k += 1
        if i == 1 and j == 1:
            break
        diag = D[i - 1, j - 1]
        up = D[i - 1, j]
        left = D[i, j - 1]
        if diag <= up and diag <= left:
            i -= 1
            j -= 1
        elif up <= left:
            i -= 1
        else:
            j -= 1
    return rows[:k][::-1].copy(), cols[:k][::-1].copy()


def _backtrace_py(D):
    i, j = D.shape[0] - 1, D.shape[1] - 1
    rows, cols = [i - 1], [j - 1]
    while i > 1 or j > 1:
        diag, up, left = D[i - 1, j - 1], D[i - 1, j], D[i, j - 1]
        if diag <= up and diag <= left:
            i, j = i - 1, j - 1
        elif up <= left:
            i -= 1
        else:
            j -= 1
        rows.append(i - 1)
        cols.append(j - 1)
    return np.array(rows[::-1], dtype=np.intp), np.array(cols[::-1], dtype=np.intp)


if USE_NUMBA:
    _accumulate, _backtrace = _accumulate_nb, _backtrace_nb
else:
    _accumulate, _backtrace = _accumulate_np, _backtrace_py


def squared_dtw(x, y):
    """Minimal warping cost, i.e. ``dtw(x, y) ** 2``, without a backtrace."""
    return float(_accumulate(as_series(x), as_series(y))[-1, -1])


def align(x, y):
    """Squared dtw-distance plus 0-based optimal path arrays ``(rows, cols)``."""
    D = _accumulate(as_series(x), as_series(y))
    rows, cols = _backtrace(D)
    return float(D[-1, -1]), rows, cols


def dtw(x, y):
    """Return ``(distance, path)`` for the unconstrained dtw-distance.

    The dynamic program accumulates squared differences and takes one square
    root at the end.  Among optimal paths the backtrace prefers the diagonal
    step, then the vertical one (advance in ``x``), then the horizontal one.
    """
    x = as_series(x)
    y = as_series(y)
    cost, rows, cols = align(x, y)
    return math.sqrt(cost), WarpingPath.from_arrays(rows, cols, x.size, y.size)


# --- brute-force oracle ----------------------------------------------------


def _check_enum_guard(m, n, limit):
    if m < 1 or n < 1:
        raise ValueError(f"path order must be positive, got {m}x{n}")
    if m > limit or n > limit:
        raise GuardError(
            f"path enumeration refused for order {m}x{n}: both sides must be <= {limit}"
        )


def _paths_from(i, j, m, n):
    if (i, j) == (m, n):
        yield ((i, j),)
        return
    for di, dj in _STEPS:
        if i + di <= m and j + dj <= n:
            for tail in _paths_from(i + di, j + dj, m, n):
                yield ((i, j),) + tail


def enumerate_paths(m, n, limit=PATH_ENUM_LIMIT):
    """Yield every warping path of order ``m x n`` exactly once.

    The count is the Delannoy number ``D(m - 1, n - 1)``, so sizes are capped
    by ``limit`` on each side.
    """
    _check_enum_guard(m, n, limit)
    for pts in _paths_from(1, 1, m, n):
        yield WarpingPath(pts, m, n)


def dtw_bruteforce(x, y, limit=PATH_ENUM_LIMIT):
    """dtw-distance by exhaustive minimisation over all warping paths."""
    x = as_series(x)
    y = as_series(y)
    _check_enum_guard(x.size, y.size, limit)
    best = min(cost_of_path(x, y, p) for p in enumerate_paths(x.size, y.size, limit))
    return math.sqrt(best)


def delannoy(a, b):
    """Number of lattice paths from (0, 0) to (a, b) with E, N and NE steps."""
    return sum(math.comb(a, k) * math.comb(b, k) * 2**k for k in range(min(a, b) + 1))


def count_paths(m, n):
    return delannoy(m - 1, n - 1)


__all__ = [
    "WarpingPath",
    "align",
    "as_series",
    "cost_of_path",
    "count_paths",
    "dtw",
    "dtw_bruteforce",
    "enumerate_paths",
    "squared_dtw",
]
