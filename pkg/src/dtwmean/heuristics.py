"""Fixed-length mean heuristics: DBA and stochastic subgradient (SSG).

Both keep the length of their initial series.  The defaults match the
drift-out experiment: 200 iterations, SSG learning rate decreasing linearly
from 0.2 to 0.02.
"""
from dataclasses import dataclass
import math

import numpy as np

from .dtw import align, as_series, squared_dtw
from .exact import MeanResult, as_sample, frechet


@dataclass(frozen=True)
class HeuristicConfig:
    """Parameters shared by :func:`dba` and :func:`ssg`.

    ``init`` is ``"medoid"``, an integer member index, or an explicit series.
    ``tolerance`` is the DBA stopping threshold on the Fréchet decrease.
    """

    max_iterations: int = 200
    eta0: float = 0.2
    eta1: float = 0.02
    tolerance: float = 1e-12
    seed: int = 0
    init: object = "medoid"

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not (self.eta0 > 0 and self.eta1 > 0):
            raise ValueError("learning rates must be positive")
        if self.eta1 > self.eta0:
            raise ValueError("eta1 must not exceed eta0")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def learning_rate(self, step):
        if self.max_iterations == 1:
            return self.eta0
        return self.eta0 + (self.eta1 - self.eta0) * step / (self.max_iterations - 1)


def medoid(S):
    """Index and series of the member with the smallest Fréchet value.

    Ties go to the smallest index.
    """
    members = as_sample(S)
    k = len(members)
    W = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            W[i, j] = W[j, i] = squared_dtw(members[i], members[j])
    scores = [math.fsum(row) for row in W]
    idx = int(np.argmin(scores))
    return idx, members[idx]


def initial_series(members, init):
    if isinstance(init, str):
        if init != "medoid":
            raise ValueError(f"unknown initializer {init!r}")
        return medoid(members)[1]
    if isinstance(init, (int, np.integer)):
        return members[int(init)]
    return as_series(init)


def _align_all(z, members):
    """Squared costs summed over members, plus each optimal path."""
    paths = []
    total = []
    for x in members:
        cost, rows, cols = align(z, x)
        total.append(cost)
        paths.append((rows, cols))
    return math.fsum(total), paths


def _same_paths(a, b):
    return all(np.array_equal(r0, r1) and np.array_equal(c0, c1) for (r0, c0), (r1, c1) in zip(a, b))


def dba(S, cfg=HeuristicConfig()):
    """DTW barycenter averaging.

    Each iteration aligns the current mean to every member, then replaces each
    mean element by the average of the sample elements matched to it.  Stops
    when the Fréchet value decreases by at most ``cfg.tolerance``, when the
    alignment no longer changes, or after ``cfg.max_iterations`` updates.
    """
    members = as_sample(S)
    z = np.array(initial_series(members, cfg.init), dtype=np.float64)
    L = z.size
    F, paths = _align_all(z, members)
    history = [F]
    converged = False
    it = 0
    while it < cfg.max_iterations:
        it += 1
        sums = np.zeros(L)
        counts = np.zeros(L)
        for x, (rows, cols) in zip(members, paths):
            np.add.at(sums, rows, x[cols])
            np.add.at(counts, rows, 1.0)
        z_new = sums / counts
        F_new, paths_new = _align_all(z_new, members)
        history.append(F_new)
        if F_new > F:
            # rounding noise at a fixed point; keep the better iterate
            converged = True
            break
        decrease = F - F_new
        unchanged = _same_paths(paths, paths_new)
        z, F, paths = z_new, F_new, paths_new
        if decrease <= cfg.tolerance or unchanged:
            converged = True
            break
    z.setflags(write=False)
    return MeanResult(
        mean=z,
        frechet_value=frechet(members, z),
        method="dba",
        iterations=it,
        converged=converged,
        history=tuple(history),
    )


def ssg(S, cfg=HeuristicConfig()):
    """Stochastic subgradient descent on the Fréchet function.

    Performs ``cfg.max_iterations`` single-sample steps.  Members are visited
    in a fresh random permutation every epoch.  The subgradient of
    ``dtw(z, x)**2`` along an optimal path ``p`` is
    ``g_t = 2 * sum_{(t, j) in p} (z_t - x_j)``.  The best iterate seen
    (including the initial series) is returned; ``converged`` is always False.
    """
    members = as_sample(S)
    k = len(members)
    rng = np.random.default_rng(cfg.seed)
    z = np.array(initial_series(members, cfg.init), dtype=np.float64)
    best_z = z.copy()
    best_F = frechet(members, z)
    history = [best_F]
    order = []
    for step in range(cfg.max_iterations):
        if not order:
            order = [int(i) for i in rng.permutation(k)]
        x = members[order.pop(0)]
        _, rows, cols = align(z, x)
        g = np.zeros(z.size)
        np.add.at(g, rows, 2.0 * (z[rows] - x[cols]))
        z = z - cfg.learning_rate(step) * g
        F = frechet(members, z)
        history.append(F)
        if F < best_F:
            best_z, best_F = z.copy(), F
    best_z.setflags(write=False)
    return MeanResult(
        mean=best_z,
        frechet_value=best_F,
        method="ssg",
        iterations=cfg.max_iterations,
        converged=False,
        history=tuple(history),
    )


__all__ = ["HeuristicConfig", "dba", "medoid", "ssg"]
