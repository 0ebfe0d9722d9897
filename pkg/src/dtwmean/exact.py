"""Fréchet function and exact sample means for two or three series.

The exact mean solves ``min_z sum_j dtw(x_j, z)**2`` over series ``z`` of any
length.  For a fixed tuple of warping paths the optimal ``z`` is element-wise:
each mean element is the arithmetic mean of the sample elements matched to it.
The dynamic program below searches jointly over those alignments.

State ``(e_1, ..., e_k)`` records the last sample index consumed from each
member.  Appending one mean element picks, per member, a repeat flag ``r`` and
a new end ``e'``; the member contributes the block ``[e + 1 - r, e']``.  A
repeat re-uses the previous block's last element (warping step (1, 0)).
Every appended element must consume at least one fresh sample element, which
bounds the mean length by ``sum(n_j) - k + 1`` without losing optimality.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from ._accel import USE_NUMBA, njit
from .dtw import WarpingPath, as_series, count_paths, enumerate_paths, squared_dtw
from .errors import GuardError

EXACT_GUARD = {2: 120, 3: 24}
BRUTEFORCE_MAX_N = 4
BRUTEFORCE_MAX_TUPLES = 5_000_000_000

METHODS = ("exact-dp", "exact-bruteforce", "dba", "ssg")


@dataclass(frozen=True)
class MeanResult:
    """A candidate mean with its Fréchet value and how it was obtained.

    ``iterations`` is 0 for the exact methods.  ``history`` holds the Fréchet
    value after every iteration for the heuristics (the first entry is the
    value at the initial series).  ``alignment`` holds one witness path of
    order ``len(mean) x len(member)`` per sample member when available.
    """

    mean: np.ndarray
    frechet_value: float
    method: str
    iterations: int = 0
    converged: bool = True
    alignment: tuple = None
    history: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")


def as_sample(S):
    members = tuple(as_series(x) for x in S)
    if not members:
        raise ValueError("a sample needs at least one time series")
    return members


def frechet(S, z):
    """Unnormalised Fréchet function ``sum_j dtw(x_j, z)**2``."""
    z = as_series(z)
    return math.fsum(squared_dtw(x, z) for x in as_sample(S))


def block_cost(values):
    """Optimal constant for a multiset and its squared-error cost.

    Returns ``(mean, sum((v - mean)**2))``.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValueError("block_cost needs at least one value")
    mu = float(v.mean())
    d = v - mu
    return mu, float(np.dot(d, d))


# --- exact dynamic program -------------------------------------------------


@njit
def _dp2_nb(P1, Q1, P2, Q2):
    n1 = P1.shape[0] - 1
    n2 = P2.shape[0] - 1
    D = np.full((n1 + 1, n2 + 1), np.inf)
    length = np.zeros((n1 + 1, n2 + 1), dtype=np.int64)
    prev = np.full((n1 + 1, n2 + 1, 2), -1, dtype=np.int64)
    rep = np.zeros((n1 + 1, n2 + 1, 2), dtype=np.int8)
    D[0, 0] = 0.0
    for a in range(1, n1 + 1):
        for b in range(1, n2 + 1):
            best = np.inf
            best_len = 1 << 62
            b1 = -1
            b2 = -1
            br1 = 0
            br2 = 0
            for e1 in range(a + 1):
                for r1 in range(2):
                    if (r1 == 0 and e1 == a) or (r1 == 1 and e1 == 0):
                        continue
                    s1 = e1 + 1 - r1
                    S1 = P1[a] - P1[s1 - 1]
                    T1 = Q1[a] - Q1[s1 - 1]
                    N1 = a - s1 + 1
                    for e2 in range(b + 1):
                        if (e1 == 0) != (e2 == 0):
                            continue
                        if e1 == a and e2 == b:
                            continue
                        base = D[e1, e2]
                        for r2 in range(2):
                            if (r2 == 0 and e2 == b) or (r2 == 1 and e2 == 0):
                                continue
                            s2 = e2 + 1 - r2
                            S = S1 + (P2[b] - P2[s2 - 1])
                            T = T1 + (Q2[b] - Q2[s2 - 1])
                            N = N1 + (b - s2 + 1)
                            c = T - S * S / N
                            if c < 0.0:
                                c = 0.0
                            tot = base + c
                            ln = length[e1, e2] + 1
                            if tot < best or (tot == best and ln < best_len):
                                best = tot
                                best_len = ln
                                b1 = e1
                                b2 = e2
                                br1 = r1
                                br2 = r2
            D[a, b] = best
            length[a, b] = best_len
            prev[a, b, 0] = b1
            prev[a, b, 1] = b2
            rep[a, b, 0] = br1
            rep[a, b, 1] = br2
    return D, length, prev, rep


@njit
def _dp3_nb(P1, Q1, P2, Q2, P3, Q3):
    n1 = P1.shape[0] - 1
    n2 = P2.shape[0] - 1
    n3 = P3.shape[0] - 1
    D = np.full((n1 + 1, n2 + 1, n3 + 1), np.inf)
    length = np.zeros((n1 + 1, n2 + 1, n3 + 1), dtype=np.int64)
    prev = np.full((n1 + 1, n2 + 1, n3 + 1, 3), -1, dtype=np.int64)
    rep = np.zeros((n1 + 1, n2 + 1, n3 + 1, 3), dtype=np.int8)
    D[0, 0, 0] = 0.0
    for a in range(1, n1 + 1):
        for b in range(1, n2 + 1):
            for c3 in range(1, n3 + 1):
                best = np.inf
                best_len = 1 << 62
                b1 = -1
                b2 = -1
                b3 = -1
                br1 = 0
                br2 = 0
                br3 = 0
                for e1 in range(a + 1):
                    for r1 in range(2):
                        if (r1 == 0 and e1 == a) or (r1 == 1 and e1 == 0):
                            continue
                        s1 = e1 + 1 - r1
                        S1 = P1[a] - P1[s1 - 1]
                        T1 = Q1[a] - Q1[s1 - 1]
                        N1 = a - s1 + 1
                        for e2 in range(b + 1):
                            if (e1 == 0) != (e2 == 0):
                                continue
                            for r2 in range(2):
                                if (r2 == 0 and e2 == b) or (r2 == 1 and e2 == 0):
                                    continue
                                s2 = e2 + 1 - r2
                                S12 = S1 + (P2[b] - P2[s2 - 1])
                                T12 = T1 + (Q2[b] - Q2[s2 - 1])
                                N12 = N1 + (b - s2 + 1)
                                for e3 in range(c3 + 1):
                                    if (e1 == 0) != (e3 == 0):
                                        continue
                                    if e1 == a and e2 == b and e3 == c3:
                                        continue
                                    base = D[e1, e2, e3]
                                    for r3 in range(2):
                                        if (r3 == 0 and e3 == c3) or (r3 == 1 and e3 == 0):
                                            continue
                                        s3 = e3 + 1 - r3
                                        S = S12 + (P3[c3] - P3[s3 - 1])
                                        T = T12 + (Q3[c3] - Q3[s3 - 1])
                                        N = N12 + (c3 - s3 + 1)
                                        c = T - S * S / N
                                        if c < 0.0:
                                            c = 0.0
                                        tot = base + c
                                        ln = length[e1, e2, e3] + 1
                                        if tot < best or (tot == best and ln < best_len):
                                            best = tot
                                            best_len = ln
                                            b1 = e1
                                            b2 = e2
                                            b3 = e3
                                            br1 = r1
                                            br2 = r2
                                            br3 = r3
                D[a, b, c3] = best
                length[a, b, c3] = best_len
                prev[a, b, c3, 0] = b1
                prev[a, b, c3, 1] = b2
                prev[a, b, c3, 2] = b3
                rep[a, b, c3, 0] = br1
                rep[a, b, c3, 1] = br2
                rep[a, b, c3, 2] = br3
    return D, length, prev, rep


def _dp_nb(P, Q):
    if len(P) == 2:
        return _dp2_nb(P[0], Q[0], P[1], Q[1])
    return _dp3_nb(P[0], Q[0], P[1], Q[1], P[2], Q[2])


def _member_options(Pj, Qj, a):
    # (previous end, repeat flag) pairs in the same order as the numba loops
    e = np.repeat(np.arange(a + 1), 2)
    r = np.tile(np.array([0, 1]), a + 1)
    keep = ~(((r == 0) & (e == a)) | ((r == 1) & (e == 0)))
    e, r = e[keep], r[keep]
    s = e + 1 - r
    return e, r, Pj[a] - Pj[s - 1], Qj[a] - Qj[s - 1], a - s + 1


def _dp_np(P, Q):
    k = len(P)
    dims = tuple(p.shape[0] for p in P)
    D = np.full(dims, np.inf)
    length = np.zeros(dims, dtype=np.int64)
    prev = np.full(dims + (k,), -1, dtype=np.int64)
    rep = np.zeros(dims + (k,), dtype=np.int8)
    D[(0,) * k] = 0.0
    opts = [[None] + [_member_options(P[j], Q[j], a) for a in range(1, dims[j])] for j in range(k)]
    for target in np.ndindex(*(d - 1 for d in dims)):
        target = tuple(t + 1 for t in target)
        o = [opts[j][target[j]] for j in range(k)]
        grids = np.ix_(*[oj[0] for oj in o])
        E = np.broadcast_arrays(*grids)
        S = np.ix_(*[oj[2] for oj in o])
        T = np.ix_(*[oj[3] for oj in o])
        N = np.ix_(*[oj[4] for oj in o])
        Ssum, Tsum, Nsum = S[0], T[0], N[0]
        for j in range(1, k):
            Ssum = Ssum + S[j]
            Tsum = Tsum + T[j]
            Nsum = Nsum + N[j]
        c = np.maximum(Tsum - Ssum * Ssum / Nsum, 0.0)
        zero = [Ej == 0 for Ej in E]
        valid = np.logical_and.reduce(zero) | ~np.logical_or.reduce(zero)
        valid &= ~np.logical_and.reduce([E[j] == target[j] for j in range(k)])
        idx = tuple(E)
        tot = np.where(valid, D[idx] + c, np.inf)
        ln = length[idx] + 1
        best = tot.min()
        ties = tot == best
        flat = int(np.argmin(np.where(ties, ln, np.iinfo(np.int64).max).ravel()))
        pos = np.unravel_index(flat, tot.shape)
        D[target] = best
        length[target] = ln[pos]
        prev[target] = [E[j][pos] for j in range(k)]
        rep[target] = [o[j][1][pos[j]] for j in range(k)]
    return D, length, prev, rep


_dp = _dp_nb if USE_NUMBA else _dp_np


def _check_exact_guard(members, max_n, allow_slow):
    k = len(members)
    if k not in EXACT_GUARD:
        raise ValueError(f"exact means are supported for samples of 2 or 3 series, got {k}")
    limit = EXACT_GUARD[k] if max_n is None else max_n
    longest = max(x.size for x in members)
    if not allow_slow and longest > limit:
        raise GuardError(
            f"exact mean of {k} series refused: longest series has length {longest}, "
            f"limit is {limit} (raise max_n or pass allow_slow)"
        )


def _blocks_to_paths(blocks, members):
    L = len(blocks)
    paths = []
    for j, x in enumerate(members):
        pts = [(t + 1, i) for t, blk in enumerate(blocks) for i in range(blk[j][0], blk[j][1] + 1)]
        paths.append(WarpingPath(tuple(pts), L, x.size))
    return tuple(paths)


def exact_mean_dp(S, max_n=None, allow_slow=False, backend=None):
    """Exact sample mean of two or three series by dynamic programming.

    Among optimal means the one with the fewest elements is returned; further
    ties go to the first predecessor in the search order (smaller previous
    ends first, non-repeat before repeat).

    Parameters
    ----------
    S : sequence of array_like
        Two or three time series.
    max_n : int, optional
        Override the length limit (120 for pairs, 24 for triples).
    allow_slow : bool
        Skip the length limit entirely.
    backend : {"numba", "numpy"}, optional
        Force one kernel; defaults to the process-wide choice.
    """
    members = as_sample(S)
    _check_exact_guard(members, max_n, allow_slow)
    k = len(members)
    shift = float(np.mean(np.concatenate(members)))
    P = [np.concatenate(([0.0], np.cumsum(x - shift))) for x in members]
    Q = [np.concatenate(([0.0], np.cumsum((x - shift) ** 2))) for x in members]
    kernel = {"numba": _dp_nb, "numpy": _dp_np, None: _dp}[backend]
    D, length, prev, rep = kernel(P, Q)

    state = tuple(x.size for x in members)
    blocks = []
    while any(state):
        p = tuple(int(v) for v in prev[state])
        r = rep[state]
        blocks.append(tuple((p[j] + 1 - int(r[j]), state[j]) for j in range(k)))
        state = p
    blocks.reverse()
    # block bounds are 1-based and inclusive
    mean = np.array(
        [np.concatenate([x[a - 1 : b] for x, (a, b) in zip(members, blk)]).mean() for blk in blocks]
    )
    mean.setflags(write=False)
    return MeanResult(
        mean=mean,
        frechet_value=frechet(members, mean),
        method="exact-dp",
        alignment=_blocks_to_paths(blocks, members),
    )


# --- brute-force oracle ----------------------------------------------------


def _path_block_stats(L, x, shift):
    """Per-path sums, sums of squares and counts of ``x`` matched to each mean slot."""
    paths = list(enumerate_paths(L, x.size, limit=max(L, x.size)))
    S = np.zeros((len(paths), L))
    Q = np.zeros((len(paths), L))
    N = np.zeros((len(paths), L))
    v = x - shift
    for p, path in enumerate(paths):
        rows, cols = path.arrays()
        np.add.at(S[p], rows, v[cols])
        np.add.at(Q[p], rows, v[cols] ** 2)
        np.add.at(N[p], rows, 1.0)
    return paths, S, Q, N


@njit
def _tuple_search_nb(S1, Q1, N1, S2, Q2, N2, S3, Q3, N3, best):
    L = S1.shape[1]
    bi = (-1, -1, -1)
    for i in range(S1.shape[0]):
        for j in range(S2.shape[0]):
            lb = 0.0
            for t in range(L):
                s = S1[i, t] + S2[j, t]
                n = N1[i, t] + N2[j, t]
                lb += Q1[i, t] + Q2[j, t] - s * s / n
            if lb > best:
                continue
            for l in range(S3.shape[0]):
                tot = 0.0
                for t in range(L):
                    s = S1[i, t] + S2[j, t] + S3[l, t]
                    n = N1[i, t] + N2[j, t] + N3[l, t]
                    tot += Q1[i, t] + Q2[j, t] + Q3[l, t] - s * s / n
                if tot < best:
                    best = tot
                    bi = (i, j, l)
    return best, bi[0], bi[1], bi[2]


def _tuple_search_np(S1, Q1, N1, S2, Q2, N2, S3, Q3, N3, best):
    bi = (-1, -1, -1)
    for i in range(S1.shape[0]):
        s = S1[i] + S2
        q = Q1[i] + Q2
        n = N1[i] + N2
        lb = (q - s * s / n).sum(axis=1)
        for j in np.flatnonzero(lb <= best):
            s3 = s[j] + S3
            tot = (q[j] + Q3 - s3 * s3 / (n[j] + N3)).sum(axis=1)
            l = int(np.argmin(tot))
            if tot[l] < best:
                best = float(tot[l])
                bi = (i, int(j), l)
    return best, bi[0], bi[1], bi[2]


_tuple_search = _tuple_search_nb if USE_NUMBA else _tuple_search_np


def bruteforce_tuple_count(lengths, L_max):
    return sum(math.prod(count_paths(L, n) for n in lengths) for L in range(1, L_max + 1))


def exact_mean_bruteforce(S, L_max=None, max_tuples=BRUTEFORCE_MAX_TUPLES, max_n=BRUTEFORCE_MAX_N):
    """Exact mean by enumerating every tuple of warping paths.

    For each mean length ``L <= L_max`` and every tuple of paths
    ``(p_1, ..., p_k)`` with ``p_j`` of order ``L x n_j``, each mean element
    is set to the average of the sample elements matched to it; the cheapest
    tuple wins.  ``L_max`` defaults to ``sum(n_j)``.
    """
    members = as_sample(S)
    k = len(members)
    lengths = [x.size for x in members]
    if k > 3:
        raise ValueError(f"brute-force exact mean supports at most 3 series, got {k}")
    if max(lengths) > max_n:
        raise GuardError(f"brute-force exact mean refused: series longer than {max_n}")
    total = sum(lengths)
    if L_max is None:
        L_max = total
    if not 1 <= L_max <= total:
        raise ValueError(f"L_max must lie in [1, {total}], got {L_max}")
    n_tuples = bruteforce_tuple_count(lengths, L_max)
    if n_tuples > max_tuples:
        raise GuardError(
            f"brute-force exact mean refused: {n_tuples} path tuples exceed the limit {max_tuples}"
        )

    shift = float(np.mean(np.concatenate(members)))
    best, best_L, best_tuple, best_stats = np.inf, None, None, None
    for L in range(1, L_max + 1):
        stats = [_path_block_stats(L, x, shift) for x in members]
        while len(stats) < 3:
            # an absent member contributes nothing to any mean slot
            zeros = np.zeros((1, L))
            stats.append((None, zeros, zeros, zeros))
        args = []
        for _, Sj, Qj, Nj in stats:
            args += [Sj, Qj, Nj]
        val, i, j, l = _tuple_search(*args, best)
        if i >= 0:
            best, best_L, best_tuple, best_stats = val, L, (i, j, l), stats

    sums = sum(st[1][idx] for st, idx in zip(best_stats, best_tuple))
    counts = sum(st[3][idx] for st, idx in zip(best_stats, best_tuple))
    mean = sums / counts + shift
    mean.setflags(write=False)
    alignment = tuple(best_stats[j][0][best_tuple[j]] for j in range(k))
    return MeanResult(
        mean=mean,
        frechet_value=frechet(members, mean),
        method="exact-bruteforce",
        alignment=alignment,
    )


__all__ = [
    "EXACT_GUARD",
    "MeanResult",
    "as_sample",
    "block_cost",
    "exact_mean_bruteforce",
    "exact_mean_dp",
    "frechet",
]
