"""Correctness metrics, central regions and the two evaluation protocols.

A cluster here is three series ``(x_1, x_2, x_3)``.  A reference set holds one
series ``mu_k`` per member, where ``mu_k`` stands for the pair obtained by
dropping ``x_k``.  A candidate ``z`` is coherent when
``dtw(z, x_k) <= dtw(mu_k, x_k)`` for all three ``k``; otherwise it has
drifted out.  An exact mean of the cluster is always coherent with respect
to references that are exact means of the pairs.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .data import EvalSummary, trial_seed
from .dtw import as_series, dtw, squared_dtw
from .exact import exact_mean_dp, frechet
from .heuristics import HeuristicConfig, dba, ssg

CENTRALITY_TOL = 1e-9
REFERENCE_METHODS = ("exact-mean", "dba", "ssg", "external")


def err_eq(x, y, mu):
    """Percentage by which ``mu`` fails to be equidistant from ``x`` and ``y``."""
    a = dtw(x, mu)[0]
    b = dtw(mu, y)[0]
    hi = max(a, b)
    if hi == 0.0:
        return 0.0
    return min(100.0, 100.0 * abs(a - b) / hi)


def err_mid(x, y, mu):
    """Percentage by which ``mu`` fails the midpoint identity.

    Can exceed 100 because dtw has no triangle inequality.
    """
    dxy = dtw(x, y)[0]
    if dxy == 0.0:
        return 0.0
    return 100.0 * abs(dxy - dtw(x, mu)[0] - dtw(mu, y)[0]) / dxy


@dataclass(frozen=True)
class ReferenceSet:
    references: tuple
    provenance: tuple
    source_cluster_id: object = None

    def __post_init__(self):
        refs = tuple(as_series(r) for r in self.references)
        if len(refs) != 3:
            raise ValueError(f"a reference set has exactly three series, got {len(refs)}")
        prov = self.provenance
        if isinstance(prov, str):
            prov = (prov,) * 3
        prov = tuple(prov)
        if len(prov) != 3 or any(p not in REFERENCE_METHODS for p in prov):
            raise ValueError(f"bad provenance {self.provenance!r}")
        object.__setattr__(self, "references", refs)
        object.__setattr__(self, "provenance", prov)


@dataclass(frozen=True)
class CentralityReport:
    d_candidate: tuple
    d_reference: tuple
    satisfied: tuple
    coherent: bool
    tolerance: float

    @property
    def drifted_out(self):
        return not self.coherent


def _cluster(S):
    members = tuple(as_series(x) for x in S)
    if len(members) != 3:
        raise ValueError(f"a cluster has exactly three series, got {len(members)}")
    return members


def _pair_mean(pair, method, cfg, max_n, allow_slow):
    if method == "exact-mean":
        return exact_mean_dp(pair, max_n=max_n, allow_slow=allow_slow)
    if method == "dba":
        return dba(pair, cfg)
    if method == "ssg":
        return ssg(pair, cfg)
    raise ValueError(f"unknown reference method {method!r}")


def build_reference_set(S, method="exact-mean", cfg=None, cluster_id=None, max_n=None, allow_slow=False):
    """References ``mu_k`` = mean of the cluster without ``x_k``, k = 1, 2, 3."""
    members = _cluster(S)
    cfg = cfg or HeuristicConfig()
    refs = []
    for k in range(3):
        pair = [members[i] for i in range(3) if i != k]
        refs.append(_pair_mean(pair, method, cfg, max_n, allow_slow).mean)
    return ReferenceSet(tuple(refs), method, cluster_id)


def centrality_test(z, S, R, tol=CENTRALITY_TOL):
    """Evaluate the three centrality conditions for candidate ``z``."""
    members = _cluster(S)
    z = as_series(z)
    d_cand = tuple(dtw(z, x)[0] for x in members)
    d_ref = tuple(dtw(mu, x)[0] for mu, x in zip(R.references, members))
    sat = tuple(bool(c <= r + tol) for c, r in zip(d_cand, d_ref))
    return CentralityReport(d_cand, d_ref, sat, all(sat), tol)


def centrality_chain(S, mu_S, R):
    """Terms of the chain bounding ``dtw(x_k, mu_S)**2`` by ``dtw(x_k, mu_k)**2``.

    Returns, per member ``k``, the triple
    ``(F(mu_S) - F_k(mu_S), F(mu_S) - F_k(mu_k), F(mu_k) - F_k(mu_k))`` where
    ``F`` is the cluster's Fréchet function and ``F_k`` that of the pair
    without ``x_k``.  For exact means the triple is non-decreasing.
    """
    members = _cluster(S)
    F_S = frechet(members, mu_S)
    out = []
    for k, mu_k in enumerate(R.references):
        pair = [members[i] for i in range(3) if i != k]
        out.append((F_S - frechet(pair, mu_S), F_S - frechet(pair, mu_k), frechet(members, mu_k) - frechet(pair, mu_k)))
    return tuple(out)


# --- evaluation drivers ------------------------------------------------------

_WORKER = {}


def _init_worker(payload):
    _WORKER.clear()
    _WORKER.update(payload)


def _run_trials(fn, payload, trials, jobs):
    if jobs <= 1 or trials <= 1:
        _init_worker(payload)
        return [fn(t) for t in range(trials)]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(payload,)) as ex:
        return list(ex.map(fn, range(trials), chunksize=max(1, trials // (4 * jobs))))


def _draw(d, size, seed, t):
    rng = np.random.default_rng(trial_seed(seed, d.name, t))
    return tuple(int(i) for i in rng.choice(len(d), size=size, replace=False))


def _check_trials(d, size, trials):
    if trials < 1:
        raise ValueError("trials must be positive")
    if len(d) < size:
        raise ValueError(f"dataset {d.name!r} has {len(d)} series, fewer than {size}")
    available = math.comb(len(d), size)
    if trials > available:
        raise ValueError(f"{trials} trials requested but dataset {d.name!r} has only {available} distinct {size}-tuples")


def _correctness_trial(t):
    d, seed = _WORKER["dataset"], _WORKER["seed"]
    i, j = _draw(d, 2, seed, t)
    x, y = d[i], d[j]
    res = exact_mean_dp([x, y], max_n=_WORKER["max_n"], allow_slow=_WORKER["allow_slow"])
    mu = res.mean
    return {
        "trial": t,
        "indices": [i, j],
        "d_xy": dtw(x, y)[0],
        "d_xmu": dtw(x, mu)[0],
        "d_muy": dtw(mu, y)[0],
        "err_eq": err_eq(x, y, mu),
        "err_mid": err_mid(x, y, mu),
        "frechet": res.frechet_value,
        "mean_length": int(mu.size),
    }


def correctness_eval(dataset, trials=100, seed=0, jobs=1, max_n=None, allow_slow=False):
    """Exact means of random pairs, scored by ``err_eq`` and ``err_mid``."""
    _check_trials(dataset, 2, trials)
    payload = {"dataset": dataset, "seed": seed, "max_n": max_n, "allow_slow": allow_slow}
    records = _run_trials(_correctness_trial, payload, trials, jobs)
    return EvalSummary("correctness", dataset.name, seed, records)


def _driftout_trial(t):
    d, seed, cfg, tol = _WORKER["dataset"], _WORKER["seed"], _WORKER["cfg"], _WORKER["tol"]
    idx = _draw(d, 3, seed, t)
    S = [d[i] for i in idx]
    R = build_reference_set(S, "exact-mean", cluster_id=t, max_n=_WORKER["max_n"], allow_slow=_WORKER["allow_slow"])
    heur_seed = int(trial_seed(seed, d.name, t, stream=1).generate_state(1, np.uint64)[0])
    run_cfg = HeuristicConfig(cfg.max_iterations, cfg.eta0, cfg.eta1, cfg.tolerance, heur_seed, cfg.init)
    rec = {"trial": t, "indices": list(idx), "d_reference": None, "methods": {}}
    for m in _WORKER["methods"]:
        if m == "dba":
            res = dba(S, run_cfg)
        elif m == "ssg":
            res = ssg(S, run_cfg)
        else:
            res = exact_mean_dp(S, max_n=_WORKER["max_n"], allow_slow=_WORKER["allow_slow"])
        rep = centrality_test(res.mean, S, R, tol)
        rec["d_reference"] = list(rep.d_reference)
        rec["methods"][m] = {
            "d_candidate": list(rep.d_candidate),
            "satisfied": list(rep.satisfied),
            "coherent": rep.coherent,
            "frechet": res.frechet_value,
            "iterations": res.iterations,
        }
    return rec


def driftout_eval(
    dataset,
    trials=100,
    seed=0,
    methods=("dba", "ssg"),
    cfg=None,
    tol=CENTRALITY_TOL,
    jobs=1,
    max_n=None,
    allow_slow=False,
):
    """Random triples: do heuristic (or exact) means stay in the central region?

    References are exact means of the three pairs.  Each heuristic run gets
    its own seed derived from the master seed, the dataset name and the trial.
    """
    _check_trials(dataset, 3, trials)
    methods = tuple(methods)
    unknown = set(methods) - {"dba", "ssg", "exact"}
    if unknown or not methods:
        raise ValueError(f"methods must be a non-empty subset of dba, ssg, exact; got {methods}")
    cfg = cfg or HeuristicConfig()
    payload = {
        "dataset": dataset,
        "seed": seed,
        "cfg": cfg,
        "tol": tol,
        "methods": methods,
        "max_n": max_n,
        "allow_slow": allow_slow,
    }
    records = _run_trials(_driftout_trial, payload, trials, jobs)
    config = {
        "max_iterations": cfg.max_iterations,
        "eta0": cfg.eta0,
        "eta1": cfg.eta1,
        "tolerance": cfg.tolerance,
        "centrality_tol": tol,
    }
    return EvalSummary("driftout", dataset.name, seed, records, methods, config)


__all__ = [
    "CentralityReport",
    "ReferenceSet",
    "build_reference_set",
    "centrality_chain",
    "centrality_test",
    "correctness_eval",
    "driftout_eval",
    "err_eq",
    "err_mid",
]
