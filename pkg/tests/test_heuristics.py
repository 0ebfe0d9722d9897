import numpy as np
import pytest

from dtwmean.exact import frechet
from dtwmean.heuristics import HeuristicConfig, dba, medoid, ssg


def test_config_defaults_and_validation():
    cfg = HeuristicConfig()
    assert (cfg.max_iterations, cfg.eta0, cfg.eta1, cfg.tolerance) == (200, 0.2, 0.02, 1e-12)
    assert cfg.learning_rate(0) == 0.2
    assert cfg.learning_rate(199) == pytest.approx(0.02, abs=1e-15)
    assert cfg.learning_rate(99) < cfg.learning_rate(98)
    for bad in ({"max_iterations": 0}, {"eta0": 0.01, "eta1": 0.02}, {"eta0": -1}, {"tolerance": -1}, {"seed": -1}):
        with pytest.raises(ValueError):
            HeuristicConfig(**bad)


def test_medoid():
    idx, x = medoid([[0], [1], [5]])
    assert idx == 1 and x.tolist() == [1.0]
    assert medoid([[3, 4]])[0] == 0
    assert medoid([[0, 1], [0, 1], [2, 2]])[0] == 0


def test_dba_single_step():
    r = dba([[0], [2]], HeuristicConfig(init=[0]))
    assert r.mean.tolist() == [1.0]
    assert r.history[:2] == (4.0, 2.0)
    assert r.frechet_value == 2.0
    assert r.converged and r.iterations == 1


def test_dba_fixed_point(rng):
    x = rng.standard_normal(8)
    r = dba([x], HeuristicConfig(init=x))
    assert np.array_equal(r.mean, x)
    assert r.iterations == 1 and r.frechet_value == 0.0


def test_dba_monotone(rng):
    for _ in range(10):
        S = [rng.standard_normal(20).cumsum() for _ in range(3)]
        r = dba(S, HeuristicConfig(init=int(rng.integers(3))))
        h = np.array(r.history)
        assert np.all(np.diff(h) <= 1e-12)
        assert r.frechet_value == pytest.approx(frechet(S, r.mean), abs=1e-9)
        assert len(r.mean) == 20


def test_dba_respects_iteration_cap(rng):
    S = [rng.standard_normal(15).cumsum() for _ in range(4)]
    r = dba(S, HeuristicConfig(max_iterations=1, init=0))
    assert r.iterations == 1


def test_ssg_single_step():
    cfg = HeuristicConfig(max_iterations=1, eta0=0.1, eta1=0.1, init=[1.0])
    r = ssg([[0], [2]], cfg)
    assert r.history[0] == 2.0
    assert r.history[1] == pytest.approx(2.08, abs=1e-12)
    assert r.mean.tolist() == [1.0] and r.frechet_value == 2.0
    assert not r.converged


def test_ssg_zero_gradient_fixed_point(rng):
    x = rng.standard_normal(6)
    r = ssg([x], HeuristicConfig(init=x, max_iterations=20))
    assert np.array_equal(r.mean, x) and r.frechet_value == 0.0


def test_ssg_best_so_far(rng):
    for _ in range(10):
        S = [rng.standard_normal(20).cumsum() for _ in range(3)]
        cfg = HeuristicConfig(seed=int(rng.integers(2**63)))
        r = ssg(S, cfg)
        assert r.frechet_value <= r.history[0]
        assert r.frechet_value == min(r.history)
        assert r.frechet_value == pytest.approx(frechet(S, r.mean), abs=1e-9)
        assert r.iterations == 200


def test_determinism(rng):
    S = [rng.standard_normal(12) for _ in range(3)]
    cfg = HeuristicConfig(seed=99)
    for fn in (dba, ssg):
        a, b = fn(S, cfg), fn(S, cfg)
        assert np.array_equal(a.mean, b.mean) and a.history == b.history and a.iterations == b.iterations
    assert not np.array_equal(ssg(S, HeuristicConfig(seed=1)).history, ssg(S, HeuristicConfig(seed=2)).history)


def test_bad_initializer():
    with pytest.raises(ValueError):
        dba([[0], [1]], HeuristicConfig(init="random"))
