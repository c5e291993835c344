import numpy as np
import pytest

from qkc.optim import OptimConfig, minimize


def test_quadratic_minimum():
    r = minimize(lambda x: (x[0] - 2) ** 2, [0.0])
    assert abs(r.x[0] - 2) <= 1e-4
    assert r.converged


def test_active_upper_bound():
    r = minimize(lambda x: (x[0] - 10) ** 2, [0.0])
    assert abs(r.x[0] - 7) <= 1e-6


def test_rosenbrock():
    rosen = lambda x: 100 * (x[1] - x[0] ** 2) ** 2 + (1 - x[0]) ** 2
    r = minimize(rosen, [-1.2, 1.0])
    assert np.max(np.abs(r.x - 1)) <= 1e-3


def test_start_outside_box_is_clamped():
    seen = []

    def f(x):
        seen.append(x.copy())
        return float(np.sum(x ** 2))
    r = minimize(f, [20.0, -30.0])
    assert np.array_equal(seen[0], [7.0, -7.0])
    assert r.fun <= f(np.array([7.0, -7.0]))


def test_every_point_feasible_and_best_monotone():
    rng = np.random.default_rng(0)
    cfg = OptimConfig(lower=[-1, -2, 0], upper=[1, 0.5, 3])
    values, best = [], []

    def f(x):
        assert np.all(x >= cfg.lower) and np.all(x <= cfg.upper)
        v = float(np.sum(np.sin(3 * x) + (x - 0.3) ** 2))
        values.append(v)
        best.append(min(values))
        return v
    r = minimize(f, rng.uniform(-1, 0.5, 3), cfg)
    assert np.all(np.diff(best) <= 0)
    assert r.fun == min(values) and r.evals == len(values)


def test_budget_exhaustion_reported():
    cfg = OptimConfig(max_evals=20)
    calls = []
    r = minimize(lambda x: calls.append(1) or float(np.sum((x - 0.1234) ** 2)), [5, 5, 5, 5], cfg)
    assert not r.converged and r.evals == 20 == len(calls)
    assert r.fun <= 4 * (5 - 0.1234) ** 2


def test_deterministic():
    f = lambda x: float(np.cos(x[0]) * np.sin(x[1]) + 0.1 * x[0] ** 2)
    a, b = minimize(f, [0.5, 0.5]), minimize(f, [0.5, 0.5])
    assert np.array_equal(a.x, b.x) and a.evals == b.evals


def test_never_worse_than_start():
    rng = np.random.default_rng(3)
    for _ in range(10):
        c = rng.normal(size=4)
        f = lambda x: float(np.sum(np.cos(x * c)) + np.sum(x ** 2) * 0.01)
        x0 = rng.uniform(-7, 7, 4)
        assert minimize(f, x0).fun <= f(x0)


@pytest.mark.parametrize("cfg", [
    OptimConfig(lower=1.0, upper=1.0),
    OptimConfig(tol=0.0),
    OptimConfig(max_evals=2),
])
def test_invalid_config(cfg):
    with pytest.raises(ValueError):
        minimize(lambda x: float(x[0] ** 2), [0.0], cfg)
