"""Bounded derivative-free minimization (Nelder–Mead with box clamping)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

# standard reflection / expansion / contraction / shrink coefficients
_ALPHA, _GAMMA, _RHO, _SIGMA = 1.0, 2.0, 0.5, 0.5


@dataclass
class OptimConfig:
    step: float = 1.5
    tol: float = 1e-5
    max_evals: int = 10000
    lower: float | Sequence[float] = -7.0
    upper: float | Sequence[float] = 7.0
    restarts: int = 2  # fresh simplices around the best point after convergence

    def bounds(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        lo = np.broadcast_to(np.asarray(self.lower, dtype=float), (n,)).copy()
        hi = np.broadcast_to(np.asarray(self.upper, dtype=float), (n,)).copy()
        if np.any(lo >= hi):
            raise ValueError("every lower bound must be below its upper bound")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_evals < n + 2:
            raise ValueError(f"max_evals must be at least {n + 2}")
        return lo, hi


@dataclass
class OptimResult:
    x: np.ndarray
    fun: float
    evals: int
    converged: bool


class _Budget(Exception):
    pass


class _Objective:
    """Counts calls, checks feasibility, and tracks the running best."""

    def __init__(self, f, lo, hi, max_evals):
        self.f, self.lo, self.hi, self.max_evals = f, lo, hi, max_evals
        self.evals = 0
        self.best_x: np.ndarray | None = None
        self.best_f = np.inf
        self.history: list[float] = []

    def __call__(self, x: np.ndarray) -> float:
        if self.evals >= self.max_evals:
            raise _Budget
        assert np.all(x >= self.lo) and np.all(x <= self.hi), "point left the box"
        self.evals += 1
        v = float(self.f(x.copy()))
        if v < self.best_f:
            self.best_f, self.best_x = v, x.copy()
        self.history.append(self.best_f)
        return v


def _initial_simplex(x0, step, lo, hi):
    pts = [x0]
    for i in range(len(x0)):
        p = x0.copy()
        # step inward when the forward vertex would cross the upper bound
        p[i] = x0[i] + step if x0[i] + step <= hi[i] else x0[i] - step
        pts.append(np.clip(p, lo, hi))
    return pts


def _diameter(pts) -> float:
    return max(float(np.max(np.abs(p - pts[0]))) for p in pts[1:])


def _nelder_mead(obj: _Objective, x0, step, tol, lo, hi) -> bool:
    pts = _initial_simplex(x0, step, lo, hi)
    vals = [obj(p) for p in pts]
    while True:
        order = sorted(range(len(pts)), key=lambda i: vals[i])  # stable: ties keep insertion order
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        if _diameter(pts) < tol:
            return True
        centroid = np.mean(pts[:-1], axis=0)
        xr = np.clip(centroid + _ALPHA * (centroid - pts[-1]), lo, hi)
        fr = obj(xr)
        if vals[0] <= fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[0]:
            xe = np.clip(centroid + _GAMMA * (xr - centroid), lo, hi)
            fe = obj(xe)
            pts[-1], vals[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue
        if fr < vals[-1]:
            xc = np.clip(centroid + _RHO * (xr - centroid), lo, hi)
            fc = obj(xc)
            if fc <= fr:
                pts[-1], vals[-1] = xc, fc
                continue
        else:
            xc = np.clip(centroid + _RHO * (pts[-1] - centroid), lo, hi)
            fc = obj(xc)
            if fc < vals[-1]:
                pts[-1], vals[-1] = xc, fc
                continue
        for i in range(1, len(pts)):
            pts[i] = np.clip(pts[0] + _SIGMA * (pts[i] - pts[0]), lo, hi)
            vals[i] = obj(pts[i])


def minimize(f: Callable[[np.ndarray], float], x0: Sequence[float],
             cfg: OptimConfig | None = None) -> OptimResult:
    """Minimize ``f`` inside the box, starting from ``x0`` (clamped).

    After the simplex collapses, up to ``cfg.restarts`` fresh simplices are
    built around the best point; the run stops early once a restart fails to
    improve on it.
    """
    cfg = cfg or OptimConfig()
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    lo, hi = cfg.bounds(len(x0))
    x0 = np.clip(x0, lo, hi)
    obj = _Objective(f, lo, hi, cfg.max_evals)
    converged = False
    try:
        start = x0
        for _ in range(cfg.restarts + 1):
            before = obj.best_f
            converged = _nelder_mead(obj, start, cfg.step, cfg.tol, lo, hi)
            if not before - obj.best_f > cfg.tol * cfg.tol:
                break
            start = obj.best_x
    except _Budget:
        converged = False
    return OptimResult(obj.best_x.copy(), obj.best_f, obj.evals, converged)
