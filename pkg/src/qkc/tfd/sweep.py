"""Warm-started inverse-temperature sweep of the TFD ansatz."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from typing import IO, Protocol, Sequence

import numpy as np

from ..driver import CompileResult, compile_source
from ..errors import ConfigError
from ..optim import OptimConfig, minimize
from ..runtime import DeviceConfig, Session, open_session
from .cost import total_cost
from .oracle import MAX_ORACLE_L, reference_pipeline, state_fidelity
from .program import NUM_ANGLES, generate_source

PARAM_ARRAY = "QVarParams"
CSV_COLUMNS = ("beta_idx", "beta", "gamma1", "gamma2", "alpha1", "alpha2", "cost", "fidelity", "evals")


@dataclass
class TfdConfig:
    L: int = 2
    g: float = 1.0
    beta_from: int = -30
    beta_to: int = 30
    optim: OptimConfig = field(default_factory=OptimConfig)
    seed: int | None = 0
    with_oracle: bool = True

    def __post_init__(self):
        if not isinstance(self.L, int) or self.L < 2:
            raise ConfigError(f"L must be an integer >= 2, got {self.L!r}")
        if self.g != 1.0:
            raise ConfigError("only g = 1 is supported")
        if self.beta_to < self.beta_from:
            raise ConfigError(f"empty beta range {self.beta_from}..{self.beta_to}")
        if self.with_oracle and self.L > MAX_ORACLE_L:
            raise ConfigError(f"the fidelity oracle is limited to L <= {MAX_ORACLE_L}")

    @property
    def beta_indices(self) -> range:
        return range(self.beta_from, self.beta_to + 1)


def beta_of(idx: int) -> float:
    return 10.0 ** (idx / 10)


@dataclass
class SweepRow:
    beta_idx: int
    beta: float
    angles: tuple[float, float, float, float]  # gamma1, gamma2, alpha1, alpha2
    cost: float
    fidelity: float | None
    evals: int


class RegisterBackend(Protocol):
    def registers(self, angles: Sequence[float]) -> tuple[np.ndarray, np.ndarray]: ...


class ToolchainBackend:
    """Runs tfd_Z and tfd_X through a loaded image, patching angles per call.

    With ``recompile=True`` every evaluation compiles the program afresh and
    loads it into a new session instead.
    """

    def __init__(self, L: int, seed: int | None = 0, session: Session | None = None,
                 recompile: bool = False):
        self.L, self.seed, self.recompile = L, seed, recompile
        self.compile_count = 0
        self.compile_seconds = 0.0
        self._retired_dispatches = 0
        self._retired_seconds = 0.0
        self.session = session if session is not None else self._load()

    def _load(self) -> Session:
        res = compile_source(generate_source(self.L))
        self.compile_count += 1
        self.compile_seconds += res.seconds
        return open_session(res.image, DeviceConfig(seed=self.seed), compile_count=self.compile_count,
                            compile_seconds=self.compile_seconds)

    @property
    def dispatches(self) -> int:
        return self._retired_dispatches + self.session.stats.dispatches

    @property
    def dispatch_seconds(self) -> float:
        return self._retired_seconds + self.session.stats.total_dispatch_seconds

    def registers(self, angles: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        if self.recompile:
            self._retired_dispatches += self.session.stats.dispatches
            self._retired_seconds += self.session.stats.total_dispatch_seconds
            self.session = self._load()
        s = self.session
        s.set_params(PARAM_ARRAY, angles)
        s.call_kernel("tfd_Z")
        p_z = s.get_probability_register()
        s.call_kernel("tfd_X")
        return p_z, s.get_probability_register()


class ReferenceBackend:
    """Registers straight from dense linear algebra; no compiler involved."""

    def __init__(self, L: int):
        self.L = L

    def registers(self, angles):
        return reference_pipeline(self.L, angles)


@dataclass
class SweepResult:
    rows: list[SweepRow]
    evals: int
    wall_seconds: float


def run_sweep(cfg: TfdConfig, backend: RegisterBackend | None = None,
              x0: Sequence[float] | None = None) -> SweepResult:
    """Minimize the cost at each beta, starting from the previous optimum."""
    backend = backend or ToolchainBackend(cfg.L, cfg.seed)
    t0 = time.perf_counter()
    x = np.zeros(NUM_ANGLES) if x0 is None else np.asarray(x0, dtype=float)
    rows: list[SweepRow] = []
    total = 0
    for idx in cfg.beta_indices:
        beta = beta_of(idx)

        def objective(m, beta=beta):
            p_z, p_x = backend.registers(m)
            return total_cost(beta, p_z, p_x, cfg.L)

        res = minimize(objective, x, cfg.optim)
        x = res.x
        total += res.evals
        fid = state_fidelity(beta, cfg.L, x) if cfg.with_oracle else None
        rows.append(SweepRow(idx, beta, tuple(float(v) for v in x), res.fun, fid, res.evals))
    return SweepResult(rows, total, time.perf_counter() - t0)


def compile_tfd(L: int, opt_level: int = 1) -> CompileResult:
    return compile_source(generate_source(L), opt_level=opt_level)


def _g(v: float) -> str:
    return "%.12g" % v


def write_csv(rows: Sequence[SweepRow], out: IO[str], with_fidelity: bool = True):
    cols = [c for c in CSV_COLUMNS if with_fidelity or c != "fidelity"]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        vals = [str(r.beta_idx), _g(r.beta), *map(_g, r.angles), _g(r.cost)]
        if with_fidelity:
            vals.append(_g(r.fidelity) if r.fidelity is not None else "")
        vals.append(str(r.evals))
        w.writerow(vals)
