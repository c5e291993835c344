from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from ..errors import PassError
from ..ir.module import QModule, validate
from .decompose import decompose_to_native
from .inline import inline_kernels
from .mapping import map_qubits
from .peephole import peephole_optimize
from .schedule import kernel_depth, schedule_asap
from .target import TargetConfig


@dataclass
class PassStats:
    name: str
    instructions: int
    two_qubit_gates: int


@dataclass
class PassReport:
    passes: list[PassStats] = field(default_factory=list)
    depths: dict[str, int] = field(default_factory=dict)
    swaps_inserted: int = 0

    @property
    def depth(self) -> int:
        return max(self.depths.values(), default=0)

    def record(self, name: str, m: QModule):
        ins = [i for k in m.kernels for i in k.instructions]
        self.passes.append(PassStats(name, len(ins), sum(1 for i in ins if len(i.qubits) >= 2)))

    def stats(self, name: str) -> PassStats:
        for p in self.passes:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passes": [asdict(p) for p in self.passes],
            "depths": dict(self.depths),
            "depth": self.depth,
            "swaps_inserted": self.swaps_inserted,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def default_target(m: QModule) -> TargetConfig:
    return TargetConfig(max(1, m.num_program_qubits))


def _per_kernel(m: QModule, fn) -> QModule:
    return QModule(dict(m.qbits), dict(m.cbits), dict(m.params), [fn(k) for k in m.kernels], m.target)


def run_pipeline(m: QModule, t: TargetConfig | None = None, opt_level: int = 1) -> tuple[QModule, PassReport]:
    """inline -> [peephole] -> decompose -> [peephole] -> map -> schedule."""
    if opt_level not in (0, 1):
        raise ValueError(f"opt_level must be 0 or 1, got {opt_level}")
    errors = validate(m)
    if errors:
        raise PassError("invalid module: " + "; ".join(errors))
    t = t or default_target(m)
    report = PassReport()
    report.record("input", m)

    m = inline_kernels(m)
    report.record("inline", m)
    if opt_level >= 1:
        m = _per_kernel(m, peephole_optimize)
        report.record("peephole", m)
    m = _per_kernel(m, lambda k: decompose_to_native(k, t))
    report.record("decompose", m)
    if opt_level >= 1:
        m = _per_kernel(m, peephole_optimize)
        report.record("peephole2", m)

    mapped = []
    for k in m.kernels:
        mk, swaps = map_qubits(k, t, m)
        report.swaps_inserted += swaps
        mapped.append(mk)
    m = QModule(dict(m.qbits), dict(m.cbits), dict(m.params), mapped, t)
    report.record("map", m)

    m = _per_kernel(m, lambda k: schedule_asap(k, t))
    report.record("schedule", m)
    report.depths = {k.name: kernel_depth(k, t) for k in m.kernels}
    return m, report
