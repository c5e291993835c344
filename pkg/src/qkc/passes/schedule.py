from __future__ import annotations

from dataclasses import replace

from ..ir.module import QKernel
from .target import TargetConfig


def schedule_asap(k: QKernel, t: TargetConfig) -> QKernel:
    """Annotate every instruction with its earliest start cycle.

    An instruction waits for the previous user of each of its qubits (and of
    its cbit, for measurements). Program order is kept per resource.
    """
    ready: dict[object, int] = {}
    starts = []
    for ins in k.instructions:
        res = [("q", q) for q in ins.qubits]
        if ins.cbit is not None:
            res.append(("c", ins.cbit))
        start = max((ready.get(r, 0) for r in res), default=0)
        end = start + t.duration(ins.gate)
        for r in res:
            ready[r] = end
        starts.append(start)
    return replace(k, body=list(k.instructions), scheduled=True, start_times=starts)


def kernel_depth(k: QKernel, t: TargetConfig) -> int:
    if not k.start_times:
        return 0
    return max(s + t.duration(ins.gate) for s, ins in zip(k.start_times, k.body))
