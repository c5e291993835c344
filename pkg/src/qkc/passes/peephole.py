"""Peephole optimization over a single straight-line kernel.

Two instructions are adjacent when no other instruction touches any of
their qubits in between. Rules:

* identical hermitian unitaries on identical operands cancel;
* same-axis rotations with immediate angles merge (angle sum, mod 4*pi);
* rotations whose immediate angle is 0 mod 4*pi disappear.

Symbolic rotations are opaque: never merged, never moved.
"""

from __future__ import annotations

import math
from dataclasses import replace

from ..errors import PassError
from ..ir.gates import ROTATIONS, lookup
from ..ir.module import Imm, Instr, QKernel

FOUR_PI = 4 * math.pi
ZERO_TOL = 1e-12


def _normalize(theta: float) -> float:
    return math.remainder(theta, FOUR_PI)


def _is_zero_rotation(ins: Instr) -> bool:
    return (ins.gate in ROTATIONS and isinstance(ins.param, Imm)
            and abs(_normalize(ins.param.value)) <= ZERO_TOL)


def peephole_optimize(k: QKernel) -> QKernel:
    if k.calls():
        raise PassError(f"kernel {k.name!r} must be inlined before peephole optimization")
    out: list[Instr | None] = []
    history: dict[object, list[int]] = {}  # qubit -> indices into out, oldest first

    def previous(ins: Instr) -> int | None:
        idxs = {history[q][-1] if history.get(q) else None for q in ins.qubits}
        if len(idxs) != 1:
            return None
        j = idxs.pop()
        if j is None or out[j].qubits != ins.qubits:
            return None
        return j

    def drop(j: int):
        for q in out[j].qubits:
            history[q].pop()
        out[j] = None

    for ins in k.instructions:
        if _is_zero_rotation(ins):
            continue
        j = previous(ins)
        if j is not None:
            prev = out[j]
            g = lookup(ins.gate)
            if (prev.gate == ins.gate and g.is_unitary and g.is_hermitian
                    and not g.is_parametric and prev.cbit is None):
                drop(j)
                continue
            if (prev.gate == ins.gate and ins.gate in ROTATIONS
                    and isinstance(prev.param, Imm) and isinstance(ins.param, Imm)):
                theta = _normalize(prev.param.value + ins.param.value)
                if abs(theta) <= ZERO_TOL:
                    drop(j)
                else:
                    out[j] = replace(prev, param=Imm(theta))
                continue
        out.append(ins)
        for q in ins.qubits:
            history.setdefault(q, []).append(len(out) - 1)

    body = [ins for ins in out if ins is not None]
    return replace(k, body=body, scheduled=False, start_times=None)
