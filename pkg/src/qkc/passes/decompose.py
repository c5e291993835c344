"""Rewrite standard gates into the target's native gate set.

Every rule is an identity up to global phase; global phase is not tracked.
"""

from __future__ import annotations

import math
from dataclasses import replace

from ..errors import NotDecomposable, PassError
from ..ir.module import Imm, Instr, QKernel
from .target import TargetConfig

PI = math.pi


def _g(gate, *qubits, theta=None):
    return Instr(gate, tuple(qubits), None, None if theta is None else Imm(theta))


def _ccnot(a, b, c):
    return [
        _g("H", c), _g("CNOT", b, c), _g("TDG", c), _g("CNOT", a, c), _g("T", c),
        _g("CNOT", b, c), _g("TDG", c), _g("CNOT", a, c), _g("T", b), _g("T", c),
        _g("H", c), _g("CNOT", a, b), _g("T", a), _g("TDG", b), _g("CNOT", a, b),
    ]


# gate -> function(qubits) -> replacement sequence (circuit order)
RULES = {
    "X": lambda q: [_g("RX", *q, theta=PI)],
    "Y": lambda q: [_g("RY", *q, theta=PI)],
    "Z": lambda q: [_g("RZ", *q, theta=PI)],
    "S": lambda q: [_g("RZ", *q, theta=PI / 2)],
    "SDG": lambda q: [_g("RZ", *q, theta=-PI / 2)],
    "T": lambda q: [_g("RZ", *q, theta=PI / 4)],
    "TDG": lambda q: [_g("RZ", *q, theta=-PI / 4)],
    "H": lambda q: [_g("RZ", *q, theta=PI), _g("RY", *q, theta=PI / 2)],
    "CNOT": lambda q: [_g("H", q[1]), _g("CZ", q[0], q[1]), _g("H", q[1])],
    "CZ": lambda q: [_g("H", q[1]), _g("CNOT", q[0], q[1]), _g("H", q[1])],
    "SWAP": lambda q: [_g("CNOT", q[0], q[1]), _g("CNOT", q[1], q[0]), _g("CNOT", q[0], q[1])],
    "CCNOT": lambda q: _ccnot(*q),
}

_MAX_DEPTH = 8


def expand(ins: Instr, native: frozenset[str], depth: int = 0) -> list[Instr]:
    if ins.gate in native:
        return [ins]
    rule = RULES.get(ins.gate)
    if rule is None or depth >= _MAX_DEPTH:
        raise NotDecomposable(f"{ins.gate} cannot be decomposed into native set {sorted(native)}")
    out = []
    for sub in rule(ins.qubits):
        out.extend(expand(sub, native, depth + 1))
    return out


def decompose_to_native(k: QKernel, t: TargetConfig) -> QKernel:
    if k.calls():
        raise PassError(f"kernel {k.name!r} must be inlined before decomposition")
    body = []
    for ins in k.instructions:
        body.extend(expand(ins, t.native))
    return replace(k, body=body, scheduled=False, start_times=None)
