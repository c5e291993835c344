"""Human-readable assembly (``.qs``) for mapped kernels."""

from __future__ import annotations

from ..errors import UnencodableGate
from ..ir.module import Imm, Instr, QKernel, Sym
from .elfq import DEFAULT_ALIGN
from .encoding import OPCODES


def format_asm_instr(ins: Instr) -> str:
    if ins.gate not in OPCODES:
        raise UnencodableGate(f"no opcode for gate {ins.gate!r}")
    if any(not isinstance(q, int) for q in ins.qubits):
        raise UnencodableGate(f"{ins.gate}: kernel is not mapped to physical qubits")
    ops = [f"q{q}" for q in ins.qubits]
    if isinstance(ins.param, Imm):
        ops.append(repr(float(ins.param.value)))
    elif isinstance(ins.param, Sym):
        ops.append(f"${ins.param.array}[{ins.param.index}]")
    text = f"{ins.gate} {', '.join(ops)}"
    if ins.cbit is not None:
        text += f" -> c{ins.cbit}"
    return text


def emit_asm(k: QKernel, kernel_id: int = 0, align: int = DEFAULT_ALIGN) -> str:
    lines = [f"@kernel {k.name} id={kernel_id} align={align}"]
    for op in k.body:
        if not isinstance(op, Instr):
            raise UnencodableGate(f"kernel {k.name!r} still contains call markers")
        lines.append(format_asm_instr(op))
    return "\n".join(lines) + "\n"


def emit_module_asm(m) -> str:
    return "".join(emit_asm(k, i) for i, k in enumerate(m.kernels))
