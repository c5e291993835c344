from .gates import GateDef, ROTATIONS, by_identifier, gate_matrix, gate_names, gatedb, lookup
from .module import Call, Imm, Instr, QKernel, QModule, QRef, Sym, validate, validate_kernel
from .text import format_instr, parse_ir, print_ir

__all__ = [
    "GateDef", "ROTATIONS", "by_identifier", "gate_matrix", "gate_names", "gatedb", "lookup",
    "Call", "Imm", "Instr", "QKernel", "QModule", "QRef", "Sym", "validate", "validate_kernel",
    "format_instr", "parse_ir", "print_ir",
]
