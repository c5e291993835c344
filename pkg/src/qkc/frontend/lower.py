"""Lowering from the checked syntax tree to flat IR: loops unrolled, constants folded."""

from __future__ import annotations

from ..errors import (
    IndexOutOfRange,
    KernelTooLarge,
    LoopBoundNegative,
    NonConstantLoopBound,
    SemanticError,
)
from ..ir.gates import lookup
from ..ir.module import Call, Imm, Instr, QKernel, QModule, QRef, Sym
from . import ast
from .analysis import SymbolTable, eval_int, evaluate, free_names

MAX_KERNEL_SIZE = 1 << 20


def _bounds(loop: ast.ForLoop, consts: dict[str, int]) -> tuple[int, int]:
    out = []
    for e in (loop.start, loop.stop):
        if free_names(e) - set(consts):
            raise NonConstantLoopBound(f"loop bound for {loop.var!r} is not a compile-time constant", *e.span)
        v = eval_int(e, consts, "loop bound")
        if v < 0:
            raise LoopBoundNegative(f"loop bound {v} for {loop.var!r} is negative", *e.span)
        out.append(v)
    return out[0], out[1]


def _static_size(stmts, consts: dict[str, int]) -> int:
    total = 0
    for s in stmts:
        if isinstance(s, ast.ForLoop):
            a, b = _bounds(s, consts)
            inner = _static_size(s.body, consts)
            total += max(0, b - a) * inner
        else:
            total += 1
        if total > MAX_KERNEL_SIZE:
            return total
    return total


class _Lowerer:
    def __init__(self, st: SymbolTable):
        self.st = st

    def _ref(self, e: ast.ElemRef, env) -> tuple[str, int]:
        idx = eval_int(e.index, env, "index")
        n = self.st.array_length(e.name)
        if not 0 <= idx < n:
            raise IndexOutOfRange(e.name, idx, n, *e.span)
        return e.name, idx

    def _gate(self, s: ast.GateCall, env) -> Instr:
        g = lookup(s.gate)
        args = list(s.args)
        qubits = tuple(QRef(*self._ref(a, env)) for a in args[:g.num_qubits])
        if len(set(qubits)) != len(qubits):
            raise SemanticError(f"{s.gate}: duplicate qubit operand", *s.span)
        rest = args[g.num_qubits:]
        cbit = QRef(*self._ref(rest.pop(0), env)) if s.gate == "MEASZ" else None
        param = None
        if rest:
            a = rest[0]
            if isinstance(a, ast.ElemRef):
                param = Sym(*self._ref(a, env))
            else:
                param = Imm(float(evaluate(a, env)))
        return Instr(s.gate, qubits, cbit, param)

    def _emit(self, stmts, env, out: list):
        for s in stmts:
            if isinstance(s, ast.ForLoop):
                a, b = _bounds(s, self.st.consts)
                for i in range(a, b):
                    self._emit(s.body, {**env, s.var: i}, out)
            elif isinstance(s, ast.KernelCall):
                out.append(Call(s.kernel))
            else:
                out.append(self._gate(s, env))

    def kernel(self, k: ast.KernelDecl) -> QKernel:
        size = _static_size(k.body, self.st.consts)
        if size > MAX_KERNEL_SIZE:
            raise KernelTooLarge(f"kernel {k.name!r} unrolls to more than {MAX_KERNEL_SIZE} instructions",
                                 *k.span)
        body: list = []
        self._emit(k.body, dict(self.st.consts), body)
        return QKernel(k.name, body)


def lower(prog: ast.Program, st: SymbolTable) -> QModule:
    lw = _Lowerer(st)
    return QModule(
        qbits=dict(st.qbits),
        cbits=dict(st.cbits),
        params=dict(st.params),
        kernels=[lw.kernel(k) for k in prog.kernels],
    )
