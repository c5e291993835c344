"""Name resolution, arity checks and call-graph checks for parsed programs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import (
    ArityMismatch,
    DuplicateDefinition,
    IndexOutOfRange,
    RecursiveKernelCall,
    SemanticError,
    TypeMismatch,
    UndefinedSymbol,
)
from ..ir.gates import gate_names, lookup
from . import ast


@dataclass
class SymbolTable:
    qbits: dict[str, int] = field(default_factory=dict)
    cbits: dict[str, int] = field(default_factory=dict)
    params: dict[str, int] = field(default_factory=dict)
    consts: dict[str, int] = field(default_factory=dict)
    kernels: dict[str, ast.KernelDecl] = field(default_factory=dict)

    def kind_of(self, name: str) -> str | None:
        for kind, table in (("qbit", self.qbits), ("cbit", self.cbits), ("shared", self.params),
                            ("const", self.consts), ("kernel", self.kernels)):
            if name in table:
                return kind
        return None

    def array_length(self, name: str) -> int:
        return {**self.qbits, **self.cbits, **self.params}[name]


# --- expression evaluation (shared with lowering) ---

def free_names(e: ast.Expr) -> set[str]:
    if isinstance(e, ast.Name):
        return {e.name}
    if isinstance(e, ast.ElemRef):
        return {e.name} | free_names(e.index)
    if isinstance(e, ast.Neg):
        return free_names(e.operand)
    if isinstance(e, ast.BinOp):
        return free_names(e.left) | free_names(e.right)
    return set()


def _cdiv(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def evaluate(e: ast.Expr, env: dict[str, int]) -> int | float:
    """Fold ``e`` with C-like semantics: int/int truncates, any float promotes."""
    if isinstance(e, ast.IntLit):
        return e.value
    if isinstance(e, ast.FloatLit):
        return e.value
    if isinstance(e, ast.Pi):
        return math.pi
    if isinstance(e, ast.Name):
        if e.name not in env:
            raise UndefinedSymbol(e.name, *e.span)
        return env[e.name]
    if isinstance(e, ast.Neg):
        return -evaluate(e.operand, env)
    if isinstance(e, ast.ElemRef):
        raise TypeMismatch(f"array element {e.name}[...] is not a compile-time value", *e.span)
    a, b = evaluate(e.left, env), evaluate(e.right, env)
    both_int = isinstance(a, int) and isinstance(b, int)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if b == 0:
        raise SemanticError("division by zero", *e.span)
    if e.op == "/":
        return _cdiv(a, b) if both_int else a / b
    if not both_int:
        raise TypeMismatch("'%' requires integer operands", *e.span)
    return a - b * _cdiv(a, b)


def eval_int(e: ast.Expr, env: dict[str, int], what: str = "expression") -> int:
    v = evaluate(e, env)
    if not isinstance(v, int):
        raise TypeMismatch(f"{what} must be an integer", *e.span)
    return v


# --- analysis ---

class _Analyzer:
    def __init__(self):
        self.st = SymbolTable()
        self.reserved = gate_names()
        self.calls: dict[str, list[tuple[str, ast.Span]]] = {}

    def declare(self, name: str, span):
        if name in self.reserved or self.st.kind_of(name) is not None:
            raise DuplicateDefinition(name, *span)

    def run(self, prog: ast.Program) -> SymbolTable:
        st = self.st
        for d in prog.decls:
            self.declare(d.name, d.span)
            if isinstance(d, ast.ConstDecl):
                self._const_only(d.value)
                st.consts[d.name] = eval_int(d.value, st.consts, "constant")
            elif isinstance(d, ast.ArrayDecl):
                self._const_only(d.length)
                n = eval_int(d.length, st.consts, "array length")
                if n < 1:
                    raise SemanticError(f"array {d.name!r} must have length >= 1, got {n}", *d.span)
                {"qbit": st.qbits, "cbit": st.cbits, "shared": st.params}[d.kind][d.name] = n
            else:
                st.kernels[d.name] = d
        for k in prog.kernels:
            self.calls[k.name] = []
            self._block(k.name, k.body, {})
        self._check_acyclic()
        return st

    def _const_only(self, e: ast.Expr):
        for name in sorted(free_names(e)):
            if name not in self.st.consts:
                if self.st.kind_of(name) is None:
                    raise UndefinedSymbol(name, *e.span)
                raise TypeMismatch(f"{name!r} is not an integer constant", *e.span)

    def _block(self, kname: str, stmts, loopvars: dict[str, ast.Span]):
        for s in stmts:
            if isinstance(s, ast.ForLoop):
                if s.var in loopvars or s.var in self.reserved or self.st.kind_of(s.var) is not None:
                    raise DuplicateDefinition(s.var, *s.span)
                for bound in (s.start, s.stop):
                    self._int_expr(bound, loopvars)
                self._block(kname, s.body, {**loopvars, s.var: s.span})
            elif isinstance(s, ast.KernelCall):
                if s.kernel not in self.st.kernels:
                    raise UndefinedSymbol(s.kernel, *s.span)
                self.calls[kname].append((s.kernel, s.span))
            else:
                self._gate_call(s, loopvars)

    def _int_expr(self, e: ast.Expr, loopvars):
        """Check an integer expression over constants and loop variables."""
        if isinstance(e, (ast.FloatLit, ast.Pi)):
            raise TypeMismatch("integer expression expected", *e.span)
        if isinstance(e, ast.ElemRef):
            raise TypeMismatch(f"array element {e.name}[...] in integer expression", *e.span)
        if isinstance(e, ast.Name):
            if e.name not in loopvars and e.name not in self.st.consts:
                if self.st.kind_of(e.name) is None:
                    raise UndefinedSymbol(e.name, *e.span)
                raise TypeMismatch(f"{e.name!r} is not an integer value", *e.span)
        elif isinstance(e, ast.Neg):
            self._int_expr(e.operand, loopvars)
        elif isinstance(e, ast.BinOp):
            self._int_expr(e.left, loopvars)
            self._int_expr(e.right, loopvars)

    def _float_expr(self, e: ast.Expr, loopvars):
        if isinstance(e, ast.ElemRef):
            kind = self.st.kind_of(e.name)
            if kind is None:
                raise UndefinedSymbol(e.name, *e.span)
            raise TypeMismatch(f"{kind} element {e.name}[...] cannot appear inside an angle expression",
                               *e.span)
        if isinstance(e, ast.Name):
            if e.name not in loopvars and e.name not in self.st.consts:
                if self.st.kind_of(e.name) is None:
                    raise UndefinedSymbol(e.name, *e.span)
                raise TypeMismatch(f"{e.name!r} cannot appear in an angle expression", *e.span)
        elif isinstance(e, ast.Neg):
            self._float_expr(e.operand, loopvars)
        elif isinstance(e, ast.BinOp):
            self._float_expr(e.left, loopvars)
            self._float_expr(e.right, loopvars)

    def _element(self, e: ast.Expr, kind: str, table: dict[str, int], loopvars, gate: str):
        if not isinstance(e, ast.ElemRef):
            raise TypeMismatch(f"{gate}: expected a {kind} element, got an expression", *e.span)
        actual = self.st.kind_of(e.name)
        if actual is None:
            raise UndefinedSymbol(e.name, *e.span)
        if actual != kind:
            raise TypeMismatch(f"{gate}: {e.name!r} is a {actual}, expected {kind}", *e.span)
        self._int_expr(e.index, loopvars)
        if not (free_names(e.index) & set(loopvars)):
            idx = eval_int(e.index, self.st.consts, "index")
            if not 0 <= idx < table[e.name]:
                raise IndexOutOfRange(e.name, idx, table[e.name], *e.span)

    def _gate_call(self, s: ast.GateCall, loopvars):
        g = lookup(s.gate)
        has_cbit = s.gate == "MEASZ"
        expected = g.num_qubits + int(has_cbit) + g.num_params
        if len(s.args) != expected:
            found_q = sum(1 for a in s.args
                          if isinstance(a, ast.ElemRef) and a.name in self.st.qbits)
            if found_q != g.num_qubits:
                raise ArityMismatch(s.gate, g.num_qubits, found_q, "qubits", *s.span)
            raise ArityMismatch(s.gate, expected, len(s.args), "arguments", *s.span)
        args = list(s.args)
        for a in args[:g.num_qubits]:
            self._element(a, "qbit", self.st.qbits, loopvars, s.gate)
        rest = args[g.num_qubits:]
        if has_cbit:
            self._element(rest.pop(0), "cbit", self.st.cbits, loopvars, s.gate)
        for a in rest:
            if isinstance(a, ast.ElemRef) and self.st.kind_of(a.name) == "shared":
                self._element(a, "shared", self.st.params, loopvars, s.gate)
            else:
                self._float_expr(a, loopvars)

    def _check_acyclic(self):
        state: dict[str, int] = {}
        path: list[str] = []

        def visit(k: str):
            state[k] = 1
            path.append(k)
            for callee, span in self.calls.get(k, []):
                if state.get(callee) == 1:
                    cycle = path[path.index(callee):] + [callee]
                    raise RecursiveKernelCall(cycle, *span)
                if callee not in state:
                    visit(callee)
            path.pop()
            state[k] = 2

        for k in self.calls:
            if k not in state:
                visit(k)


def analyze(prog: ast.Program) -> SymbolTable:
    return _Analyzer().run(prog)
