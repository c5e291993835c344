"""Syntax tree for ``.qk`` programs, plus a pretty-printer that re-parses to the same tree.

Source spans are carried on nodes but excluded from equality so that a
printed-and-reparsed tree compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

Span = tuple[int, int]  # (line, column)
_NOSPAN: Span = (0, 0)


def _span():
    return field(default=_NOSPAN, compare=False, repr=False)


# --- expressions ---

@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = _span()


@dataclass(frozen=True)
class FloatLit:
    value: float
    span: Span = _span()


@dataclass(frozen=True)
class Pi:
    span: Span = _span()


@dataclass(frozen=True)
class Name:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class ElemRef:
    """``name[index]``: a qbit, cbit, or shared-parameter element."""

    name: str
    index: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = _span()


Expr = Union[IntLit, FloatLit, Pi, Name, ElemRef, Neg, BinOp]


# --- statements ---

@dataclass(frozen=True)
class GateCall:
    gate: str
    args: tuple[Expr, ...]
    span: Span = _span()


@dataclass(frozen=True)
class KernelCall:
    kernel: str
    span: Span = _span()


@dataclass(frozen=True)
class ForLoop:
    var: str
    start: Expr
    stop: Expr
    body: tuple["Stmt", ...]
    span: Span = _span()


Stmt = Union[GateCall, KernelCall, ForLoop]


# --- declarations ---

@dataclass(frozen=True)
class ArrayDecl:
    kind: str  # "qbit" | "cbit" | "shared"
    name: str
    length: Expr
    span: Span = _span()


@dataclass(frozen=True)
class ConstDecl:
    name: str
    value: Expr
    span: Span = _span()


@dataclass(frozen=True)
class KernelDecl:
    name: str
    body: tuple[Stmt, ...]
    span: Span = _span()


Decl = Union[ArrayDecl, ConstDecl, KernelDecl]


@dataclass(frozen=True)
class Program:
    decls: tuple[Decl, ...]

    @property
    def kernels(self) -> list[KernelDecl]:
        return [d for d in self.decls if isinstance(d, KernelDecl)]


# --- pretty printer ---

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "%": 2}


def format_expr(e: Expr, parent: int = 0, right: bool = False) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, FloatLit):
        return repr(float(e.value))
    if isinstance(e, Pi):
        return "pi"
    if isinstance(e, Name):
        return e.name
    if isinstance(e, ElemRef):
        return f"{e.name}[{format_expr(e.index)}]"
    if isinstance(e, Neg):
        inner = format_expr(e.operand, 3)
        return f"-{inner}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        text = f"{format_expr(e.left, p)} {e.op} {format_expr(e.right, p, True)}"
        if p < parent or (right and p == parent):
            return f"({text})"
        return text
    raise TypeError(f"not an expression: {e!r}")


def _format_block(stmts, indent: int) -> list[str]:
    pad = "    " * indent
    out = []
    for s in stmts:
        if isinstance(s, GateCall):
            out.append(f"{pad}{s.gate}({', '.join(format_expr(a) for a in s.args)});")
        elif isinstance(s, KernelCall):
            out.append(f"{pad}{s.kernel}();")
        else:
            out.append(f"{pad}for {s.var} in {format_expr(s.start)}..{format_expr(s.stop)} {{")
            out.extend(_format_block(s.body, indent + 1))
            out.append(f"{pad}}}")
    return out


def format_program(prog: Program) -> str:
    lines: list[str] = []
    for d in prog.decls:
        if isinstance(d, ArrayDecl):
            kw = "shared double" if d.kind == "shared" else d.kind
            lines.append(f"{kw} {d.name}[{format_expr(d.length)}];")
        elif isinstance(d, ConstDecl):
            lines.append(f"const int {d.name} = {format_expr(d.value)};")
        else:
            lines.append(f"kernel {d.name}() {{")
            lines.extend(_format_block(d.body, 1))
            lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")
