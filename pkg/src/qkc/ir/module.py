"""IR data types: instructions, kernels, modules, and structural validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Union

from .gates import lookup

if TYPE_CHECKING:
    from ..passes.target import TargetConfig


@dataclass(frozen=True)
class QRef:
    """Element ``index`` of a declared qbit or cbit array."""

    array: str
    index: int


@dataclass(frozen=True)
class Imm:
    value: float


@dataclass(frozen=True)
class Sym:
    """Reference to element ``index`` of a shared parameter array."""

    array: str
    index: int


Param = Union[Imm, Sym, None]
# program qubits are QRefs; after mapping they are physical ints
Operand = Union[QRef, int]


@dataclass(frozen=True)
class Instr:
    gate: str
    qubits: tuple[Operand, ...]
    cbit: Operand | None = None
    param: Param = None

    def with_qubits(self, qubits, cbit=None) -> "Instr":
        return Instr(self.gate, tuple(qubits), self.cbit if cbit is None else cbit, self.param)


@dataclass(frozen=True)
class Call:
    kernel: str


@dataclass
class QKernel:
    name: str
    body: list = field(default_factory=list)
    inlined: bool = False
    mapped: bool = False
    scheduled: bool = False
    start_times: list[int] | None = None
    placement: list[int] | None = None

    @property
    def instructions(self) -> list[Instr]:
        return [op for op in self.body if isinstance(op, Instr)]

    def calls(self) -> list[str]:
        return [op.kernel for op in self.body if isinstance(op, Call)]


@dataclass
class QModule:
    qbits: dict[str, int] = field(default_factory=dict)
    cbits: dict[str, int] = field(default_factory=dict)
    params: dict[str, int] = field(default_factory=dict)
    kernels: list[QKernel] = field(default_factory=list)
    target: "TargetConfig | None" = None

    def kernel(self, name: str) -> QKernel:
        for k in self.kernels:
            if k.name == name:
                return k
        raise KeyError(name)

    @property
    def num_program_qubits(self) -> int:
        return sum(self.qbits.values())

    @property
    def num_program_cbits(self) -> int:
        return sum(self.cbits.values())

    def qubit_offsets(self) -> dict[str, int]:
        return _offsets(self.qbits)

    def cbit_offsets(self) -> dict[str, int]:
        return _offsets(self.cbits)


def _offsets(decls: dict[str, int]) -> dict[str, int]:
    out, acc = {}, 0
    for name, n in decls.items():
        out[name] = acc
        acc += n
    return out


def _check_operand(op, decls: dict[str, int], kind: str, limit: int | None, mapped: bool) -> str | None:
    if isinstance(op, QRef):
        if mapped:
            return f"{kind} operand {op.array}[{op.index}] not mapped"
        if op.array not in decls:
            return f"unknown {kind} array {op.array!r}"
        if not 0 <= op.index < decls[op.array]:
            return f"{kind} index {op.array}[{op.index}] out of range"
        return None
    if isinstance(op, int) and not isinstance(op, bool):
        if op < 0 or (limit is not None and op >= limit):
            return f"physical {kind} {op} out of range"
        return None
    return f"bad {kind} operand {op!r}"


def validate_kernel(k: QKernel, m: QModule) -> list[str]:
    errors: list[str] = []
    names = {kk.name for kk in m.kernels}
    nphys = m.target.num_physical_qubits if (m.target is not None and k.mapped) else None
    for pos, op in enumerate(k.body):
        where = f"{k.name}[{pos}]"
        if isinstance(op, Call):
            if k.inlined:
                errors.append(f"{where}: call marker in inlined kernel")
            if op.kernel not in names:
                errors.append(f"{where}: call to unknown kernel {op.kernel!r}")
            continue
        if not isinstance(op, Instr):
            errors.append(f"{where}: not an instruction: {op!r}")
            continue
        g = lookup(op.gate)
        if g is None:
            errors.append(f"{where}: unknown gate {op.gate!r}")
            continue
        if len(op.qubits) != g.num_qubits:
            errors.append(f"{where}: {op.gate} expects {g.num_qubits} qubit operand(s), got {len(op.qubits)}")
        if len(set(op.qubits)) != len(op.qubits):
            errors.append(f"{where}: duplicate qubit operand")
        for q in op.qubits:
            msg = _check_operand(q, m.qbits, "qubit", nphys, k.mapped)
            if msg:
                errors.append(f"{where}: {msg}")
        if op.gate == "MEASZ":
            if op.cbit is None:
                errors.append(f"{where}: MEASZ without cbit operand")
            else:
                msg = _check_operand(op.cbit, m.cbits, "cbit",
                                     m.num_program_cbits if k.mapped else None, k.mapped)
                if msg:
                    errors.append(f"{where}: {msg}")
        elif op.cbit is not None:
            errors.append(f"{where}: unexpected cbit operand on {op.gate}")
        if g.is_parametric:
            if op.param is None:
                errors.append(f"{where}: missing parameter")
            elif isinstance(op.param, Sym):
                if op.param.array not in m.params:
                    errors.append(f"{where}: unknown parameter array {op.param.array!r}")
                elif not 0 <= op.param.index < m.params[op.param.array]:
                    errors.append(f"{where}: parameter index {op.param.array}[{op.param.index}] out of range")
        elif op.param is not None:
            errors.append(f"{where}: unexpected parameter on {op.gate}")
    if k.start_times is not None and len(k.start_times) != len(k.body):
        errors.append(f"{k.name}: schedule length mismatch")
    return errors


def validate(m: QModule) -> list[str]:
    """All structural problems in ``m``; an empty list means the module is valid."""
    errors: list[str] = []
    seen: set[str] = set()
    for table in (m.qbits, m.cbits, m.params):
        for name, n in table.items():
            if name in seen:
                errors.append(f"duplicate declaration {name!r}")
            seen.add(name)
            if n < 1:
                errors.append(f"declaration {name!r} has length {n}")
    knames: set[str] = set()
    for k in m.kernels:
        if k.name in knames or k.name in seen:
            errors.append(f"duplicate kernel name {k.name!r}")
        knames.add(k.name)
        errors.extend(validate_kernel(k, m))
    return errors
