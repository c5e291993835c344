"""Fixed-width 64-bit instruction words.

Word 0 (little-endian)::

    bits  0-7   opcode
    bits  8-15  qubit slot 0      (0xFF = unused)
    bits 16-23  qubit slot 1
    bits 24-31  qubit slot 2
    bits 32-39  cbit index        (0xFF = none)
    bits 40-47  parameter mode    (0 none, 1 immediate, 2 symbol)
    bits 48-63  reserved, zero

Word 1 follows iff the mode is non-zero: the IEEE-754 bits of the angle
(mode 1) or an index into the parameter symbol table (mode 2). A runtime
parameter patch is therefore a single rewrite of word 1 plus the mode byte.
"""

from __future__ import annotations

import struct
from typing import Sequence

from ..errors import (
    BadOpcode,
    DanglingSymbolIndex,
    MalformedImage,
    NonzeroReservedBits,
    TruncatedParamWord,
    UnencodableGate,
)
from ..ir.gates import lookup
from ..ir.module import Imm, Instr, QKernel, Sym

OPCODES: dict[str, int] = {
    "PREPZ": 1, "MEASZ": 2, "X": 3, "Y": 4, "Z": 5, "H": 6, "S": 7, "SDG": 8, "T": 9,
    "TDG": 10, "CZ": 11, "CNOT": 12, "SWAP": 13, "CCNOT": 14, "RX": 15, "RY": 16, "RZ": 17,
}
GATES_BY_OPCODE = {v: k for k, v in OPCODES.items()}

UNUSED = 0xFF
MODE_NONE, MODE_IMM, MODE_SYM = 0, 1, 2
_RESERVED_MASK = 0xFFFF << 48
_MODE_SHIFT = 40

_U64 = struct.Struct("<Q")
_F64 = struct.Struct("<d")


def opcode_table() -> dict[str, int]:
    return dict(OPCODES)


def double_bits(x: float) -> int:
    return _U64.unpack(_F64.pack(x))[0]


def bits_double(w: int) -> float:
    return _F64.unpack(_U64.pack(w))[0]


def pack_word0(opcode: int, qubits: Sequence[int], cbit: int | None, mode: int) -> int:
    slots = list(qubits) + [UNUSED] * (3 - len(qubits))
    c = UNUSED if cbit is None else cbit
    return (opcode | slots[0] << 8 | slots[1] << 16 | slots[2] << 24
            | c << 32 | mode << _MODE_SHIFT)


def encode_instr(ins: Instr, symbols: list[Sym]) -> list[int]:
    """Words for ``ins``; new symbol references are appended to ``symbols``."""
    op = OPCODES.get(ins.gate)
    if op is None:
        raise UnencodableGate(f"no opcode for gate {ins.gate!r}")
    for q in ins.qubits:
        if not isinstance(q, int) or not 0 <= q < UNUSED:
            raise UnencodableGate(f"{ins.gate}: qubit operand {q!r} is not a physical index < 255")
    if len(ins.qubits) > 3:
        raise UnencodableGate(f"{ins.gate}: more than 3 qubit operands")
    if ins.cbit is not None and (not isinstance(ins.cbit, int) or not 0 <= ins.cbit < UNUSED):
        raise UnencodableGate(f"{ins.gate}: cbit operand {ins.cbit!r} is not an index < 255")
    if isinstance(ins.param, Imm):
        return [pack_word0(op, ins.qubits, ins.cbit, MODE_IMM), double_bits(float(ins.param.value))]
    if isinstance(ins.param, Sym):
        try:
            idx = symbols.index(ins.param)
        except ValueError:
            symbols.append(ins.param)
            idx = len(symbols) - 1
        return [pack_word0(op, ins.qubits, ins.cbit, MODE_SYM), idx]
    return [pack_word0(op, ins.qubits, ins.cbit, MODE_NONE)]


def words_to_bytes(words: Sequence[int]) -> bytes:
    return struct.pack(f"<{len(words)}Q", *words)


def bytes_to_words(data: bytes) -> tuple[int, ...]:
    if len(data) % 8:
        raise TruncatedParamWord(f"code length {len(data)} is not a multiple of 8")
    return struct.unpack(f"<{len(data) // 8}Q", data)


def encode_kernel(k: QKernel, symbols: list[Sym] | None = None) -> tuple[bytes, list[Sym]]:
    """Encode a mapped kernel. Returns the code bytes and the symbol table used.

    Pass ``symbols`` to share one table between several kernels; it is
    extended in place.
    """
    if symbols is None:
        symbols = []
    words: list[int] = []
    for op in k.body:
        if not isinstance(op, Instr):
            raise UnencodableGate(f"kernel {k.name!r} still contains call markers")
        words.extend(encode_instr(op, symbols))
    return words_to_bytes(words), symbols


def _fields(w0: int):
    return (w0 & 0xFF, [(w0 >> s) & 0xFF for s in (8, 16, 24)], (w0 >> 32) & 0xFF, (w0 >> _MODE_SHIFT) & 0xFF)


def decode_kernel(data: bytes, symbols: Sequence[Sym]) -> list[Instr]:
    words = bytes_to_words(data)
    out: list[Instr] = []
    i = 0
    while i < len(words):
        w0 = words[i]
        if w0 & _RESERVED_MASK:
            raise NonzeroReservedBits(f"word {i}: reserved bits set")
        opcode, slots, cbit, mode = _fields(w0)
        gate = GATES_BY_OPCODE.get(opcode)
        if gate is None:
            raise BadOpcode(f"word {i}: unknown opcode {opcode}")
        g = lookup(gate)
        qubits = slots[:g.num_qubits]
        if UNUSED in qubits or any(s != UNUSED for s in slots[g.num_qubits:]):
            raise MalformedImage(f"word {i}: {gate} qubit slots {slots} do not match arity {g.num_qubits}")
        if len(set(qubits)) != len(qubits):
            raise MalformedImage(f"word {i}: duplicate qubit operand")
        if (gate == "MEASZ") != (cbit != UNUSED):
            raise MalformedImage(f"word {i}: cbit field inconsistent with {gate}")
        if mode not in (MODE_NONE, MODE_IMM, MODE_SYM) or (mode != MODE_NONE) != g.is_parametric:
            raise MalformedImage(f"word {i}: parameter mode {mode} invalid for {gate}")
        param = None
        if mode != MODE_NONE:
            if i + 1 >= len(words):
                raise TruncatedParamWord(f"word {i}: missing parameter word")
            w1 = words[i + 1]
            if mode == MODE_IMM:
                param = Imm(bits_double(w1))
            else:
                if w1 >= len(symbols):
                    raise DanglingSymbolIndex(f"word {i + 1}: symbol index {w1} >= {len(symbols)}")
                param = symbols[w1]
            i += 1
        out.append(Instr(gate, tuple(qubits), None if gate != "MEASZ" else cbit, param))
        i += 1
    return out


def find_patch_sites(data: bytes) -> list[tuple[int, int]]:
    """(word index of word 0, symbol index) for every symbolic instruction."""
    words = bytes_to_words(data)
    sites = []
    i = 0
    while i < len(words):
        mode = (words[i] >> _MODE_SHIFT) & 0xFF
        if mode == MODE_NONE:
            i += 1
            continue
        if i + 1 >= len(words):
            raise TruncatedParamWord(f"word {i}: missing parameter word")
        if mode == MODE_SYM:
            sites.append((i, words[i + 1]))
        i += 2
    return sites


_MODE_CLEAR = ~(0xFF << _MODE_SHIFT) & 0xFFFFFFFFFFFFFFFF


def apply_patches(data: bytes, sites: Sequence[tuple[int, int]], values: Sequence[float]) -> bytes:
    """Copy of ``data`` with each site rewritten as an immediate of ``values[symbol]``."""
    buf = bytearray(data)
    for wi, sym in sites:
        if sym >= len(values):
            raise DanglingSymbolIndex(f"symbol index {sym} >= {len(values)}")
        off = wi * 8
        w0 = _U64.unpack_from(buf, off)[0]
        _U64.pack_into(buf, off, (w0 & _MODE_CLEAR) | MODE_IMM << _MODE_SHIFT)
        _F64.pack_into(buf, off + 8, values[sym])
    return bytes(buf)
