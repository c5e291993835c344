"""ELFQ container: quantum basic blocks plus the tables needed to dispatch them.

Layout (all little-endian)::

    0   magic  7F 'E' 'L' 'Q'
    4   u16 version (1)
    6   u16 section count
    8   u16 qubit count
    10  u16 cbit count
    12  12 reserved zero bytes
    24  section table, 32 bytes per entry:
            u32 type, u32 pad, u64 offset, u64 size, u64 align
        section payloads, each at a multiple of its alignment

Section types: 1 ``.qbbs`` (32-byte kernel records), 2 ``.qbbs_text``
(instruction words), 3 ``.qsym`` (u32 name offset, u32 element index),
4 ``.qstrtab`` (NUL-terminated names), 5 ``.qdecl`` (u32 kind, u32 name
offset, u32 length) for the declared qbit/cbit/shared arrays.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import (
    BadMagic,
    BadVersion,
    DanglingSymbolIndex,
    ElfqError,
    MalformedImage,
    SectionOutOfBounds,
)
from ..ir.module import QModule, Sym
from .encoding import decode_kernel, encode_kernel

MAGIC = b"\x7fELQ"
VERSION = 1
DEFAULT_ALIGN = 64

SEC_QBBS, SEC_TEXT, SEC_QSYM, SEC_STRTAB, SEC_QDECL = 1, 2, 3, 4, 5
SECTION_NAMES = {SEC_QBBS: ".qbbs", SEC_TEXT: ".qbbs_text", SEC_QSYM: ".qsym",
                 SEC_STRTAB: ".qstrtab", SEC_QDECL: ".qdecl"}
_ORDER = (SEC_QBBS, SEC_TEXT, SEC_QSYM, SEC_QDECL, SEC_STRTAB)
_SEC_ALIGN = {SEC_QBBS: 8, SEC_TEXT: DEFAULT_ALIGN, SEC_QSYM: 4, SEC_QDECL: 4, SEC_STRTAB: 1}

DECL_KINDS = {1: "qbit", 2: "cbit", 3: "shared"}
_DECL_CODES = {v: k for k, v in DECL_KINDS.items()}

_PREAMBLE = struct.Struct("<4sHHHH12x")
_SECTION = struct.Struct("<IIQQQ")
_RECORD = struct.Struct("<IIQQQ")
_SYMBOL = struct.Struct("<II")
_DECL = struct.Struct("<III")


@dataclass(frozen=True)
class QbbRecord:
    kernel_id: int
    name: str
    size: int
    align: int
    offset: int


@dataclass
class ElfqImage:
    num_qubits: int
    num_cbits: int
    records: list[QbbRecord] = field(default_factory=list)
    text: bytes = b""
    symbols: list[Sym] = field(default_factory=list)
    decls: list[tuple[str, str, int]] = field(default_factory=list)  # (kind, name, length)
    version: int = VERSION

    @property
    def kernel_names(self) -> list[str]:
        return [r.name for r in self.records]

    def record(self, name: str) -> QbbRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def kernel_code(self, name: str) -> bytes:
        r = self.record(name)
        return self.text[r.offset:r.offset + r.size]

    def decls_of(self, kind: str) -> dict[str, int]:
        return {name: n for k, name, n in self.decls if k == kind}

    def to_bytes(self) -> bytes:
        return _serialize(self)

    @classmethod
    def from_bytes(cls, data: bytes) -> "ElfqImage":
        return _parse(data)


def _align(x: int, a: int) -> int:
    return (x + a - 1) // a * a


def build_image(m: QModule, align: int = DEFAULT_ALIGN) -> ElfqImage:
    """Encode every kernel of a mapped module into one image; ids follow declaration order."""
    symbols: list[Sym] = []
    records, text = [], bytearray()
    for kid, k in enumerate(m.kernels):
        code, _ = encode_kernel(k, symbols)
        off = _align(len(text), align)
        text.extend(b"\0" * (off - len(text)))
        text.extend(code)
        records.append(QbbRecord(kid, k.name, len(code), align, off))
    nq = m.target.num_physical_qubits if m.target is not None else m.num_program_qubits
    decls = ([("qbit", n, v) for n, v in m.qbits.items()]
             + [("cbit", n, v) for n, v in m.cbits.items()]
             + [("shared", n, v) for n, v in m.params.items()])
    return ElfqImage(nq, m.num_program_cbits, records, bytes(text), symbols, decls)


class _StrTab:
    def __init__(self):
        self.data = bytearray(b"\0")
        self.index: dict[str, int] = {}

    def add(self, s: str) -> int:
        if s not in self.index:
            self.index[s] = len(self.data)
            self.data.extend(s.encode("utf-8") + b"\0")
        return self.index[s]


def _serialize(img: ElfqImage) -> bytes:
    strtab = _StrTab()
    qbbs = b"".join(_RECORD.pack(r.kernel_id, strtab.add(r.name), r.size, r.align, r.offset)
                    for r in img.records)
    qsym = b"".join(_SYMBOL.pack(strtab.add(s.array), s.index) for s in img.symbols)
    qdecl = b"".join(_DECL.pack(_DECL_CODES[k], strtab.add(n), length) for k, n, length in img.decls)
    payloads = {SEC_QBBS: qbbs, SEC_TEXT: img.text, SEC_QSYM: qsym, SEC_QDECL: qdecl,
                SEC_STRTAB: bytes(strtab.data)}

    out = bytearray(_PREAMBLE.pack(MAGIC, img.version, len(_ORDER), img.num_qubits, img.num_cbits))
    table_off = len(out)
    out.extend(b"\0" * (_SECTION.size * len(_ORDER)))
    entries = []
    for sec in _ORDER:
        a = _SEC_ALIGN[sec]
        off = _align(len(out), a)
        out.extend(b"\0" * (off - len(out)))
        out.extend(payloads[sec])
        entries.append(_SECTION.pack(sec, 0, off, len(payloads[sec]), a))
    out[table_off:table_off + len(entries) * _SECTION.size] = b"".join(entries)
    return bytes(out)


def _cstring(strtab: bytes, off: int) -> str:
    if not 0 < off < len(strtab):
        raise MalformedImage(f"string offset {off} outside string table")
    end = strtab.find(b"\0", off)
    if end < 0:
        raise MalformedImage(f"string at {off} is not NUL-terminated")
    try:
        return strtab[off:end].decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedImage(f"string at {off} is not valid UTF-8") from None


def _parse(data: bytes) -> ElfqImage:
    data = bytes(data)
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic("not an ELFQ image")
    if len(data) < _PREAMBLE.size:
        raise SectionOutOfBounds("file shorter than the fixed header")
    _, version, nsec, nq, nc = _PREAMBLE.unpack_from(data)
    if version != VERSION:
        raise BadVersion(f"unsupported ELFQ version {version}")
    if any(data[12:24]):
        raise MalformedImage("reserved header bytes are not zero")
    table_end = _PREAMBLE.size + nsec * _SECTION.size
    if table_end > len(data):
        raise SectionOutOfBounds("section table extends past end of file")
    sections: dict[int, bytes] = {}
    for i in range(nsec):
        typ, pad, off, size, align = _SECTION.unpack_from(data, _PREAMBLE.size + i * _SECTION.size)
        if off + size > len(data) or off < table_end and size:
            raise SectionOutOfBounds(f"section {i} [{off}, {off + size}) outside file payload area")
        if typ not in SECTION_NAMES or typ in sections:
            raise MalformedImage(f"unknown or repeated section type {typ}")
        if pad or align == 0 or align & (align - 1) or off % align:
            raise MalformedImage(f"section {SECTION_NAMES[typ]} has bad alignment fields")
        sections[typ] = data[off:off + size]
    missing = set(SECTION_NAMES) - set(sections)
    if missing:
        raise MalformedImage(f"missing sections {sorted(SECTION_NAMES[m] for m in missing)}")

    strtab = sections[SEC_STRTAB]
    if not strtab or strtab[0] != 0 or strtab[-1] != 0:
        raise MalformedImage("string table must start and end with NUL")
    for typ, rec in ((SEC_QBBS, _RECORD), (SEC_QSYM, _SYMBOL), (SEC_QDECL, _DECL)):
        if len(sections[typ]) % rec.size:
            raise MalformedImage(f"{SECTION_NAMES[typ]} size is not a multiple of {rec.size}")

    decls = []
    for kind, noff, length in _DECL.iter_unpack(sections[SEC_QDECL]):
        if kind not in DECL_KINDS or length < 1:
            raise MalformedImage(f"bad declaration record kind={kind} length={length}")
        decls.append((DECL_KINDS[kind], _cstring(strtab, noff), length))
    shared = {n: length for k, n, length in decls if k == "shared"}

    symbols = []
    for noff, idx in _SYMBOL.iter_unpack(sections[SEC_QSYM]):
        name = _cstring(strtab, noff)
        if name not in shared or idx >= shared[name]:
            raise DanglingSymbolIndex(f"symbol {name}[{idx}] does not address a declared parameter")
        symbols.append(Sym(name, idx))

    text = sections[SEC_TEXT]
    records = []
    end_prev = 0
    for kid, (rid, noff, size, align, off) in enumerate(_RECORD.iter_unpack(sections[SEC_QBBS])):
        if rid != kid:
            raise MalformedImage(f"kernel ids must be dense, found {rid} at position {kid}")
        if align == 0 or align & (align - 1) or off % align or size % 8:
            raise MalformedImage(f"kernel {rid}: bad size/alignment")
        if off < end_prev or off + size > len(text):
            raise SectionOutOfBounds(f"kernel {rid} code [{off}, {off + size}) overlaps or leaves .qbbs_text")
        end_prev = off + size
        records.append(QbbRecord(rid, _cstring(strtab, noff), size, align, off))
    if len({r.name for r in records}) != len(records):
        raise MalformedImage("duplicate kernel names")

    img = ElfqImage(nq, nc, records, text, symbols, decls, version)
    for r in records:
        decoded = decode_kernel(img.kernel_code(r.name), symbols)
        for ins in decoded:
            if any(q >= nq for q in ins.qubits) or (ins.cbit is not None and ins.cbit >= nc):
                raise MalformedImage(f"kernel {r.name}: operand outside declared qubit/cbit counts")
    if _serialize(img) != data:
        raise MalformedImage("image is not in canonical layout (stray bytes or padding)")
    return img


def write_elfq(obj: QModule | ElfqImage, path: str | Path) -> ElfqImage:
    img = obj if isinstance(obj, ElfqImage) else build_image(obj)
    Path(path).write_bytes(img.to_bytes())
    return img


def read_elfq(path: str | Path) -> ElfqImage:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ElfqError(f"cannot read {path}: {exc}") from None
    return _parse(data)


def inspect_elfq(img: ElfqImage) -> str:
    lines = [
        f"ELFQ version {img.version}",
        f"qubits: {img.num_qubits}  cbits: {img.num_cbits}",
        f"kernels: {len(img.records)}",
    ]
    if img.records:
        lines.append(f"  {'id':>4}  {'name':<20} {'size':>8} {'align':>6} {'offset':>8}")
        for r in img.records:
            lines.append(f"  {r.kernel_id:>4}  {r.name:<20} {r.size:>8} {r.align:>6} {r.offset:>8}")
    lines.append(f"symbols: {len(img.symbols)}")
    for i, s in enumerate(img.symbols):
        lines.append(f"  [{i}] {s.array}[{s.index}]")
    lines.append(f"declarations: {len(img.decls)}")
    for kind, name, n in img.decls:
        lines.append(f"  {kind} {name}[{n}]")
    return "\n".join(lines) + "\n"


def inspect_dict(img: ElfqImage) -> dict:
    return {
        "version": img.version,
        "qubits": img.num_qubits,
        "cbits": img.num_cbits,
        "kernels": [{"id": r.kernel_id, "name": r.name, "size": r.size, "align": r.align,
                     "offset": r.offset} for r in img.records],
        "symbols": [{"array": s.array, "index": s.index} for s in img.symbols],
        "declarations": [{"kind": k, "name": n, "length": v} for k, n, v in img.decls],
    }
