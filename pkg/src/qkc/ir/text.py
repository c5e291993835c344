"""Line-oriented textual form of the IR.

    ; qkc-ir 1
    decl qbit q 6
    decl shared P 4
    kernel tfd_Z [inlined]:
      RX q[0] sym P 0
      RZ $3 imm 1.5707963267948966 @7
      MEASZ q[0] -> c[0]
      call BellPrep

``$n`` is a physical qubit, ``#n`` a flattened cbit, ``@t`` a start cycle.
"""

from __future__ import annotations

import json
import re

from ..errors import IRParseError, TargetConfigError
from .gates import lookup
from .module import Call, Imm, Instr, QKernel, QModule, QRef, Sym

HEADER = "; qkc-ir 1"
_FLAGS = ("inlined", "mapped", "scheduled")
_REF = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\[(\d+)\]$")
_KERNEL = re.compile(r"^kernel ([A-Za-z_][A-Za-z0-9_]*)(?: \[([a-z,]*)\])?:$")


def _operand(op, phys_prefix: str) -> str:
    if isinstance(op, QRef):
        return f"{op.array}[{op.index}]"
    return f"{phys_prefix}{op}"


def format_instr(ins: Instr) -> str:
    parts = [ins.gate, *(_operand(q, "$") for q in ins.qubits)]
    if isinstance(ins.param, Imm):
        parts += ["imm", repr(float(ins.param.value))]
    elif isinstance(ins.param, Sym):
        parts += ["sym", ins.param.array, str(ins.param.index)]
    if ins.cbit is not None:
        parts += ["->", _operand(ins.cbit, "#")]
    return " ".join(parts)


def print_ir(m: QModule) -> str:
    lines = [HEADER]
    for kind, table in (("qbit", m.qbits), ("cbit", m.cbits), ("shared", m.params)):
        lines.extend(f"decl {kind} {name} {n}" for name, n in table.items())
    if m.target is not None:
        lines.append("target " + json.dumps(m.target.to_dict(), sort_keys=True))
    for k in m.kernels:
        flags = [f for f in _FLAGS if getattr(k, f)]
        lines.append(f"kernel {k.name}" + (f" [{','.join(flags)}]" if flags else "") + ":")
        if k.placement is not None:
            lines.append("  .placement" + "".join(f" {p}" for p in k.placement))
        for pos, op in enumerate(k.body):
            if isinstance(op, Call):
                text = f"call {op.kernel}"
            else:
                text = format_instr(op)
            if k.start_times is not None:
                text += f" @{k.start_times[pos]}"
            lines.append("  " + text)
    return "\n".join(lines) + "\n"


def _parse_operand(tok: str, phys_prefix: str, lineno: int):
    if tok.startswith(phys_prefix) and tok[1:].isdigit():
        return int(tok[1:])
    m = _REF.match(tok)
    if not m:
        raise IRParseError(f"line {lineno}: bad operand {tok!r}")
    return QRef(m.group(1), int(m.group(2)))


def _parse_instr(toks: list[str], lineno: int) -> tuple[Instr, int | None]:
    start = None
    if toks and toks[-1].startswith("@"):
        try:
            start = int(toks.pop()[1:])
        except ValueError:
            raise IRParseError(f"line {lineno}: bad start time") from None
    gate, rest = toks[0], toks[1:]
    if lookup(gate) is None:
        raise IRParseError(f"line {lineno}: unknown gate {gate!r}")
    qubits, param, cbit = [], None, None
    i = 0
    while i < len(rest):
        t = rest[i]
        if t == "imm":
            if i + 1 >= len(rest):
                raise IRParseError(f"line {lineno}: imm without value")
            try:
                param = Imm(float(rest[i + 1]))
            except ValueError:
                raise IRParseError(f"line {lineno}: bad immediate {rest[i + 1]!r}") from None
            i += 2
        elif t == "sym":
            if i + 2 >= len(rest) or not rest[i + 2].isdigit():
                raise IRParseError(f"line {lineno}: malformed sym operand")
            param = Sym(rest[i + 1], int(rest[i + 2]))
            i += 3
        elif t == "->":
            if i + 1 >= len(rest):
                raise IRParseError(f"line {lineno}: '->' without cbit")
            cbit = _parse_operand(rest[i + 1], "#", lineno)
            i += 2
        else:
            qubits.append(_parse_operand(t, "$", lineno))
            i += 1
    return Instr(gate, tuple(qubits), cbit, param), start


def parse_ir(text: str) -> QModule:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise IRParseError("missing IR header")
    m = QModule()
    cur: QKernel | None = None
    times: list[int | None] = []

    def finish():
        if cur is None:
            return
        if any(t is not None for t in times):
            if any(t is None for t in times):
                raise IRParseError(f"kernel {cur.name}: partial schedule annotations")
            cur.start_times = list(times)

    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        toks = line.split()
        if raw.startswith("  "):
            if cur is None:
                raise IRParseError(f"line {lineno}: instruction outside kernel")
            try:
                if toks[0] == ".placement":
                    cur.placement = [int(t) for t in toks[1:]]
                    continue
                if toks[0] == "call":
                    if len(toks) not in (2, 3):
                        raise IRParseError(f"line {lineno}: malformed call")
                    times.append(int(toks[2][1:]) if len(toks) == 3 else None)
                    cur.body.append(Call(toks[1]))
                    continue
            except ValueError:
                raise IRParseError(f"line {lineno}: malformed {toks[0]!r} line") from None
            ins, start = _parse_instr(toks, lineno)
            cur.body.append(ins)
            times.append(start)
        elif toks[0] == "decl":
            if len(toks) != 4 or toks[1] not in ("qbit", "cbit", "shared") or not toks[3].isdigit():
                raise IRParseError(f"line {lineno}: malformed declaration")
            table = {"qbit": m.qbits, "cbit": m.cbits, "shared": m.params}[toks[1]]
            table[toks[2]] = int(toks[3])
        elif toks[0] == "target":
            from ..passes.target import TargetConfig

            try:
                m.target = TargetConfig.from_dict(json.loads(line[len("target "):]))
            except (ValueError, KeyError, TypeError, TargetConfigError) as exc:
                raise IRParseError(f"line {lineno}: bad target: {exc}") from None
        elif toks[0] == "kernel":
            km = _KERNEL.match(line)
            if not km:
                raise IRParseError(f"line {lineno}: malformed kernel header")
            finish()
            flags = set(filter(None, (km.group(2) or "").split(",")))
            if flags - set(_FLAGS):
                raise IRParseError(f"line {lineno}: unknown kernel flags {sorted(flags - set(_FLAGS))}")
            cur = QKernel(km.group(1), [], *(f in flags for f in _FLAGS))
            times = []
            m.kernels.append(cur)
        else:
            raise IRParseError(f"line {lineno}: unrecognized line {line!r}")
    finish()
    return m
