from __future__ import annotations

from dataclasses import replace

from ..errors import NotRoutable, PassError, TooManyQubits
from ..ir.module import Instr, QKernel, QModule, QRef
from .decompose import expand
from .target import TargetConfig


def map_qubits(k: QKernel, t: TargetConfig, m: QModule) -> tuple[QKernel, int]:
    """Place program qubits on physical qubits and route non-adjacent pairs.

    Placement starts as the identity (program qubits numbered by declaration
    order in ``m``). A two-qubit gate on a non-adjacent pair walks its first
    operand along a BFS shortest path with SWAPs, which are themselves
    decomposed to native gates. Cbits are flattened to indices the same way.

    Returns the mapped kernel and the number of SWAPs inserted.
    """
    if k.calls():
        raise PassError(f"kernel {k.name!r} must be inlined before mapping")
    if k.mapped:
        return k, 0
    nprog = m.num_program_qubits
    nphys = t.num_physical_qubits
    if nprog > nphys:
        raise TooManyQubits(f"program uses {nprog} qubits, target has {nphys}")
    qoff = m.qubit_offsets()
    coff = m.cbit_offsets()
    l2p = list(range(nprog))
    p2l = list(range(nprog)) + [-1] * (nphys - nprog)

    def phys(q: QRef) -> int:
        return l2p[qoff[q.array] + q.index]

    body: list[Instr] = []
    swaps = 0

    def swap(a: int, b: int):
        nonlocal swaps
        body.extend(expand(Instr("SWAP", (a, b)), t.native))
        swaps += 1
        la, lb = p2l[a], p2l[b]
        p2l[a], p2l[b] = lb, la
        if la >= 0:
            l2p[la] = b
        if lb >= 0:
            l2p[lb] = a

    for ins in k.instructions:
        qs = [phys(q) for q in ins.qubits]
        if len(qs) == 2 and not t.adjacent(qs[0], qs[1]):
            path = t.shortest_path(qs[0], qs[1])
            for v in path[1:-1]:
                swap(qs[0], v)
                qs[0] = v
        elif len(qs) == 3 and not all(t.adjacent(a, b) for a, b in ((qs[0], qs[1]), (qs[0], qs[2]), (qs[1], qs[2]))):
            raise NotRoutable(f"{ins.gate} on {qs} needs pairwise-connected qubits")
        cbit = ins.cbit
        if isinstance(cbit, QRef):
            cbit = coff[cbit.array] + cbit.index
        body.append(Instr(ins.gate, tuple(qs), cbit, ins.param))

    return replace(k, body=body, mapped=True, scheduled=False, start_times=None,
                   placement=list(l2p)), swaps
