"""``.qk`` source for the single-step thermofield-double ansatz on 2L qubits.

Subsystem A holds qubits 0..L-1 and subsystem B holds L..2L-1. The four
variational angles live in ``QVarParams``: [0] = gamma1 (transverse RX),
[1] = gamma2 (intra-system ZZ), [2] = alpha1 (inter-system XX) and
[3] = alpha2 (inter-system ZZ).
"""

from __future__ import annotations

import math
from typing import Sequence

from ..errors import WorkloadError

NUM_ANGLES = 4
KERNELS = ("PrepZAll", "BellPrep", "TFD_terms", "XmaptoZ", "MeasZAll", "tfd_Z", "tfd_X")


def _check_l(L: int):
    if not isinstance(L, int) or L < 2:
        raise WorkloadError(f"subsystem size L must be an integer >= 2, got {L!r}")


def generate_source(L: int, fold_params: Sequence[float] | None = None) -> str:
    """Program text for size ``L``.

    With ``fold_params`` the four angles are written as literals instead of
    shared-array references, giving a binary with no runtime patch sites.
    """
    _check_l(L)
    if fold_params is not None and len(fold_params) != NUM_ANGLES:
        raise WorkloadError(f"expected {NUM_ANGLES} folded angles, got {len(fold_params)}")

    def p(k: int) -> str:
        return f"QVarParams[{k}]" if fold_params is None else repr(float(fold_params[k]))

    return f"""\
// Thermofield double state of a transverse-field Ising ring, 2 x {L} qubits
const int N_sub = {L};
const int N_ss = 2;
const int N = N_ss * N_sub;

qbit QReg[N];
cbit CReg[N];
shared double QVarParams[{NUM_ANGLES}];

kernel TFD_terms() {{
    // single-qubit transverse terms
    for i in 0..N {{
        RX(QReg[i], {p(0)});
    }}
    // intra-system ZZ, adjacent pairs
    for g in 0..N_sub - 1 {{
        for s in 0..N_ss {{
            CNOT(QReg[g + N_sub * s + 1], QReg[g + N_sub * s]);
        }}
        for s in 0..N_ss {{
            RZ(QReg[g + N_sub * s], {p(1)});
        }}
        for s in 0..N_ss {{
            CNOT(QReg[g + N_sub * s + 1], QReg[g + N_sub * s]);
        }}
    }}
    // intra-system ZZ, ring closure
    for s in 0..N_ss {{
        CNOT(QReg[N_sub * s], QReg[N_sub * s + N_sub - 1]);
    }}
    for s in 0..N_ss {{
        RZ(QReg[N_sub * s + N_sub - 1], {p(1)});
    }}
    for s in 0..N_ss {{
        CNOT(QReg[N_sub * s], QReg[N_sub * s + N_sub - 1]);
    }}
    // inter-system XX
    for i in 0..N_sub {{
        RY(QReg[i + N_sub], -pi / 2);
        RY(QReg[i], -pi / 2);
    }}
    for i in 0..N_sub {{
        CNOT(QReg[i + N_sub], QReg[i]);
    }}
    for i in 0..N_sub {{
        RZ(QReg[i], {p(2)});
    }}
    for i in 0..N_sub {{
        CNOT(QReg[i + N_sub], QReg[i]);
    }}
    for i in 0..N_sub {{
        RY(QReg[i + N_sub], pi / 2);
        RY(QReg[i], pi / 2);
    }}
    // inter-system ZZ
    for i in 0..N_sub {{
        CNOT(QReg[i], QReg[i + N_sub]);
    }}
    for i in 0..N_sub {{
        RZ(QReg[i + N_sub], {p(3)});
    }}
    for i in 0..N_sub {{
        CNOT(QReg[i], QReg[i + N_sub]);
    }}
}}

kernel PrepZAll() {{
    for i in 0..N {{
        PREPZ(QReg[i]);
    }}
}}

// Bell pairs between A and B: the infinite-temperature state
kernel BellPrep() {{
    for i in 0..N_sub {{
        RY(QReg[i], pi / 2);
    }}
    for i in 0..N_sub {{
        CNOT(QReg[i], QReg[i + N_sub]);
    }}
}}

kernel MeasZAll() {{
    for i in 0..N {{
        MEASZ(QReg[i], CReg[i]);
    }}
}}

kernel XmaptoZ() {{
    for i in 0..N {{
        H(QReg[i]);
    }}
}}

kernel tfd_Z() {{
    PrepZAll();
    BellPrep();
    TFD_terms();
    MeasZAll();
}}

kernel tfd_X() {{
    PrepZAll();
    BellPrep();
    TFD_terms();
    XmaptoZ();
    MeasZAll();
}}
"""


def circuit(L: int, angles: Sequence[float], x_basis: bool = False) -> list[tuple[str, tuple[int, ...], float | None]]:
    """The unitary part of tfd_Z (or tfd_X) as plain (gate, qubits, angle) triples.

    Built directly from the loop structure, independently of the compiler.
    """
    _check_l(L)
    g1, g2, a1, a2 = (float(a) for a in angles)
    N, half = 2 * L, math.pi / 2
    ops: list[tuple[str, tuple[int, ...], float | None]] = []
    ops += [("RY", (i,), half) for i in range(L)]
    ops += [("CNOT", (i, i + L), None) for i in range(L)]
    ops += [("RX", (i,), g1) for i in range(N)]
    for g in range(L - 1):
        ops += [("CNOT", (g + L * s + 1, g + L * s), None) for s in range(2)]
        ops += [("RZ", (g + L * s,), g2) for s in range(2)]
        ops += [("CNOT", (g + L * s + 1, g + L * s), None) for s in range(2)]
    ops += [("CNOT", (L * s, L * s + L - 1), None) for s in range(2)]
    ops += [("RZ", (L * s + L - 1,), g2) for s in range(2)]
    ops += [("CNOT", (L * s, L * s + L - 1), None) for s in range(2)]
    for i in range(L):
        ops += [("RY", (i + L,), -half), ("RY", (i,), -half)]
    ops += [("CNOT", (i + L, i), None) for i in range(L)]
    ops += [("RZ", (i,), a1) for i in range(L)]
    ops += [("CNOT", (i + L, i), None) for i in range(L)]
    for i in range(L):
        ops += [("RY", (i + L,), half), ("RY", (i,), half)]
    ops += [("CNOT", (i, i + L), None) for i in range(L)]
    ops += [("RZ", (i + L,), a2) for i in range(L)]
    ops += [("CNOT", (i, i + L), None) for i in range(L)]
    if x_basis:
        ops += [("H", (i,), None) for i in range(N)]
    return ops
