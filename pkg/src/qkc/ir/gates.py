"""Gate database.

A gate is identified by its matrix-attribute record, not its name. Fixed gates
carry their matrix inline; rotations carry an empty matrix and a named
generator evaluated on demand.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..errors import ParamCountMismatch

_S2 = 1 / math.sqrt(2)


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)


GENERATORS: dict[str, Callable[[float], np.ndarray]] = {"rx": _rx, "ry": _ry, "rz": _rz}


@dataclass(frozen=True)
class GateDef:
    name: str
    matrix_real: tuple[float, ...]
    matrix_imag: tuple[float, ...]
    is_hermitian: bool
    is_unitary: bool
    is_mutable: bool
    qubit_list: tuple[int, ...]
    parametric_list: tuple[int, ...]
    control_qubit_list: tuple[int, ...]
    local_basis_list: tuple[int, ...]
    identifier: int
    generator: str | None = None
    matrix_order: str = "rm"
    _fixed: np.ndarray | None = field(default=None, compare=False, repr=False)

    @property
    def num_qubits(self) -> int:
        return len(self.qubit_list)

    @property
    def num_params(self) -> int:
        return len(self.parametric_list)

    @property
    def is_parametric(self) -> bool:
        return bool(self.parametric_list)

    def to_record(self) -> dict:
        """The attribute record, keyed exactly like the intrinsics header."""
        return {
            "matrix_real": list(self.matrix_real),
            "matrix_imag": list(self.matrix_imag),
            "matrix_order": self.matrix_order,
            "is_hermitian": self.is_hermitian,
            "is_unitary": self.is_unitary,
            "is_mutable": self.is_mutable,
            "qubit_list": list(self.qubit_list),
            "parametric_list": list(self.parametric_list),
            "control_qubit_list": list(self.control_qubit_list),
            "local_basis_list": list(self.local_basis_list),
            "identifier": self.identifier,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record())


def _fixed(name, mat, ident, *, herm, controls=(), unitary=True, basis=None):
    mat = np.asarray(mat, dtype=complex)
    nq = int(round(math.log2(mat.shape[-1])))
    return GateDef(
        name=name,
        matrix_real=tuple(float(x) for x in mat.real.ravel()),
        matrix_imag=tuple(float(x) for x in mat.imag.ravel()),
        is_hermitian=herm,
        is_unitary=unitary,
        is_mutable=unitary,
        qubit_list=tuple(range(nq)),
        parametric_list=(),
        control_qubit_list=tuple(controls),
        local_basis_list=tuple(basis if basis is not None else [1] * nq),
        identifier=ident,
        _fixed=mat,
    )


def _rotation(name, gen, ident):
    return GateDef(
        name=name,
        matrix_real=(),
        matrix_imag=(),
        is_hermitian=False,
        is_unitary=True,
        is_mutable=True,
        qubit_list=(0,),
        parametric_list=(0,),
        control_qubit_list=(),
        local_basis_list=(1,),
        identifier=ident,
        generator=gen,
    )


def _build() -> tuple[GateDef, ...]:
    i = 1j
    cnot = np.eye(4)[[0, 1, 3, 2]]
    swap = np.eye(4)[[0, 2, 1, 3]]
    ccnot = np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]]
    p0 = np.array([[1, 0], [0, 0]])
    p1 = np.array([[0, 0], [0, 1]])
    lower = np.array([[0, 1], [0, 0]])
    return (
        _fixed("PREPZ", np.stack([p0, lower]), 0, herm=False, unitary=False, basis=[3]),
        _fixed("MEASZ", np.stack([p0, p1]), 1, herm=False, unitary=False, basis=[3]),
        _fixed("X", [[0, 1], [1, 0]], 2, herm=True),
        _fixed("Y", [[0, -i], [i, 0]], 3, herm=True, basis=[2]),
        _fixed("Z", [[1, 0], [0, -1]], 4, herm=True, basis=[3]),
        _fixed("H", [[_S2, _S2], [_S2, -_S2]], 5, herm=True),
        _fixed("S", [[1, 0], [0, i]], 6, herm=False, basis=[3]),
        _fixed("SDG", [[1, 0], [0, -i]], 7, herm=False, basis=[3]),
        _fixed("T", [[1, 0], [0, np.exp(i * math.pi / 4)]], 8, herm=False, basis=[3]),
        _fixed("TDG", [[1, 0], [0, np.exp(-i * math.pi / 4)]], 9, herm=False, basis=[3]),
        _fixed("CZ", np.diag([1, 1, 1, -1]), 10, herm=True, controls=[0], basis=[3, 3]),
        _fixed("CNOT", cnot, 11, herm=True, controls=[0], basis=[3, 1]),
        _fixed("SWAP", swap, 12, herm=True),
        _fixed("CCNOT", ccnot, 13, herm=True, controls=[0, 1], basis=[3, 3, 1]),
        _rotation("RX", "rx", 14),
        _rotation("RY", "ry", 15),
        _rotation("RZ", "rz", 16),
    )


_GATES = _build()
_BY_NAME = {g.name: g for g in _GATES}
_BY_ID = {g.identifier: g for g in _GATES}

ROTATIONS = frozenset({"RX", "RY", "RZ"})


def gatedb() -> list[GateDef]:
    return list(_GATES)


def lookup(name: str) -> GateDef | None:
    return _BY_NAME.get(name)


def by_identifier(ident: int) -> GateDef | None:
    return _BY_ID.get(ident)


def gate_names() -> frozenset[str]:
    return frozenset(_BY_NAME)


def gate_matrix(gate: GateDef | str, params: Sequence[float] = ()) -> np.ndarray:
    """Matrix of ``gate`` for the given angles (radians).

    PREPZ and MEASZ return a stack of two 2x2 operators (reset Kraus pair and
    the Z projector pair respectively) instead of a single unitary.
    """
    g = _BY_NAME[gate] if isinstance(gate, str) else gate
    if len(params) != g.num_params:
        raise ParamCountMismatch(f"{g.name} takes {g.num_params} parameter(s), got {len(params)}")
    if g.generator is not None:
        return GENERATORS[g.generator](float(params[0]))
    return g._fixed.copy()
