"""Exact thermal-state oracle and a compiler-free reference for the TFD circuit.

Gate operators are assembled from Kronecker products of 2x2 blocks, which
shares no code with the simulator's tensor contractions.
"""

from __future__ import annotations

from functools import lru_cache, reduce
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from ..errors import BadLength, NotDensityMatrix, WorkloadError
from .program import circuit

MAX_ORACLE_L = 8
_DM_TOL = 1e-9

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)
_PAULI = {"RX": _X, "RY": _Y, "RZ": _Z}
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_P0 = np.diag([1.0, 0.0]).astype(complex)
_P1 = np.diag([0.0, 1.0]).astype(complex)


def _embed(n: int, blocks: dict[int, np.ndarray]) -> sp.csr_matrix:
    """Kronecker product with ``blocks[q]`` on qubit q (qubit 0 leftmost) and identity elsewhere."""
    return reduce(lambda a, b: sp.kron(a, b, format="csr"),
                  [sp.csr_matrix(blocks.get(q, _I2)) for q in range(n)])


@lru_cache(maxsize=None)
def _fixed(n: int, gate: str, qubits: tuple[int, ...]) -> sp.csr_matrix:
    if gate in _PAULI:
        return _embed(n, {qubits[0]: _PAULI[gate]})
    if gate == "H":
        return _embed(n, {qubits[0]: _H})
    if gate == "CNOT":
        c, t = qubits
        return _embed(n, {c: _P0}) + _embed(n, {c: _P1, t: _X})
    if gate == "H_ALL":
        return _embed(n, {q: _H for q in range(n)})
    raise WorkloadError(f"reference circuit has no operator for {gate}")


def _apply(psi: np.ndarray, n: int, gate: str, qubits: tuple[int, ...], theta: float | None) -> np.ndarray:
    if gate in _PAULI:
        # exp(-i theta/2 P) = cos(theta/2) I - i sin(theta/2) P
        return np.cos(theta / 2) * psi - 1j * np.sin(theta / 2) * (_fixed(n, gate, qubits) @ psi)
    return _fixed(n, gate, qubits) @ psi


def _check_oracle_l(L: int):
    if not 2 <= L <= MAX_ORACLE_L:
        raise WorkloadError(f"oracle supports 2 <= L <= {MAX_ORACLE_L}, got {L}")


def reference_state(L: int, angles: Sequence[float], x_basis: bool = False) -> np.ndarray:
    """Pre-measurement state of tfd_Z (or tfd_X) from |0...0>."""
    _check_oracle_l(L)
    n = 2 * L
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    for gate, qubits, theta in circuit(L, angles, x_basis):
        psi = _apply(psi, n, gate, tuple(qubits), theta)
    return psi


def reference_pipeline(L: int, angles: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """(P_Z, P_X) registers computed without the compiler, image or runtime."""
    psi = reference_state(L, angles)
    return np.abs(psi) ** 2, np.abs(_fixed(2 * L, "H_ALL", ()) @ psi) ** 2


def hamiltonian(L: int, g: float = 1.0) -> np.ndarray:
    """Dense transverse-field Ising ring: sum Z_i Z_(i+1 mod L) + g sum X_i."""
    if g != 1.0:
        raise WorkloadError("only the g = 1 transverse field is supported")
    if L < 2:
        raise WorkloadError(f"ring needs L >= 2, got {L}")
    H = sum(_embed(L, {i: _Z, (i + 1) % L: _Z}) for i in range(L))
    H = H + g * sum(_embed(L, {i: _X}) for i in range(L))
    return H.toarray().real


def thermal_state(beta: float, L: int) -> np.ndarray:
    """exp(-beta H) / Z through a symmetric eigendecomposition."""
    _check_oracle_l(L)
    if not beta > 0:
        raise WorkloadError(f"beta must be positive, got {beta}")
    E, V = np.linalg.eigh(hamiltonian(L))
    w = np.exp(-beta * (E - E.min()))
    return (V * (w / w.sum())) @ V.T


def reduced_density(state) -> np.ndarray:
    """Trace out subsystem B (the low-order half of the qubits)."""
    psi = np.asarray(state, dtype=complex).ravel()
    n = psi.size.bit_length() - 1
    if psi.size < 4 or 1 << n != psi.size or n % 2:
        raise BadLength(f"state length {psi.size} is not 4**L")
    d = 1 << (n // 2)
    M = psi.reshape(d, d)
    return M @ M.conj().T


def _check_density(rho: np.ndarray, label: str):
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise NotDensityMatrix(f"{label}: not a square matrix")
    if not np.allclose(rho, rho.conj().T, atol=_DM_TOL):
        raise NotDensityMatrix(f"{label}: not Hermitian")
    if abs(np.trace(rho).real - 1) > _DM_TOL:
        raise NotDensityMatrix(f"{label}: trace {np.trace(rho).real} != 1")
    if np.linalg.eigvalsh(rho).min() < -_DM_TOL:
        raise NotDensityMatrix(f"{label}: negative eigenvalue")


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(rho)
    return (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T


def fidelity(rho_ideal, rho_sim) -> float:
    """[Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2, clamped to [0, 1]."""
    a = np.asarray(rho_ideal, dtype=complex)
    b = np.asarray(rho_sim, dtype=complex)
    _check_density(a, "rho_ideal")
    _check_density(b, "rho_sim")
    if a.shape != b.shape:
        raise NotDensityMatrix(f"shape mismatch {a.shape} vs {b.shape}")
    s = _psd_sqrt(a)
    m = s @ b @ s
    w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    f = float(np.sum(np.sqrt(np.clip(w, 0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def state_fidelity(beta: float, L: int, angles: Sequence[float]) -> float:
    """Fidelity of the ansatz state at ``angles`` against the thermal state at ``beta``."""
    return fidelity(thermal_state(beta, L), reduced_density(reference_state(L, angles)))
