"""Cost function of the TFD ansatz, evaluated from exact probability registers.

A Z-string expectation is a parity sum over basis states. Qubit 0 is the
most significant bit of the basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from ..errors import BadMask, LengthMismatch, WorkloadError


@dataclass(frozen=True)
class ExpectationTerms:
    energy_X: float
    energy_ZZ: float
    entropy_term: float


def _num_qubits(P: np.ndarray) -> int:
    n = int(P.size).bit_length() - 1
    if P.ndim != 1 or P.size < 2 or 1 << n != P.size:
        raise LengthMismatch(f"probability vector length {P.size} is not a power of two")
    return n


@lru_cache(maxsize=4096)
def _parity_signs(n: int, mask: tuple[int, ...]) -> np.ndarray:
    bits = 0
    for q in mask:
        bits |= 1 << (n - 1 - q)
    idx = np.arange(1 << n)
    pop = np.zeros(idx.size, dtype=np.int64)
    v = idx & bits
    while np.any(v):
        pop += v & 1
        v >>= 1
    signs = 1.0 - 2.0 * (pop & 1)
    signs.flags.writeable = False
    return signs


def z_string_expectation(P, mask: Iterable[int]) -> float:
    """<Z_{q1} Z_{q2} ...> for the qubits in ``mask``."""
    P = np.asarray(P, dtype=float)
    n = _num_qubits(P)
    mask = tuple(mask)
    if not mask:
        raise BadMask("mask must name at least one qubit")
    if len(set(mask)) != len(mask) or any(not 0 <= q < n for q in mask):
        raise BadMask(f"mask {mask} invalid for {n} qubits")
    return float(P @ _parity_signs(n, mask))


def ring_edges(L: int) -> list[tuple[int, int]]:
    """Nearest-neighbour pairs of one L-site ring; for L=2 the single bond appears twice."""
    return [(i, (i + 1) % L) for i in range(L)]


def cost_terms(P_Z, P_X, L: int) -> ExpectationTerms:
    P_Z = np.asarray(P_Z, dtype=float)
    P_X = np.asarray(P_X, dtype=float)
    if P_Z.shape != (1 << 2 * L,) or P_X.shape != (1 << 2 * L,):
        raise LengthMismatch(f"registers must have length {1 << 2 * L} for L={L}")
    N = 2 * L
    energy_x = sum(z_string_expectation(P_X, [q]) for q in range(N))
    energy_zz = sum(z_string_expectation(P_Z, [a + L * s, b + L * s])
                    for s in (0, 1) for a, b in ring_edges(L))
    entropy = sum(z_string_expectation(P_X, [i, i + L]) + z_string_expectation(P_Z, [i, i + L])
                  for i in range(L))
    return ExpectationTerms(energy_x, energy_zz, entropy)


def total_cost(beta: float, P_Z, P_X, L: int) -> float:
    """<X_A> + <X_B> + <ZZ_A> + <ZZ_B> - (<XX_AB> + <ZZ_AB>) / beta."""
    if not beta > 0:
        raise WorkloadError(f"beta must be positive, got {beta}")
    t = cost_terms(P_Z, P_X, L)
    return t.energy_X + t.energy_ZZ - t.entropy_term / beta


# Hand-derived coefficient tables for six qubits (L = 3), kept as an
# independent check on the generic parity rule above.
_ZZ_APZZ_B = np.array([
    3, 1, 1, 1, 1, 1, 1, 3, 1, -1, -1, -1, -1, -1, -1, 1,
    1, -1, -1, -1, -1, -1, -1, 1, 1, -1, -1, -1, -1, -1, -1, 1,
    1, -1, -1, -1, -1, -1, -1, 1, 1, -1, -1, -1, -1, -1, -1, 1,
    1, -1, -1, -1, -1, -1, -1, 1, 3, 1, 1, 1, 1, 1, 1, 3,
], dtype=float)
_ZZ_AB = np.array([
    3, 1, 1, -1, 1, -1, -1, -3, 1, 3, -1, 1, -1, 1, -3, -1,
    1, -1, 3, 1, -1, -3, 1, -1, -1, 1, 1, 3, -3, -1, -1, 1,
    1, -1, -1, -3, 3, 1, 1, -1, -1, 1, -3, -1, 1, 3, -1, 1,
    -1, -3, 1, -1, 1, -1, 3, 1, -3, -1, -1, 1, -1, 1, 1, 3,
], dtype=float)
_Z_APZ_B = np.array([
    3, 2, 2, 1, 2, 1, 1, 0, 2, 1, 1, 0, 1, 0, 0, -1,
    2, 1, 1, 0, 1, 0, 0, -1, 1, 0, 0, -1, 0, -1, -1, -2,
    2, 1, 1, 0, 1, 0, 0, -1, 1, 0, 0, -1, 0, -1, -1, -2,
    1, 0, 0, -1, 0, -1, -1, -2, 0, -1, -1, -2, -1, -2, -2, -3,
], dtype=float)


def n6_reference_terms(P) -> tuple[float, float, float]:
    """(ZZ_A + ZZ_B, ZZ_AB, Z_A + Z_B) for a length-64 register, from the fixed tables."""
    P = np.asarray(P, dtype=float)
    if P.shape != (64,):
        raise LengthMismatch(f"expected a length-64 register, got shape {P.shape}")
    return 2 * float(_ZZ_APZZ_B @ P), float(_ZZ_AB @ P), 2 * float(_Z_APZ_B @ P)
