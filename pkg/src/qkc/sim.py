"""Dense state-vector simulator; the runtime's default device backend.

Basis index convention: qubit 0 is the most significant bit, so index ``b``
is the ket ``|q0 q1 ... q(n-1)>`` read left to right.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import BadOperands, SimTooManyQubits
from .ir.gates import gate_matrix, lookup
from .ir.module import Imm, Instr

MAX_QUBITS = 24
_MIXED_TOL = 1e-14


class StateVector:
    def __init__(self, n: int, seed: int | None = None):
        if not isinstance(n, int) or n < 1:
            raise BadOperands(f"qubit count must be >= 1, got {n!r}")
        if n > MAX_QUBITS:
            raise SimTooManyQubits(f"{n} qubits exceeds the simulator limit of {MAX_QUBITS}")
        self.n = n
        self.rng = np.random.default_rng(seed)
        self._psi = np.zeros((2,) * n, dtype=complex)
        self._psi.flat[0] = 1.0
        self._fixed_cache: dict[str, np.ndarray] = {}

    @property
    def amplitudes(self) -> np.ndarray:
        return self._psi.reshape(-1).copy()

    def set_amplitudes(self, amps: Sequence[complex]):
        a = np.asarray(amps, dtype=complex)
        if a.shape != (2 ** self.n,):
            raise BadOperands(f"expected {2 ** self.n} amplitudes, got shape {a.shape}")
        self._psi = a.reshape((2,) * self.n).copy()

    def reset(self):
        self._psi[...] = 0
        self._psi.flat[0] = 1.0

    def _check(self, qubits: Sequence[int]):
        if len(set(qubits)) != len(qubits):
            raise BadOperands(f"repeated qubit in {list(qubits)}")
        for q in qubits:
            if not isinstance(q, (int, np.integer)) or not 0 <= q < self.n:
                raise BadOperands(f"qubit {q!r} out of range for {self.n} qubits")

    def apply_unitary(self, matrix: np.ndarray, qubits: Sequence[int]):
        qubits = list(qubits)
        k = len(qubits)
        if not 1 <= k <= 3:
            raise BadOperands(f"gates act on 1 to 3 qubits, got {k}")
        self._check(qubits)
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2 ** k, 2 ** k):
            raise BadOperands(f"matrix shape {m.shape} does not match {k} qubit(s)")
        self._apply(m, qubits)

    def _apply(self, m: np.ndarray, qubits: Sequence[int]):
        if len(qubits) == 1:
            # (2,2) @ (left, 2, right) broadcasts over the leading axis
            q = qubits[0]
            self._psi = (m @ self._psi.reshape(1 << q, 2, -1)).reshape(self._psi.shape)
            return
        k = len(qubits)
        rest = [a for a in range(self.n) if a not in qubits]
        perm = list(qubits) + rest
        flat = self._psi.transpose(perm).reshape(1 << k, -1)
        out = (m @ flat).reshape((2,) * self.n)
        self._psi = np.ascontiguousarray(out.transpose(np.argsort(perm)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self._psi.reshape(-1)) ** 2

    def prob_one(self, q: int) -> float:
        self._check([q])
        return float(np.sum(np.abs(np.take(self._psi, 1, axis=q)) ** 2))

    def _project(self, q: int, bit: int, p: float):
        idx = [slice(None)] * self.n
        idx[q] = 1 - bit
        self._psi[tuple(idx)] = 0
        self._psi /= np.sqrt(p)

    def measure_z(self, q: int, rng: np.random.Generator | None = None) -> int:
        """Sample qubit ``q`` in the Z basis, collapse, and return the bit."""
        p1 = self.prob_one(q)
        r = (rng or self.rng).random()
        bit = int(r < p1)
        self._project(q, bit, p1 if bit else 1.0 - p1)
        return bit

    def prep_z(self, q: int):
        """Reset qubit ``q`` to |0> by measuring and flipping; no RNG draw if already definite."""
        p1 = self.prob_one(q)
        if p1 <= _MIXED_TOL:
            bit = 0
        elif p1 >= 1 - _MIXED_TOL:
            bit = 1
        else:
            bit = int(self.rng.random() < p1)
        self._project(q, bit, p1 if bit else 1.0 - p1)
        if bit:
            self.apply_unitary(_X, [q])

    def _matrix(self, ins: Instr) -> np.ndarray:
        g = lookup(ins.gate)
        if g.is_parametric:
            if not isinstance(ins.param, Imm):
                raise BadOperands(f"{ins.gate}: unresolved parameter {ins.param!r}")
            return gate_matrix(g, [ins.param.value])
        m = self._fixed_cache.get(ins.gate)
        if m is None:
            m = self._fixed_cache[ins.gate] = gate_matrix(g)
        return m

    def execute(self, instrs: Sequence[Instr]) -> tuple[dict[int, int], np.ndarray | None]:
        """Run physical-qubit instructions in order.

        Returns the cbits written and the probability snapshot taken just
        before the first measurement (``None`` if nothing was measured).
        """
        cbits: dict[int, int] = {}
        snapshot = None
        for ins in instrs:
            if ins.gate == "PREPZ":
                self.prep_z(ins.qubits[0])
            elif ins.gate == "MEASZ":
                if snapshot is None:
                    snapshot = self.probabilities()
                cbits[ins.cbit] = self.measure_z(ins.qubits[0])
            else:
                if max(ins.qubits) >= self.n:
                    raise BadOperands(f"{ins.gate}: qubit {max(ins.qubits)} out of range for {self.n} qubits")
                self._apply(self._matrix(ins), ins.qubits)
        return cbits, snapshot


_X = np.array([[0, 1], [1, 0]], dtype=complex)


def init(n: int, seed: int | None = None) -> StateVector:
    return StateVector(n, seed)
