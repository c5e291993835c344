import math

import numpy as np
import pytest

from qkc.errors import BadOperands, SimTooManyQubits
from qkc.ir.module import Imm, Instr
from qkc.sim import StateVector, init

from oracle_utils import ARITY, FIXED, UNITARY_GATES, circuit_unitary, embed, matrix, rotation

S2 = 1 / math.sqrt(2)


def random_ops(rng, n, length):
    ops = []
    allowed = [g for g in UNITARY_GATES if ARITY[g] <= n]
    for _ in range(length):
        g = allowed[rng.integers(len(allowed))]
        qs = tuple(int(x) for x in rng.choice(n, ARITY[g], replace=False))
        theta = float(rng.uniform(-7, 7)) if g in ("RX", "RY", "RZ") else None
        ops.append((g, qs, theta))
    return ops


def as_instrs(ops):
    return [Instr(g, qs, None, None if t is None else Imm(t)) for g, qs, t in ops]


def test_initial_states():
    assert np.array_equal(init(1).amplitudes, [1, 0])
    a = init(3).amplitudes
    assert len(a) == 8 and a[0] == 1 and not a[1:].any()


def test_qubit_limit():
    with pytest.raises(SimTooManyQubits):
        init(25)
    with pytest.raises(BadOperands):
        init(0)


def test_hadamard_on_zero():
    s = init(1)
    s.apply_unitary(FIXED["H"], [0])
    assert np.allclose(s.amplitudes, [S2, S2], atol=1e-15)


@pytest.mark.parametrize("theta", [0.0, 0.3, 1.7, math.pi, -2.2])
def test_rx_excitation_probability(theta):
    s = init(1)
    s.apply_unitary(rotation("RX", theta), [0])
    assert s.probabilities()[1] == pytest.approx(math.sin(theta / 2) ** 2, abs=1e-14)


def test_msb_convention():
    s = init(2)
    s.apply_unitary(FIXED["X"], [0])
    assert np.array_equal(s.probabilities(), [0, 0, 1, 0])


def test_bell_and_uniform():
    s = init(2)
    s.apply_unitary(FIXED["H"], [0])
    s.apply_unitary(FIXED["CNOT"], [0, 1])
    assert np.allclose(s.probabilities(), [0.5, 0, 0, 0.5], atol=1e-15)
    u = init(2)
    u.apply_unitary(FIXED["H"], [0])
    u.apply_unitary(FIXED["H"], [1])
    assert np.allclose(u.probabilities(), [0.25] * 4, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_single_qubit_embedding_matches_kron(n):
    rng = np.random.default_rng(n)
    for q in range(n):
        m = rotation("RY", 0.7) @ rotation("RZ", 1.1)
        psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        psi /= np.linalg.norm(psi)
        s = init(n)
        s.set_amplitudes(psi)
        s.apply_unitary(m, [q])
        kron = np.eye(1)
        for j in range(n):
            kron = np.kron(kron, m if j == q else np.eye(2))
        assert np.max(np.abs(s.amplitudes - kron @ psi)) <= 1e-12


def test_controlled_operand_order():
    for qs in ([3, 0, 2], [0, 2, 1], [2, 1, 0]):
        s = init(4)
        psi = np.random.default_rng(1).normal(size=16).astype(complex)
        psi /= np.linalg.norm(psi)
        s.set_amplitudes(psi)
        s.apply_unitary(FIXED["CCNOT"], qs)
        assert np.max(np.abs(s.amplitudes - embed(FIXED["CCNOT"], qs, 4) @ psi)) <= 1e-12


def test_random_three_qubit_circuits_match_dense_product():
    rng = np.random.default_rng(3)
    for _ in range(20):
        ops = random_ops(rng, 3, 30)
        s = init(3)
        s.execute(as_instrs(ops))
        expect = circuit_unitary(ops, 3)[:, 0]
        assert np.max(np.abs(s.amplitudes - expect)) <= 1e-10


def test_norm_preserved():
    rng = np.random.default_rng(6)
    s = init(4)
    for g, qs, t in random_ops(rng, 4, 200):
        s.apply_unitary(matrix(g, t), qs)
        assert abs(np.linalg.norm(s.amplitudes) - 1) <= 1e-12
    assert abs(s.probabilities().sum() - 1) <= 1e-12


@pytest.mark.parametrize("m, qs", [
    (FIXED["X"], [2]),
    (FIXED["X"], [-1]),
    (FIXED["CZ"], [0, 0]),
    (FIXED["CZ"], [0]),
    (np.eye(8), [0, 1]),
])
def test_bad_operands(m, qs):
    with pytest.raises(BadOperands):
        init(2).apply_unitary(m, qs)


def test_execute_rejects_out_of_range():
    with pytest.raises(BadOperands):
        init(2).execute([Instr("CZ", (0, 5))])


def test_measure_definite_states():
    for seed in range(20):
        s = init(1, seed)
        assert s.measure_z(0) == 0
        s.apply_unitary(FIXED["X"], [0])
        assert s.measure_z(0) == 1


def test_measure_collapses_and_renormalizes():
    s = init(2, 7)
    s.apply_unitary(FIXED["H"], [0])
    s.apply_unitary(FIXED["CNOT"], [0, 1])
    b = s.measure_z(0)
    p = s.probabilities()
    assert abs(p.sum() - 1) <= 1e-12
    assert p[3 * b] == pytest.approx(1.0, abs=1e-12)
    assert s.measure_z(1) == b


def test_plus_state_frequency():
    rng = np.random.default_rng(12345)
    ones = 0
    trials = 20000
    for _ in range(trials):
        s = StateVector(1)
        s.apply_unitary(FIXED["H"], [0])
        ones += s.measure_z(0, rng)
    assert 0.48 <= ones / trials <= 0.52


def test_prep_resets_to_zero():
    s = init(2, 3)
    s.apply_unitary(FIXED["H"], [0])
    s.apply_unitary(FIXED["X"], [1])
    s.prep_z(0)
    s.prep_z(1)
    assert np.allclose(s.probabilities(), [1, 0, 0, 0])


def test_prep_on_definite_state_consumes_no_randomness():
    a, b = init(1, 5), init(1, 5)
    a.prep_z(0)
    a.apply_unitary(FIXED["X"], [0])
    a.prep_z(0)
    assert a.rng.random() == b.rng.random()


def test_execute_snapshot_taken_before_first_measurement():
    s = init(2, 0)
    cbits, snap = s.execute([Instr("H", (0,)), Instr("MEASZ", (0,), 0), Instr("MEASZ", (1,), 1)])
    assert np.allclose(snap, [0.5, 0, 0.5, 0])
    assert set(cbits) == {0, 1} and cbits[1] == 0
    _, none = init(1).execute([Instr("X", (0,))])
    assert none is None


def test_seeded_runs_are_deterministic():
    def run(seed):
        s = init(3, seed)
        out = []
        for _ in range(30):
            s.execute([Instr("H", (0,)), Instr("CNOT", (0, 1)), Instr("RY", (2,), None, Imm(1.0))])
            c, _ = s.execute([Instr("MEASZ", (q,), q) for q in range(3)])
            out.append(tuple(c.values()))
        return out
    assert run(4) == run(4)
