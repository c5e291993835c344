import numpy as np
import pytest

from qkc.codegen import build_image, encode_kernel
from qkc.codegen.encoding import find_patch_sites
from qkc.driver import compile_source
from qkc.errors import (
    BackendUnavailable, DanglingSymbolIndex, QubitCountTooSmall, RuntimeIndexError, UnknownKernel, UnknownParam,
)
from qkc.ir.module import Imm, Instr, QKernel, Sym
from qkc.runtime import DeviceConfig, ParamStore, open_session, patch_qbb
from qkc.tfd import generate_source, reference_pipeline

SRC = """
qbit q[2];
cbit c[2];
shared double P[2];
kernel prep() { PREPZ(q[0]); PREPZ(q[1]); }
kernel plus() { PREPZ(q[0]); H(q[0]); MEASZ(q[0], c[0]); }
kernel bell() { PREPZ(q[0]); PREPZ(q[1]); H(q[0]); CNOT(q[0], q[1]); MEASZ(q[0], c[0]); MEASZ(q[1], c[1]); }
kernel flip() { PREPZ(q[0]); X(q[0]); MEASZ(q[0], c[0]); }
kernel zero() { PREPZ(q[0]); MEASZ(q[0], c[0]); }
kernel rot() { PREPZ(q[0]); RX(q[0], P[0]); RX(q[0], P[0]); RY(q[1], P[1]); MEASZ(q[0], c[0]); }
kernel h0() { H(q[0]); }
kernel m0() { MEASZ(q[0], c[0]); }
"""


@pytest.fixture(scope="module")
def image():
    return compile_source(SRC).image


def session(image, **kw):
    return open_session(image, DeviceConfig(**kw))


def test_initial_register_is_ground_state(image):
    s = session(image)
    assert np.array_equal(s.get_probability_register(), [1, 0, 0, 0])
    s.call_kernel("prep")
    assert np.array_equal(s.get_probability_register(), [1, 0, 0, 0])
    assert s.stats.compile_count == 0


def test_qubit_count_checked(image):
    with pytest.raises(QubitCountTooSmall):
        session(image, qubits=1)
    assert session(image, qubits=4).num_qubits == 4


def test_unknown_backend(image):
    with pytest.raises(BackendUnavailable):
        session(image, backend="hardware")


def test_hadamard_register(image):
    s = session(image)
    s.call_kernel("plus")
    assert np.allclose(s.get_probability_register(), [0.5, 0, 0.5, 0])
    assert s.get_cbit("c", 0) in (0, 1)


def test_bell_register(image):
    s = session(image)
    s.call_kernel("bell")
    assert np.allclose(s.get_probability_register(), [0.5, 0, 0, 0.5], atol=1e-12)
    assert s.get_cbit("c", 0) == s.get_cbit("c", 1)


def test_cbits_after_prep_and_flip(image):
    s = session(image)
    s.call_kernel("zero")
    assert s.get_cbit("c", 0) == 0
    s.call_kernel("flip")
    assert s.get_cbit("c", 0) == 1


def test_register_is_a_copy(image):
    s = session(image)
    s.call_kernel("bell")
    r = s.get_probability_register()
    r[:] = 7
    assert np.allclose(s.get_probability_register(), [0.5, 0, 0, 0.5], atol=1e-12)


def test_parameters_are_observed(image):
    s = session(image)
    s.set_param("P", 0, 0.4)
    s.set_param("P", 0, 0.6)  # last write wins
    s.set_param("P", 1, 1.0)
    s.call_kernel("rot")
    p1_q0 = np.sin(0.6) ** 2  # two RX(0.6) = RX(1.2)
    p1_q1 = np.sin(0.5) ** 2
    expect = np.array([(1 - p1_q0) * (1 - p1_q1), (1 - p1_q0) * p1_q1, p1_q0 * (1 - p1_q1), p1_q0 * p1_q1])
    assert np.allclose(s.get_probability_register(), expect, atol=1e-12)
    assert s.stats.patched_words == 3


def test_param_and_cbit_errors(image):
    s = session(image)
    with pytest.raises(UnknownParam):
        s.set_param("Q", 0, 1.0)
    with pytest.raises(RuntimeIndexError):
        s.set_param("P", 2, 1.0)
    with pytest.raises(RuntimeIndexError):
        s.get_cbit("c", 5)
    with pytest.raises(UnknownKernel):
        s.call_kernel("nope")


def test_state_persists_across_calls(image):
    s = session(image)
    s.call_kernel("h0")
    s.call_kernel("m0")
    assert np.allclose(s.get_probability_register(), [0.5, 0, 0.5, 0])


def test_image_bytes_untouched(image):
    before = image.to_bytes()
    s = session(image)
    for v in np.linspace(-3, 3, 20):
        s.set_param("P", 0, v)
        s.call_kernel("rot")
    assert image.to_bytes() == before


def test_seeded_sessions_agree(image):
    def stream(seed):
        s = session(image, seed=seed)
        out = []
        for _ in range(40):
            s.call_kernel("bell")
            out.append((s.get_cbit("c", 0), s.get_cbit("c", 1)))
        return out
    assert stream(3) == stream(3)
    assert len(set(stream(3))) == 2


def test_env_seed_overrides(image, monkeypatch):
    def stream(seed):
        s = session(image, seed=seed)
        bits = []
        for _ in range(40):
            s.call_kernel("plus")
            bits.append(s.get_cbit("c", 0))
        return bits
    monkeypatch.setenv("QRT_SEED", "11")
    assert stream(1) == stream(2)


# -- patching ------------------------------------------------------------------

def test_patch_without_symbols_is_identity():
    code, syms = encode_kernel(QKernel("k", [Instr("CZ", (0, 1)), Instr("RZ", (0,), None, Imm(0.2))]))
    assert patch_qbb(code, ParamStore({}), syms) == code


def test_patch_equals_direct_encoding():
    theta = 0.123456789
    code, syms = encode_kernel(QKernel("k", [Instr("RX", (0,), None, Sym("P", 0))]))
    store = ParamStore({"P": 1})
    store.set("P", 0, theta)
    direct, _ = encode_kernel(QKernel("k", [Instr("RX", (0,), None, Imm(theta))]))
    assert patch_qbb(code, store, syms) == direct


def test_shared_symbol_patched_everywhere():
    k = QKernel("k", [Instr("RX", (0,), None, Sym("P", 1)), Instr("RZ", (1,), None, Sym("P", 1))])
    code, syms = encode_kernel(k)
    store = ParamStore({"P": 2})
    store.set("P", 1, -0.5)
    direct, _ = encode_kernel(QKernel("k", [Instr("RX", (0,), None, Imm(-0.5)), Instr("RZ", (1,), None, Imm(-0.5))]))
    assert patch_qbb(code, store, syms) == direct


def test_patch_dangling_symbol():
    code, _ = encode_kernel(QKernel("k", [Instr("RX", (0,), None, Sym("P", 0))]))
    with pytest.raises(DanglingSymbolIndex):
        patch_qbb(code, ParamStore({}), [])


def test_patch_equivalence_tfd():
    res = compile_source(generate_source(2))
    s = open_session(res.image)
    rng = np.random.default_rng(1)
    for _ in range(10):
        angles = rng.uniform(-7, 7, 4)
        s.set_params("QVarParams", angles)
        s.call_kernel("tfd_Z")
        reg = s.get_probability_register()
        folded = compile_source(generate_source(2, fold_params=list(angles))).image
        f = open_session(folded)
        f.call_kernel("tfd_Z")
        assert np.max(np.abs(reg - f.get_probability_register())) <= 1e-12
        pz, _ = reference_pipeline(2, angles)
        assert np.max(np.abs(reg - pz)) <= 1e-10
    assert find_patch_sites(res.image.kernel_code("tfd_Z"))
