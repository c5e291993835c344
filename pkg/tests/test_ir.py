import json
import math

import numpy as np
import pytest

from qkc.errors import IRParseError, ParamCountMismatch
from qkc.frontend import lower_source
from qkc.ir import parse_ir, print_ir
from qkc.ir.gates import by_identifier, gate_matrix, gatedb, lookup
from qkc.ir.module import Imm, Instr, QKernel, QModule, QRef, Sym, validate
from qkc.passes import TargetConfig, run_pipeline
from qkc.tfd import generate_source

from oracle_utils import FIXED, rotation

RECORD_KEYS = {
    "matrix_real", "matrix_imag", "matrix_order", "is_hermitian", "is_unitary", "is_mutable",
    "qubit_list", "parametric_list", "control_qubit_list", "local_basis_list", "identifier",
}


# -- gate database ----------------------------------------------------------

def test_seventeen_gates_with_distinct_identifiers():
    db = gatedb()
    assert len(db) == 17
    assert len({g.identifier for g in db}) == 17
    assert {g.name for g in db} == set(FIXED) | {"RX", "RY", "RZ", "PREPZ", "MEASZ"}
    for g in db:
        assert by_identifier(g.identifier) is g


def test_x_record():
    x = lookup("X")
    assert list(x.matrix_real) == [0, 1, 1, 0]
    assert list(x.matrix_imag) == [0, 0, 0, 0]
    assert x.is_hermitian
    assert x.parametric_list == ()


def test_records_use_exact_attribute_names():
    for g in gatedb():
        rec = json.loads(g.to_json())
        assert set(rec) == RECORD_KEYS
        assert rec["matrix_order"] == "rm"


def test_cnot_is_controlled_permutation():
    g = lookup("CNOT")
    m = gate_matrix(g)
    assert np.array_equal(m, np.eye(4)[[0, 1, 3, 2]])
    assert list(g.control_qubit_list) == [0]


def test_rz_zero_is_identity():
    assert np.allclose(gate_matrix("RZ", [0.0]), np.eye(2), atol=0)


def test_rx_pi_is_minus_i_x():
    assert np.allclose(gate_matrix("RX", [math.pi]), -1j * FIXED["X"], atol=1e-15)


def test_ry_half_pi():
    expected = np.array([[1, -1], [1, 1]]) / math.sqrt(2)
    assert np.allclose(gate_matrix("RY", [math.pi / 2]), expected, atol=1e-15)


def test_hadamard():
    assert np.allclose(gate_matrix("H"), FIXED["H"], atol=1e-15)


@pytest.mark.parametrize("name", sorted(FIXED))
def test_fixed_matrices_match_textbook(name):
    g = lookup(name)
    m = gate_matrix(g)
    stored = (np.array(g.matrix_real) + 1j * np.array(g.matrix_imag)).reshape(m.shape)
    assert np.allclose(m, FIXED[name], atol=1e-15)
    assert np.array_equal(stored, m)


def test_rotation_generators_unitary_and_textbook():
    rng = np.random.default_rng(0)
    for name in ("RX", "RY", "RZ"):
        for theta in rng.uniform(-20, 20, 100):
            m = gate_matrix(name, [theta])
            assert np.allclose(m @ m.conj().T, np.eye(2), atol=1e-12)
            assert np.allclose(m, rotation(name, theta), atol=1e-14)


def test_hermitian_flags_are_truthful():
    for g in gatedb():
        if not g.is_unitary:
            continue
        m = gate_matrix(g, [0.7] * g.num_params)
        assert np.allclose(m @ m.conj().T, np.eye(len(m)), atol=1e-12)
        if g.is_hermitian:
            assert np.max(np.abs(m - m.conj().T)) <= 1e-15


def test_prep_and_measure_are_non_unitary_operator_pairs():
    for name in ("PREPZ", "MEASZ"):
        g = lookup(name)
        assert not g.is_unitary
        ops = gate_matrix(g)
        assert ops.shape == (2, 2, 2)
        # both are complete: sum of K^dag K is the identity
        assert np.allclose(sum(k.conj().T @ k for k in ops), np.eye(2))


def test_param_count_checked():
    with pytest.raises(ParamCountMismatch):
        gate_matrix("RX")
    with pytest.raises(ParamCountMismatch):
        gate_matrix("X", [1.0])


# -- validation ---------------------------------------------------------------

def one_kernel(body, **decls):
    return QModule({"q": 2}, {"c": 2}, {"P": 2}, [QKernel("k", body)])


def test_duplicate_operand_reported():
    errs = validate(one_kernel([Instr("CZ", (QRef("q", 0), QRef("q", 0)))]))
    assert any("duplicate qubit operand" in e for e in errs)


def test_missing_parameter_reported():
    errs = validate(one_kernel([Instr("RX", (QRef("q", 0),))]))
    assert any("missing parameter" in e for e in errs)


@pytest.mark.parametrize("ins, needle", [
    (Instr("X", (QRef("q", 5),)), "out of range"),
    (Instr("X", (QRef("r", 0),)), "unknown qubit array"),
    (Instr("MEASZ", (QRef("q", 0),)), "without cbit"),
    (Instr("X", (QRef("q", 0),), QRef("c", 0)), "unexpected cbit"),
    (Instr("X", (QRef("q", 0),), None, Imm(1.0)), "unexpected parameter"),
    (Instr("RX", (QRef("q", 0),), None, Sym("P", 9)), "parameter index"),
    (Instr("CNOT", (QRef("q", 0),)), "expects 2"),
    (Instr("FOO", (QRef("q", 0),)), "unknown gate"),
])
def test_validation_catches(ins, needle):
    errs = validate(one_kernel([ins]))
    assert any(needle in e for e in errs), errs


def test_validation_never_raises_and_collects_all():
    body = [Instr("RX", (QRef("q", 0),)), Instr("CZ", (QRef("q", 1), QRef("q", 1)))]
    assert len(validate(one_kernel(body))) == 2


def test_lowered_tfd_module_is_valid():
    assert validate(lower_source(generate_source(3))) == []


# -- textual form --------------------------------------------------------------

def test_empty_module_prints_header_only():
    text = print_ir(QModule())
    assert text.strip() == "; qkc-ir 1"
    assert parse_ir(text) == QModule()


def test_single_kernel_roundtrip():
    m = one_kernel([
        Instr("RX", (QRef("q", 0),), None, Sym("P", 1)),
        Instr("RZ", (QRef("q", 1),), None, Imm(1.5707963267948966)),
        Instr("MEASZ", (QRef("q", 0),), QRef("c", 0)),
    ])
    text = print_ir(m)
    assert "  RX q[0] sym P 1" in text
    assert "  RZ q[1] imm 1.5707963267948966" in text
    assert "  MEASZ q[0] -> c[0]" in text
    assert parse_ir(text) == m


def test_tfd_module_roundtrips_at_every_stage():
    m = lower_source(generate_source(3))
    text = print_ir(m)
    assert parse_ir(text) == m
    assert print_ir(parse_ir(text)) == text
    compiled, _ = run_pipeline(m, TargetConfig(6, "linear"))
    text = print_ir(compiled)
    back = parse_ir(text)
    assert back == compiled
    assert print_ir(back) == text


def test_immediates_roundtrip_bit_exactly():
    rng = np.random.default_rng(3)
    vals = list(rng.normal(size=50) * 1e3) + [5e-324, -0.0, 1e308, math.pi]
    m = one_kernel([Instr("RY", (QRef("q", 0),), None, Imm(float(v))) for v in vals])
    back = parse_ir(print_ir(m))
    got = [i.param.value for i in back.kernel("k").body]
    assert [math.copysign(1, v) for v in got] == [math.copysign(1, v) for v in vals]
    assert got == vals


@pytest.mark.parametrize("text", [
    "decl qbit q 1\n",
    "; qkc-ir 1\ndecl qbit q\n",
    "; qkc-ir 1\ndecl qbit q 1\nkernel k:\n  RX q[0] imm\n",
    "; qkc-ir 1\nkernel k:\n  FROB q[0]\n",
    "; qkc-ir 1\n  X q[0]\n",
])
def test_malformed_ir_text(text):
    with pytest.raises(IRParseError):
        parse_ir(text)
