import math
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkc.errors import (
    ArityMismatch, DuplicateDefinition, IndexOutOfRange, KernelTooLarge, LexError, LoopBoundNegative,
    NonConstantLoopBound, ParseError, RecursiveKernelCall, UndefinedSymbol,
)
from qkc.frontend import analyze, format_program, lower, lower_source, parse, parse_source, tokenize
from qkc.frontend import ast
from qkc.ir import print_ir
from qkc.ir.module import Call, Imm, Instr, QRef, Sym
from qkc.tfd import generate_source


def kinds(src):
    return [(t.kind, t.text) for t in tokenize(src)]


# -- tokenize ---------------------------------------------------------------

def test_empty_source_is_just_eof():
    toks = tokenize("")
    assert [t.kind for t in toks] == ["eof"]


def test_qbit_declaration_tokens():
    assert kinds("qbit q[3];")[:-1] == [
        ("keyword", "qbit"), ("identifier", "q"), ("punctuation", "["),
        ("integer", "3"), ("punctuation", "]"), ("punctuation", ";"),
    ]


def test_gate_call_tokens_follow_grammar_terminals():
    # RX ( q [ 0 ] , P [ 0 ] ) ;  -> 13 terminals plus end of input
    toks = kinds("RX(q[0], P[0]);")
    assert len(toks) == 14
    assert toks[-1][0] == "eof"
    assert [k for k, _ in toks[:-1]].count("identifier") == 3
    assert [k for k, _ in toks[:-1]].count("integer") == 2


def test_float_and_range_tokens():
    toks = kinds("1.5 2e-3 0..4")
    assert toks[:-1] == [("float", "1.5"), ("float", "2e-3"), ("integer", "0"),
                         ("punctuation", ".."), ("integer", "4")]


def test_unknown_character_is_an_error_with_position():
    with pytest.raises(LexError) as ei:
        tokenize("qbit q[1];\n  @")
    assert (ei.value.line, ei.value.column) == (2, 3)


def test_spans_increase_and_gaps_are_whitespace_or_comments():
    src = generate_source(3)
    toks = tokenize(src)
    pos = 0
    for t in toks[:-1]:
        assert t.offset >= pos
        gap = src[pos:t.offset]
        assert re.fullmatch(r"(\s|//[^\n]*)*", gap)
        assert src[t.offset:t.end] == t.text
        pos = t.end


# -- parse ------------------------------------------------------------------

def test_minimal_program_shape():
    prog = parse_source("qbit q[1]; kernel k() { X(q[0]); }")
    assert len(prog.decls) == 2
    decl, kern = prog.decls
    assert isinstance(decl, ast.ArrayDecl) and decl.kind == "qbit"
    assert isinstance(kern, ast.KernelDecl) and len(kern.body) == 1
    assert isinstance(kern.body[0], ast.GateCall)


def test_for_loop_node():
    prog = parse_source("kernel k() { for i in 0..3 { X(q[i]); } }")
    (kern,) = prog.decls
    (loop,) = kern.body
    assert isinstance(loop, ast.ForLoop) and loop.var == "i"
    assert len(loop.body) == 1 and isinstance(loop.body[0], ast.GateCall)


def test_tfd_six_qubit_source_parses_to_seven_kernels():
    prog = parse_source(generate_source(3))
    kernels = [d for d in prog.decls if isinstance(d, ast.KernelDecl)]
    assert len(kernels) == 7
    analyze(prog)


@pytest.mark.parametrize("src", [
    "qbit q[1] kernel k() {}",
    "kernel k() { X(q[0]) }",
    "kernel k() { for i 0..3 { } }",
    "kernel () {}",
])
def test_syntax_errors_raise_parse_error(src):
    with pytest.raises(ParseError) as ei:
        parse_source(src)
    assert ei.value.line == 1


def test_parse_error_reports_expected_and_found():
    with pytest.raises(ParseError) as ei:
        parse_source("qbit q[2];\nkernel k() {\n  H(q[0]\n}")
    e = ei.value
    assert (e.line, e.column) == (4, 1)
    assert e.found == "}"


ROUNDTRIP_SOURCES = [
    "qbit q[1]; kernel k() { X(q[0]); }",
    "const int N = 2 * 3 - 1; qbit q[N]; cbit c[N]; shared double P[4];"
    "kernel k() { for i in 0..N { RX(q[i], -P[1] * 2 + pi / 4); MEASZ(q[i], c[i]); } }",
    "qbit q[3]; kernel a() { CCNOT(q[0], q[1], q[2]); } kernel b() { a(); a(); }",
    "const int A = (1 + 2) * 3; const int B = A - (2 - 1); qbit q[B]; kernel k() { RZ(q[B - 1], 1.0 / (2.0 + 1.0)); }",
    generate_source(2),
]


@pytest.mark.parametrize("src", ROUNDTRIP_SOURCES)
def test_print_then_reparse_is_identity(src):
    prog = parse_source(src)
    again = parse_source(format_program(prog))
    assert again == prog
    assert format_program(again) == format_program(prog)


_leaf = st.one_of(
    st.integers(0, 50).map(ast.IntLit),
    st.floats(0, 100, allow_nan=False, allow_infinity=False).map(lambda v: ast.FloatLit(round(v, 3))),
    st.just(ast.Pi()),
    st.sampled_from(["N", "M"]).map(ast.Name),
    st.integers(0, 3).map(lambda i: ast.ElemRef("P", ast.IntLit(i))),
)
_expr = st.recursive(
    _leaf,
    lambda sub: st.one_of(
        sub.map(ast.Neg),
        st.tuples(st.sampled_from("+-*/"), sub, sub).map(lambda t: ast.BinOp(*t)),
    ),
    max_leaves=12,
)


@settings(max_examples=200, deadline=None)
@given(_expr)
def test_expression_printing_roundtrips(e):
    src = f"kernel k() {{ RX(q[0], {ast.format_expr(e)}); }}"
    prog = parse_source(src)
    (kern,) = prog.decls
    assert kern.body[0].args[1] == e


# -- analyze ----------------------------------------------------------------

def test_undeclared_array():
    with pytest.raises(UndefinedSymbol) as ei:
        analyze(parse_source("kernel k() { X(q[0]); }"))
    assert ei.value.name == "q"


def test_mutual_recursion_detected():
    with pytest.raises(RecursiveKernelCall):
        analyze(parse_source("kernel a() { b(); } kernel b() { a(); }"))


def test_gate_arity_checked():
    with pytest.raises(ArityMismatch) as ei:
        analyze(parse_source("qbit q[2]; kernel k() { CNOT(q[0]); }"))
    assert (ei.value.expected, ei.value.found) == (2, 1)


def test_constant_index_bounds_checked():
    with pytest.raises(IndexOutOfRange):
        analyze(parse_source("qbit q[2]; kernel k() { X(q[2]); }"))


def test_duplicate_names_rejected():
    with pytest.raises(DuplicateDefinition):
        analyze(parse_source("qbit q[2]; cbit q[2];"))
    with pytest.raises(DuplicateDefinition):
        analyze(parse_source("kernel k() {} kernel k() {}"))


def test_symbol_table_contents():
    st_ = analyze(parse_source(generate_source(3)))
    assert st_.qbits == {"QReg": 6}
    assert st_.cbits == {"CReg": 6}
    assert st_.params == {"QVarParams": 4}
    assert st_.consts["N"] == 6
    assert set(st_.kernels) == {"PrepZAll", "BellPrep", "TFD_terms", "XmaptoZ", "MeasZAll", "tfd_Z", "tfd_X"}


# -- lower ------------------------------------------------------------------

def body(src, name="k"):
    return lower_source(src).kernel(name).body


def test_loop_unrolls_three_times():
    b = body("qbit q[3]; kernel k() { for i in 0..3 { X(q[i]); } }")
    assert b == [Instr("X", (QRef("q", i),)) for i in range(3)]


def test_negative_half_pi_folds_to_immediate():
    (ins,) = body("qbit q[1]; kernel k() { RY(q[0], -pi/2); }")
    assert ins.param == Imm(-1.5707963267948966)


def test_param_index_folds_but_value_stays_symbolic():
    (ins,) = body("qbit q[1]; shared double P[4]; kernel k() { RX(q[0], P[1+1]); }")
    assert ins.param == Sym("P", 2)


def test_kernel_calls_survive_lowering():
    m = lower_source("qbit q[1]; kernel a() { X(q[0]); } kernel b() { a(); }")
    assert m.kernel("b").body == [Call("a")]


def test_integer_division_truncates_and_floats_promote():
    b = body("qbit q[4]; kernel k() { X(q[7 / 2]); RZ(q[0], 7 / 2); RZ(q[0], 7.0 / 2); RZ(q[0], -7 / 2); }")
    assert b[0].qubits == (QRef("q", 3),)
    assert b[1].param == Imm(3.0)
    assert b[2].param == Imm(3.5)
    assert b[3].param == Imm(-3.0)


def test_negative_loop_bound_rejected():
    with pytest.raises(LoopBoundNegative):
        lower_source("qbit q[3]; kernel k() { for i in 0 - 1..1 { X(q[0]); } }")


def test_descending_range_is_empty():
    assert body("qbit q[3]; kernel k() { for i in 3..1 { X(q[0]); } }") == []


def test_loop_bounds_must_be_constant():
    with pytest.raises(NonConstantLoopBound):
        lower_source("qbit q[3]; kernel k() { for i in 0..2 { for j in 0..i { X(q[j]); } } }")


def test_unrolled_size_cap():
    with pytest.raises(KernelTooLarge):
        lower_source("qbit q[1]; kernel k() { for i in 0..1024 { for j in 0..1025 { X(q[0]); } } }")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 64), st.integers(0, 64), st.integers(1, 3))
def test_unroll_count_matches_trip_count(a, b, per):
    a, b = min(a, b), max(a, b)
    stmts = " ".join("H(q[0]);" for _ in range(per))
    src = f"qbit q[1]; kernel k() {{ X(q[0]); for i in {a}..{b} {{ {stmts} }} }}"
    assert len(body(src)) == 1 + (b - a) * per


def test_lowering_is_deterministic():
    src = generate_source(3)
    assert print_ir(lower_source(src)) == print_ir(lower_source(src))


def test_shared_params_never_fold():
    m = lower_source(generate_source(3))
    rotations = [i for k in m.kernels for i in k.instructions if i.gate in ("RX", "RZ")]
    assert rotations and all(isinstance(i.param, Sym) for i in rotations)
    assert {i.param.index for i in rotations} == {0, 1, 2, 3}


def test_pi_constant_value():
    (ins,) = body("qbit q[1]; kernel k() { RZ(q[0], pi); }")
    assert ins.param.value == math.pi
