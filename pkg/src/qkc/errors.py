"""Exception hierarchy shared by every stage of the toolchain.

Every error carries a short, stable ``code`` so callers (and the CLI) can
distinguish failure cases without string matching.
"""

from __future__ import annotations


class QkcError(Exception):
    code = "E_QKC"


class SourceError(QkcError):
    """An error that can be pinned to a position in a ``.qk`` source file."""

    code = "E_SOURCE"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"{self.line}:{self.column}: {self.message}"


class LexError(SourceError):
    code = "E_LEX"

    def __init__(self, text: str, line: int, column: int):
        super().__init__(f"unexpected character {text!r}", line, column)
        self.text = text


class ParseError(SourceError):
    code = "E_PARSE"

    def __init__(self, expected: str, found: str, line: int, column: int):
        super().__init__(f"expected {expected}, found {found!r}", line, column)
        self.expected = expected
        self.found = found


class SemanticError(SourceError):
    code = "E_SEMANTIC"


class UndefinedSymbol(SemanticError):
    code = "E_UNDEFINED"

    def __init__(self, name: str, line: int | None = None, column: int | None = None):
        super().__init__(f"undefined symbol {name!r}", line, column)
        self.name = name


class DuplicateDefinition(SemanticError):
    code = "E_DUPLICATE"

    def __init__(self, name: str, line: int | None = None, column: int | None = None):
        super().__init__(f"duplicate definition of {name!r}", line, column)
        self.name = name


class ArityMismatch(SemanticError):
    code = "E_ARITY"

    def __init__(self, gate: str, expected: int, found: int, what: str = "qubits",
                 line: int | None = None, column: int | None = None):
        super().__init__(f"{gate}: expected {expected} {what}, found {found}", line, column)
        self.gate = gate
        self.expected = expected
        self.found = found


class RecursiveKernelCall(SemanticError):
    code = "E_RECURSION"

    def __init__(self, cycle: list[str], line: int | None = None, column: int | None = None):
        super().__init__("recursive kernel call: " + " -> ".join(cycle), line, column)
        self.cycle = cycle


class IndexOutOfRange(SemanticError):
    code = "E_INDEX"

    def __init__(self, name: str, index: int, length: int,
                 line: int | None = None, column: int | None = None):
        super().__init__(f"index {index} out of range for {name!r} of length {length}", line, column)
        self.name = name
        self.index = index
        self.length = length


class TypeMismatch(SemanticError):
    code = "E_TYPE"


class LoopBoundNegative(SemanticError):
    code = "E_LOOP_NEGATIVE"


class NonConstantLoopBound(SemanticError):
    code = "E_LOOP_NONCONST"


class KernelTooLarge(SemanticError):
    code = "E_KERNEL_SIZE"


# --- IR / gate database ---

class ParamCountMismatch(QkcError):
    code = "E_PARAM_COUNT"


class IRParseError(QkcError):
    code = "E_IR_PARSE"


# --- passes ---

class PassError(QkcError):
    code = "E_PASS"


class NotDecomposable(PassError):
    code = "E_NOT_DECOMPOSABLE"


class TooManyQubits(PassError):
    code = "E_TOO_MANY_QUBITS"


class NotRoutable(PassError):
    code = "E_NOT_ROUTABLE"


class TargetConfigError(QkcError):
    code = "E_TARGET"


# --- codegen ---

class UnencodableGate(QkcError):
    code = "E_UNENCODABLE"


class ElfqError(QkcError):
    """Anything wrong with an ELFQ image or an encoded instruction stream."""

    code = "E_ELFQ"


class BadOpcode(ElfqError):
    code = "E_BAD_OPCODE"


class TruncatedParamWord(ElfqError):
    code = "E_TRUNCATED"


class NonzeroReservedBits(ElfqError):
    code = "E_RESERVED_BITS"


class BadMagic(ElfqError):
    code = "E_BAD_MAGIC"


class BadVersion(ElfqError):
    code = "E_BAD_VERSION"


class SectionOutOfBounds(ElfqError):
    code = "E_SECTION_BOUNDS"


class DanglingSymbolIndex(ElfqError):
    code = "E_DANGLING_SYMBOL"


class MalformedImage(ElfqError):
    code = "E_MALFORMED"


# --- simulator / runtime ---

class SimulatorError(QkcError):
    code = "E_SIM"


class BadOperands(SimulatorError):
    code = "E_BAD_OPERANDS"


class SimTooManyQubits(SimulatorError):
    code = "E_SIM_TOO_MANY_QUBITS"


class RuntimeErrorBase(QkcError):
    code = "E_QRT"


class QubitCountTooSmall(RuntimeErrorBase):
    code = "E_QUBIT_COUNT"


class BackendUnavailable(RuntimeErrorBase):
    code = "E_BACKEND"


class UnknownParam(RuntimeErrorBase):
    code = "E_UNKNOWN_PARAM"


class UnknownKernel(RuntimeErrorBase):
    code = "E_UNKNOWN_KERNEL"


class RuntimeIndexError(RuntimeErrorBase):
    code = "E_RT_INDEX"


# --- workload ---

class WorkloadError(QkcError):
    code = "E_WORKLOAD"


class BadMask(WorkloadError):
    code = "E_BAD_MASK"


class LengthMismatch(WorkloadError):
    code = "E_LENGTH"


class NotDensityMatrix(WorkloadError):
    code = "E_NOT_DENSITY"


class BadLength(WorkloadError):
    code = "E_BAD_LENGTH"


class ConfigError(WorkloadError):
    code = "E_CONFIG"
