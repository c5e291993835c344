"""Quantum runtime: load an ELFQ image, bind shared parameters, dispatch kernels.

Kernels are compiled once. At dispatch, only the symbolic instruction words
of the requested block are rewritten (into a scratch copy) with the current
parameter values; everything else is issued exactly as compiled.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .codegen.elfq import ElfqImage
from .codegen.encoding import apply_patches, decode_kernel, find_patch_sites
from .errors import (
    BackendUnavailable,
    QubitCountTooSmall,
    RuntimeIndexError,
    UnknownKernel,
    UnknownParam,
)
from .ir.module import Sym
from .sim import StateVector

BACKENDS = ("statevector",)


@dataclass
class DeviceConfig:
    backend: str = "statevector"
    qubits: int | None = None  # None: exactly the image's qubit count
    seed: int | None = 0


@dataclass
class SessionStats:
    dispatches: int = 0
    compile_count: int = 0
    compile_seconds: float = 0.0
    patched_words: int = 0
    dispatch_seconds: list[float] = field(default_factory=list)

    @property
    def total_dispatch_seconds(self) -> float:
        return float(sum(self.dispatch_seconds))


class ParamStore:
    """Host-side values of the shared parameter arrays, all starting at 0.0."""

    def __init__(self, arrays: dict[str, int]):
        self._arrays = {name: [0.0] * n for name, n in arrays.items()}

    def __contains__(self, name: str) -> bool:
        return name in self._arrays

    def names(self) -> list[str]:
        return list(self._arrays)

    def _slot(self, array: str, index: int) -> list[float]:
        if array not in self._arrays:
            raise UnknownParam(f"no shared parameter array named {array!r}")
        values = self._arrays[array]
        if not 0 <= index < len(values):
            raise RuntimeIndexError(f"{array}[{index}] out of range (length {len(values)})")
        return values

    def set(self, array: str, index: int, value: float):
        self._slot(array, index)[index] = float(value)

    def get(self, array: str, index: int) -> float:
        return self._slot(array, index)[index]

    def values_for(self, symbols: Sequence[Sym]) -> list[float]:
        return [self.get(s.array, s.index) for s in symbols]


def patch_qbb(code: bytes, params: ParamStore, symtab: Sequence[Sym]) -> bytes:
    """Return ``code`` with every symbolic parameter word replaced by its current value."""
    return apply_patches(code, find_patch_sites(code), params.values_for(symtab))


class Session:
    def __init__(self, image: ElfqImage, cfg: DeviceConfig | None = None,
                 compile_count: int = 0, compile_seconds: float = 0.0):
        cfg = cfg or DeviceConfig()
        if cfg.backend not in BACKENDS:
            raise BackendUnavailable(f"backend {cfg.backend!r} is not available")
        nq = image.num_qubits if cfg.qubits is None else cfg.qubits
        if nq < image.num_qubits:
            raise QubitCountTooSmall(f"image needs {image.num_qubits} qubits, device has {nq}")
        seed = cfg.seed
        if os.environ.get("QRT_SEED"):
            seed = int(os.environ["QRT_SEED"])
        self.image = image
        self.num_qubits = max(nq, 1)
        self.device = StateVector(self.num_qubits, seed)
        self.params = ParamStore(image.decls_of("shared"))
        self.cbits = [0] * image.num_cbits
        self._cbit_offsets: dict[str, tuple[int, int]] = {}
        off = 0
        for name, n in image.decls_of("cbit").items():
            self._cbit_offsets[name] = (off, n)
            off += n
        self._register = np.zeros(2 ** self.num_qubits)
        self._register[0] = 1.0
        # patch sites are located once, at load time
        self._blocks = {name: (image.kernel_code(name), find_patch_sites(image.kernel_code(name)))
                        for name in image.kernel_names}
        self.stats = SessionStats(compile_count=compile_count, compile_seconds=compile_seconds)

    def set_param(self, array: str, index: int, value: float):
        self.params.set(array, index, value)

    def set_params(self, array: str, values: Sequence[float]):
        for i, v in enumerate(values):
            self.params.set(array, i, v)

    def call_kernel(self, name: str):
        """Blocking dispatch of one quantum basic block."""
        if name not in self._blocks:
            raise UnknownKernel(f"no kernel named {name!r} in image")
        t0 = time.perf_counter()
        code, sites = self._blocks[name]
        if sites:
            code = apply_patches(code, sites, self.params.values_for(self.image.symbols))
            self.stats.patched_words += len(sites)
        instrs = decode_kernel(code, self.image.symbols)
        written, snapshot = self.device.execute(instrs)
        for c, bit in written.items():
            self.cbits[c] = bit
        if snapshot is not None:
            self._register = snapshot
        self.stats.dispatches += 1
        self.stats.dispatch_seconds.append(time.perf_counter() - t0)

    def get_cbit(self, array: str, index: int) -> int:
        if array not in self._cbit_offsets:
            raise UnknownParam(f"no cbit array named {array!r}")
        off, n = self._cbit_offsets[array]
        if not 0 <= index < n:
            raise RuntimeIndexError(f"{array}[{index}] out of range (length {n})")
        return self.cbits[off + index]

    def get_probability_register(self) -> np.ndarray:
        return self._register.copy()


def open_session(image: ElfqImage, cfg: DeviceConfig | None = None, **kw) -> Session:
    return Session(image, cfg, **kw)
