"""Source-to-image compilation in one call, with a process-wide compile counter."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

from .codegen.elfq import ElfqImage, build_image
from .frontend import lower_source
from .ir.module import QModule
from .passes.pipeline import PassReport, run_pipeline
from .passes.target import TargetConfig

_lock = threading.Lock()
_compiles = 0


@dataclass
class CompileResult:
    module: QModule
    image: ElfqImage
    report: PassReport
    seconds: float


def compile_count() -> int:
    return _compiles


def compile_source(source: str, target: TargetConfig | None = None, opt_level: int = 1) -> CompileResult:
    """Front end, pass pipeline and ELFQ image construction."""
    global _compiles
    t0 = time.perf_counter()
    m, report = run_pipeline(lower_source(source), target, opt_level)
    image = build_image(m)
    with _lock:
        _compiles += 1
    return CompileResult(m, image, report, time.perf_counter() - t0)
