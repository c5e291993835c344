"""IR-to-IR passes: inlining, peephole, decomposition, mapping, scheduling."""

from .decompose import RULES, decompose_to_native
from .inline import inline_kernels
from .mapping import map_qubits
from .peephole import peephole_optimize
from .pipeline import PassReport, PassStats, default_target, run_pipeline
from .schedule import kernel_depth, schedule_asap
from .target import DEFAULT_NATIVE, TargetConfig

__all__ = [
    "DEFAULT_NATIVE", "PassReport", "PassStats", "RULES", "TargetConfig", "decompose_to_native",
    "default_target", "inline_kernels", "kernel_depth", "map_qubits", "peephole_optimize",
    "run_pipeline", "schedule_asap",
]
