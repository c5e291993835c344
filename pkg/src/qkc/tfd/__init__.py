"""Thermofield-double workload: program generator, cost, oracle, sweep."""

from .cost import ExpectationTerms, cost_terms, n6_reference_terms, ring_edges, total_cost, z_string_expectation
from .oracle import (
    MAX_ORACLE_L, fidelity, hamiltonian, reduced_density, reference_pipeline, reference_state,
    state_fidelity, thermal_state,
)
from .program import KERNELS, NUM_ANGLES, circuit, generate_source
from .sweep import (
    CSV_COLUMNS, ReferenceBackend, SweepResult, SweepRow, TfdConfig, ToolchainBackend, beta_of,
    compile_tfd, run_sweep, write_csv,
)

__all__ = [
    "CSV_COLUMNS", "ExpectationTerms", "KERNELS", "MAX_ORACLE_L", "NUM_ANGLES", "ReferenceBackend",
    "SweepResult", "SweepRow", "TfdConfig", "ToolchainBackend", "beta_of", "circuit", "compile_tfd",
    "cost_terms", "fidelity", "generate_source", "hamiltonian", "n6_reference_terms", "reduced_density",
    "reference_pipeline", "reference_state", "ring_edges", "run_sweep", "state_fidelity",
    "thermal_state", "total_cost", "write_csv", "z_string_expectation",
]
