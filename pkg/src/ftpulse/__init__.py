"""Pulse synthesis for fault-tolerant logical gates on stabilizer-encoded
qubit registers: geometric baseline sequences plus sequential (monotone)
and global gradient-based pulse optimization on coupled spin chains.
"""

__version__ = "0.1.0"

from .codes import (
    CodeSpec,
    TargetGate,
    bitflip3_code,
    five_qubit_code,
    logical_bloch,
    logical_gate,
)
from .gates import (
    GATE_NAMES,
    RotationStep,
    euler_pulse_length,
    euler_sequence,
    local_pulse_length,
    local_sequence,
    rotation,
    sequence_product,
    standard_gate,
)
from .linalg import (
    NonHermitianError,
    expm_hermitian_prop,
    gate_error_metrics,
    kron_embed,
    single_qubit_bloch,
)
from .models import (
    ContinuousField,
    HamiltonianModel,
    build_global_optimal,
    build_lab_frame_global,
    build_local_optimal,
    gaussian_pi_field,
    local_geometric_schedule,
)
from .optimize import (
    OptimizationRecord,
    OptimizerConfig,
    grape_iteration,
    iteration_sweep_experiment,
    sequential_sweep,
    synthesize,
)
from .propagate import (
    PiecewisePulse,
    Trajectory,
    fidelity_phase_invariant,
    fidelity_strict,
    propagate,
    simulate_gaussian_baseline,
)

__all__ = [
    "CodeSpec", "TargetGate", "bitflip3_code", "five_qubit_code",
    "logical_bloch", "logical_gate",
    "GATE_NAMES", "RotationStep", "euler_pulse_length", "euler_sequence",
    "local_pulse_length", "local_sequence", "rotation", "sequence_product",
    "standard_gate",
    "NonHermitianError", "expm_hermitian_prop", "gate_error_metrics",
    "kron_embed", "single_qubit_bloch",
    "ContinuousField", "HamiltonianModel", "build_global_optimal",
    "build_lab_frame_global", "build_local_optimal", "gaussian_pi_field",
    "local_geometric_schedule",
    "OptimizationRecord", "OptimizerConfig", "grape_iteration",
    "iteration_sweep_experiment", "sequential_sweep", "synthesize",
    "PiecewisePulse", "Trajectory", "fidelity_phase_invariant",
    "fidelity_strict", "propagate", "simulate_gaussian_baseline",
]
