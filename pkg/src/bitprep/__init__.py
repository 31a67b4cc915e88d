"""bitprep: measurement-assisted preparation of arbitrary pure states.

The pipeline quantizes a target state's magnitudes and phases into m-bit
binary plans, compiles the plan into a staged circuit of Hadamards,
fixed phase rotations, and multi-controlled X gates over a system
register plus work and marker qubits, simulates the circuit on a dense
statevector, and keeps the branch labeled by two marker qubits reading
|11>.  The kept branch holds the quantized state exactly; independent
closed-form predictions and a gate-free projector execution path verify
every stage.
"""

from .bitplan import (
    BitPlan,
    TargetState,
    decompose,
    fidelity,
    reconstruct,
    smallest_viable_precision,
)
from .encoder import (
    Circuit,
    Measurement,
    SimRun,
    STAGE_NAMES,
    amplitude_triads,
    build_amplitude_encoding,
    build_basis_collapse,
    build_branch_labeling,
    build_phase_encoding,
    build_superposition,
    compile_circuit,
    parse_circuit,
    simulate,
)
from .errors import (
    BitprepError,
    CapacityError,
    CircuitFormatError,
    EntanglementError,
    PrecisionError,
    TargetFileError,
    VerificationError,
)
from .gates import MCX, Gate, Hadamard, PauliX, PhaseK, gate_qubits
from .layout import RegisterLayout
from .oracle import (
    Component,
    StagePrediction,
    naive_success_probability,
    phase_word_factor,
    predict_stage,
    run_projector_path,
    tagged_work_values,
)
from .resources import COST_MODEL, ResourceReport, StageTally, analyze, gate_cost
from .statevector import DEFAULT_MAX_QUBITS, StateVector, align_phase

__version__ = "0.1.0"

__all__ = [
    "BitPlan",
    "BitprepError",
    "COST_MODEL",
    "CapacityError",
    "Circuit",
    "CircuitFormatError",
    "Component",
    "DEFAULT_MAX_QUBITS",
    "EntanglementError",
    "Gate",
    "Hadamard",
    "MCX",
    "Measurement",
    "PauliX",
    "PhaseK",
    "PrecisionError",
    "RegisterLayout",
    "ResourceReport",
    "STAGE_NAMES",
    "SimRun",
    "StagePrediction",
    "StageTally",
    "StateVector",
    "TargetFileError",
    "TargetState",
    "VerificationError",
    "align_phase",
    "amplitude_triads",
    "analyze",
    "build_amplitude_encoding",
    "build_basis_collapse",
    "build_branch_labeling",
    "build_phase_encoding",
    "build_superposition",
    "compile_circuit",
    "decompose",
    "fidelity",
    "gate_cost",
    "gate_qubits",
    "naive_success_probability",
    "parse_circuit",
    "phase_word_factor",
    "predict_stage",
    "reconstruct",
    "run_projector_path",
    "simulate",
    "smallest_viable_precision",
    "tagged_work_values",
]
