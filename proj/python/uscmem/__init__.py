from ._core import (
    CouplingSchedule,
    ModelParams,
    NumericalError,
    TruncationError,
    ValidationError,
    beam_splitter,
    cat_approximant,
    coherent_state,
    eigendecompose,
    parity_operator,
    phase_landscape,
    physical_time,
    propagate,
    rabi_hamiltonian,
    round_trip,
    run,
)

__all__ = [
    "CouplingSchedule",
    "ModelParams",
    "NumericalError",
    "TruncationError",
    "ValidationError",
    "beam_splitter",
    "cat_approximant",
    "coherent_state",
    "eigendecompose",
    "parity_operator",
    "phase_landscape",
    "physical_time",
    "propagate",
    "rabi_hamiltonian",
    "round_trip",
    "run",
]
