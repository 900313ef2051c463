"""Exact solver for a spin-1/2 Ising-XXZ chain with one embedded impurity dimer.

Transfer-matrix thermodynamics of a decorated chain whose quantum dimers are
conditioned on classical nodal spins, with one dimer carrying a Zeeman
distortion (1 + gamma).  The package computes the defect dimer's exact
thermal reduced density matrix (finite rings and the thermodynamic limit)
and the quantum-information measures built on it: Wootters concurrence,
l1 coherence, spin-spin correlators, quantum Fisher information and its
field derivative, and standard-teleportation fidelities.
"""

__version__ = "0.1.0"

from .model import (
    DimerEigensystem,
    ModelParams,
    NodalSector,
    OverflowRisk,
    SECTORS,
    boltzmann_weights,
    dimer_block,
    dimer_spectrum,
    zeeman_fields,
)
from .xfer import (
    DegenerateGap,
    InvalidN,
    NotAState,
    ScaledTransferMatrix,
    TmEigen,
    XState,
    cell_density_elements,
    finite_n_density_matrix,
    impurity_density_matrix,
    partition_function,
    tm_eigen,
    transfer_matrices,
)
from .oracle import TooLarge, brute_force_density_matrix, wootters_concurrence
from .measures import (
    MeasureBundle,
    concurrence_x,
    l1_coherence,
    measure_bundle,
    qfi,
    qfi_field_derivative,
    spin_correlators,
)
from .teleport import (
    FormulaMismatch,
    InputState,
    TeleportOutput,
    average_fidelity,
    beats_classical_bound,
    bell_probabilities,
    fidelity,
    output_concurrence,
    teleport_output,
)
from .cli import (
    ConfigError,
    NotFound,
    SweepConfig,
    find_critical_field,
    find_threshold_temperature,
    run_point,
    run_sweep,
)

__all__ = [
    "__version__",
    "ModelParams", "NodalSector", "SECTORS", "DimerEigensystem", "OverflowRisk",
    "zeeman_fields", "dimer_block", "dimer_spectrum", "boltzmann_weights",
    "ScaledTransferMatrix", "TmEigen", "XState", "InvalidN", "DegenerateGap",
    "NotAState", "transfer_matrices", "tm_eigen", "partition_function",
    "cell_density_elements", "impurity_density_matrix", "finite_n_density_matrix",
    "TooLarge", "brute_force_density_matrix", "wootters_concurrence",
    "MeasureBundle", "measure_bundle", "concurrence_x", "l1_coherence",
    "spin_correlators", "qfi", "qfi_field_derivative",
    "FormulaMismatch", "InputState", "TeleportOutput", "bell_probabilities",
    "teleport_output", "output_concurrence", "fidelity", "average_fidelity",
    "beats_classical_bound",
    "ConfigError", "NotFound", "SweepConfig", "run_point", "run_sweep",
    "find_threshold_temperature", "find_critical_field",
]
