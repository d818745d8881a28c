"""Three-level single-excitation cavity-emitter system."""

from .liouvillian import (
    exact_lindblad_dynamics,
    half_step_propagator,
    jc_hamiltonian,
    lindblad_liouvillian,
)
from .system_types import (
    CAVITY,
    EXCITED,
    GROUND,
    SystemParamsError,
    SystemParams,
    basis_projector,
    devectorize,
    is_physical,
    vectorize,
)

__all__ = [
    # Types
    "SystemParams",
    "SystemParamsError",
    # Basis
    "GROUND",
    "EXCITED",
    "CAVITY",
    "basis_projector",
    "vectorize",
    "devectorize",
    "is_physical",
    # Operations
    "jc_hamiltonian",
    "lindblad_liouvillian",
    "half_step_propagator",
    "exact_lindblad_dynamics",
]
