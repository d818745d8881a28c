"""TEMPO propagation of the cavity-emitter system in a phonon bath."""

from .engine import (
    TempoEngine,
    initialize,
    reduced_state,
    run_dynamics,
    step,
)
from .oracles import brute_force_adt, ibm_coherence_oracle
from .tempo_types import (
    AugmentedState,
    BondDimensionExceededError,
    EngineConfig,
    TempoError,
    Trajectory,
)

__all__ = [
    # Types
    "AugmentedState",
    "EngineConfig",
    "Trajectory",
    "TempoError",
    "BondDimensionExceededError",
    # Engine
    "TempoEngine",
    "initialize",
    "step",
    "reduced_state",
    "run_dynamics",
    # Oracles
    "brute_force_adt",
    "ibm_coherence_oracle",
]
