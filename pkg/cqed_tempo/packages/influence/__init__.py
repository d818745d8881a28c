"""Discrete influence tensors and the per-step influence MPO."""

from .influence_types import CouplingDiagonal, InfluenceError, InfluenceTensor, StepMpo
from .mpo import build_step_mpo, influence_tensor, promote_rank4

__all__ = [
    # Types
    "CouplingDiagonal",
    "InfluenceError",
    "InfluenceTensor",
    "StepMpo",
    # Operations
    "influence_tensor",
    "promote_rank4",
    "build_step_mpo",
]
