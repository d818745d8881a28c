"""System parameters and the fixed single-excitation basis.

Basis order is (|g,0⟩, |e,0⟩, |g,1⟩). Density matrices are vectorized by
column stacking: vec(ρ)[i + 3j] = ρ[i, j].
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from cqed_tempo.packages.tensors import DenseTensor

GROUND = 0
EXCITED = 1
CAVITY = 2
DIMENSION = 3
LIOUVILLE_DIMENSION = DIMENSION**2


class SystemParamsError(ValueError):
    """Raised for invalid system inputs such as unsorted time grids."""

    pass


class SystemParams(BaseModel):
    """Emitter and cavity parameters, all energies in eV."""

    model_config = ConfigDict(frozen=True)

    omega_e: float = Field(gt=0)
    g: float = Field(ge=0)
    omega_c: float = Field(gt=0)
    gamma: float = Field(ge=0)
    kappa: float = Field(ge=0)
    rotating_frame: bool = True

    @property
    def frame_frequency(self) -> float:
        """Frequency the computation frame rotates at."""
        return self.omega_e if self.rotating_frame else 0.0


def basis_projector(index: int) -> DenseTensor:
    projector = np.zeros((DIMENSION, DIMENSION), dtype=np.complex128)
    projector[index, index] = 1.0
    return projector


def vectorize(rho: DenseTensor) -> DenseTensor:
    return np.asarray(rho, dtype=np.complex128).reshape(-1, order="F")


def devectorize(vec: DenseTensor) -> DenseTensor:
    return np.asarray(vec, dtype=np.complex128).reshape(
        (DIMENSION, DIMENSION), order="F"
    )


def is_physical(
    rho: DenseTensor,
    trace_tolerance: float = 1e-8,
    hermiticity_tolerance: float = 1e-12,
    eigenvalue_tolerance: float = 1e-10,
) -> bool:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (DIMENSION, DIMENSION):
        return False
    if np.max(np.abs(rho - rho.conj().T)) > hermiticity_tolerance:
        return False
    if abs(np.trace(rho) - 1.0) > trace_tolerance:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -eigenvalue_tolerance)
