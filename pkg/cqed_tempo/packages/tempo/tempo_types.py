"""TEMPO engine types."""

from dataclasses import dataclass

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from cqed_tempo.packages.system.system_types import CAVITY, EXCITED
from cqed_tempo.packages.tensors import DenseTensor
from cqed_tempo.utils.units import inverse_ev_to_fs


class TempoError(RuntimeError):
    """Raised when the engine cannot start or advance a propagation."""

    pass


class BondDimensionExceededError(TempoError):
    """Raised when compression leaves a bond larger than the configured cap."""

    def __init__(self, step: int, bond_dimension: int, cap: int):
        super().__init__(
            f"Bond dimension {bond_dimension} exceeds cap {cap} at step {step}"
        )
        self.step = step
        self.bond_dimension = bond_dimension
        self.cap = cap


class EngineConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    dt: float = Field(gt=0, description="Time step in eV⁻¹")
    svd_cutoff: float = Field(default=1e-6, ge=0)
    memory_cutoff: int | None = Field(default=None, ge=0)
    max_steps: int = Field(ge=1)
    max_bond_dimension: int | None = Field(default=None, ge=1)


@dataclass(frozen=True)
class AugmentedState:
    """The augmented density tensor as an MPS, oldest time slice first.

    Sites have shape (left bond, 9, right bond); the first site's left bond
    and the last site's right bond have extent 1. Slices that no future
    influence tensor can reach are already summed out.
    """

    sites: tuple[DenseTensor, ...]
    step: int
    cumulative_discarded_weight: float = 0.0

    @property
    def bond_dimensions(self) -> list[int]:
        return [site.shape[2] for site in self.sites[:-1]]

    @property
    def max_bond_dimension(self) -> int:
        return max(self.bond_dimensions, default=1)


@dataclass(frozen=True)
class Trajectory:
    times: NDArray[np.float64]
    rho: NDArray[np.complex128]
    bond_dimensions: NDArray[np.int64]
    discarded_weights: NDArray[np.float64]

    @property
    def excited_population(self) -> NDArray[np.float64]:
        return self.rho[:, EXCITED, EXCITED].real

    @property
    def cavity_population(self) -> NDArray[np.float64]:
        return self.rho[:, CAVITY, CAVITY].real

    @property
    def coherence(self) -> NDArray[np.complex128]:
        """⟨e,0|ρ|g,1⟩."""
        return self.rho[:, EXCITED, CAVITY]

    @property
    def trace(self) -> NDArray[np.float64]:
        return np.trace(self.rho, axis1=1, axis2=2).real

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t_ev_inv": self.times,
                "t_fs": inverse_ev_to_fs(self.times),
                "P_e": self.excited_population,
                "n_cav": self.cavity_population,
                "re_coh": self.coherence.real,
                "im_coh": self.coherence.imag,
                "trace": self.trace,
                "max_bond_dim": self.bond_dimensions,
                "discarded_weight": self.discarded_weights,
            }
        )
