"""Linear response and spectrum types."""

from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from cqed_tempo.packages.system.system_types import CAVITY, DIMENSION, EXCITED, GROUND
from cqed_tempo.packages.tensors import DenseTensor


class SpectrumError(ValueError):
    """Raised for invalid spectra inputs or failed peak extraction."""

    pass


class DriveMode(StrEnum):
    DIPOLE = "dipole"
    CAVITY = "cavity"

    @property
    def operator(self) -> DenseTensor:
        """μ = σ + σ† or a + a† restricted to the single-excitation space."""
        target = EXCITED if self is DriveMode.DIPOLE else CAVITY
        mu = np.zeros((DIMENSION, DIMENSION), dtype=np.complex128)
        mu[GROUND, target] = 1.0
        mu[target, GROUND] = 1.0
        return mu


@dataclass(frozen=True)
class ResponseSeries:
    """S¹(t) = tr(μ ϱ(t)) sampled every dt from t = 0."""

    times: NDArray[np.float64]
    values: NDArray[np.complex128]
    drive: DriveMode
    dt: float
    frame_frequency: float
    equilibration_residual: float
    max_bond_dimension: int = 1
    discarded_weight: float = 0.0
    warnings: list[str] = field(default_factory=list)

    @property
    def equilibrated(self) -> bool:
        return not self.warnings


@dataclass(frozen=True)
class Spectrum:
    omega: NDArray[np.float64]
    values: NDArray[np.float64]
    pad_to: int
    resolution: float
    metadata: dict = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"omega_ev": self.omega, "A": self.values})


@dataclass(frozen=True)
class Splitting:
    lower: float
    upper: float

    @property
    def peak_positions(self) -> tuple[float, float]:
        return self.lower, self.upper

    @property
    def splitting(self) -> float:
        return self.upper - self.lower
