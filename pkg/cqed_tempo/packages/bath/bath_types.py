"""Phonon bath types and data structures."""

from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
from numpy.typing import NDArray


class BathError(ValueError):
    """Raised for invalid spectral densities, temperatures or kernels."""

    pass


class ModeFileError(BathError):
    """Raised when a mode file cannot be parsed."""

    pass


@dataclass(frozen=True)
class ModeList:
    """Phonon modes with their partial Huang-Rhys factors.

    Attributes:
        energies: mode energies ν_k in eV, all positive
        hrfs: partial Huang-Rhys factors S_k, all positive
    """

    energies: NDArray[np.float64]
    hrfs: NDArray[np.float64]

    @classmethod
    def from_pairs(cls, pairs: list[tuple[float, float]]) -> "ModeList":
        """Build a mode list, summing duplicate frequencies and dropping
        zero-weight entries."""
        merged: dict[float, float] = {}
        for energy, hrf in pairs:
            if energy <= 0:
                raise BathError(f"Mode energy must be positive, got {energy}")
            if hrf < 0:
                raise BathError(f"Huang-Rhys factor must be non-negative, got {hrf}")
            merged[energy] = merged.get(energy, 0.0) + hrf
        entries = sorted((e, s) for e, s in merged.items() if s > 0)
        return cls(
            energies=np.array([e for e, _ in entries], dtype=float),
            hrfs=np.array([s for _, s in entries], dtype=float),
        )

    def __len__(self) -> int:
        return len(self.energies)

    @property
    def total_hrf(self) -> float:
        return float(self.hrfs.sum())


class SpectralDensityKind(StrEnum):
    BROADENED_MODES = "broadened_modes"
    EFFECTIVE_WIDTH = "effective_width"
    ANALYTIC_TEST = "analytic_test"


@dataclass(frozen=True)
class FrequencyGrid:
    omega_min: float
    omega_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2 or self.omega_max <= self.omega_min:
            raise BathError(f"Invalid frequency grid {self}")

    def points(self) -> NDArray[np.float64]:
        return np.linspace(self.omega_min, self.omega_max, self.n_points)


@dataclass(frozen=True)
class SpectralDensity:
    """J(ω) in Huang-Rhys normalization sampled on a uniform grid.

    The stored samples already include the α_HRF scaling recorded in alpha.
    """

    kind: SpectralDensityKind
    grid: FrequencyGrid
    values: NDArray[np.float64]
    sigma: float | None = None
    alpha: float = 1.0
    metadata: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (self.grid.n_points,):
            raise BathError(
                f"Expected {self.grid.n_points} samples, got {self.values.shape}"
            )
        if np.any(self.values < 0):
            raise BathError("Spectral density must be non-negative")

    @property
    def omega(self) -> NDArray[np.float64]:
        return self.grid.points()


@dataclass(frozen=True)
class MemoryKernel:
    """Discretized memory kernel η_Δ for Δ = 0 … delta_max."""

    dt: float
    temperature: float
    eta: NDArray[np.complex128]

    @property
    def delta_max(self) -> int:
        return len(self.eta) - 1

    @property
    def support(self) -> int:
        """Largest lag with a non-zero kernel entry, -1 for a zero kernel."""
        nonzero = np.flatnonzero(self.eta)
        return int(nonzero[-1]) if nonzero.size else -1

    def between(self, i: int, j: int) -> complex:
        """η for the step pair (i, j), i ≥ j."""
        if i < j:
            raise BathError(f"Kernel lag needs i >= j, got ({i}, {j})")
        return complex(self.eta[i - j])
