"""Phonon environment: modes, spectral densities, correlation functions and
memory kernels."""

from .bath_types import (
    BathError,
    FrequencyGrid,
    MemoryKernel,
    ModeFileError,
    ModeList,
    SpectralDensity,
    SpectralDensityKind,
)
from .correlations import (
    correlation_function,
    independent_boson_phase,
    memory_kernel,
    thermal_factor,
)
from .modes import load_modes
from .spectral_density import (
    broaden,
    default_grid,
    effective_width_sd,
    franck_condon,
    gaussian_density,
    reorganization_energy,
    scale_hrf,
    total_hrf,
)

__all__ = [
    # Types
    "BathError",
    "FrequencyGrid",
    "MemoryKernel",
    "ModeFileError",
    "ModeList",
    "SpectralDensity",
    "SpectralDensityKind",
    # Modes and densities
    "load_modes",
    "default_grid",
    "broaden",
    "gaussian_density",
    "total_hrf",
    "scale_hrf",
    "effective_width_sd",
    "reorganization_energy",
    "franck_condon",
    # Correlations
    "thermal_factor",
    "correlation_function",
    "memory_kernel",
    "independent_boson_phase",
]
