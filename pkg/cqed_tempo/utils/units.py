"""Physical constants and unit conversions.

Energies are in eV throughout and times in eV⁻¹ (ħ = 1).
"""

import numpy as np
from numpy.typing import NDArray

BOLTZMANN_EV_PER_K = 8.617333262e-5
FS_PER_INVERSE_EV = 0.6582119569
MEV_PER_EV = 1000.0


def mev_to_ev(value: float) -> float:
    return value / MEV_PER_EV


def ev_to_mev(value: float) -> float:
    return value * MEV_PER_EV


def fs_to_inverse_ev(value: float) -> float:
    return value / FS_PER_INVERSE_EV


def inverse_ev_to_fs[T: (float, NDArray[np.float64])](value: T) -> T:
    return value * FS_PER_INVERSE_EV


def thermal_energy(temperature_k: float) -> float:
    return BOLTZMANN_EV_PER_K * temperature_k
