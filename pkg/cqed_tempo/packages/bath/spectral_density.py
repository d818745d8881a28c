import dataclasses

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy.integrate import trapezoid

from cqed_tempo.settings import settings

from .bath_types import (
    BathError,
    FrequencyGrid,
    ModeList,
    SpectralDensity,
    SpectralDensityKind,
)

logger = structlog.stdlib.get_logger(__name__)

GRID_SIGMAS = 6.0


def _gaussian(
    omega: NDArray[np.float64], center: float, width: float
) -> NDArray[np.float64]:
    return np.exp(-((omega - center) ** 2) / (2 * width**2)) / (
        np.sqrt(2 * np.pi) * width
    )


def default_grid(
    modes: ModeList, sigma: float, n_points: int | None = None
) -> FrequencyGrid:
    """0 to (largest mode energy + 6ς)."""
    top = float(modes.energies.max()) if len(modes) else 0.0
    return FrequencyGrid(
        omega_min=0.0,
        omega_max=top + GRID_SIGMAS * sigma,
        n_points=n_points or settings.DEFAULT_GRID_POINTS,
    )


def broaden(
    modes: ModeList, sigma: float, grid: FrequencyGrid | None = None
) -> SpectralDensity:
    """J(ω) = Σ_k S_k f(ω − ν_k) with a normalized Gaussian f of width ς."""
    if sigma <= 0:
        raise BathError(f"Broadening must be positive, got {sigma}")
    grid = grid or default_grid(modes, sigma)
    omega = grid.points()

    values = np.zeros_like(omega)
    for energy, hrf in zip(modes.energies, modes.hrfs):
        values += hrf * _gaussian(omega, energy, sigma)

    if len(modes):
        lowest = modes.energies.min() - GRID_SIGMAS * sigma
        highest = modes.energies.max() + GRID_SIGMAS * sigma
        if lowest < grid.omega_min or highest > grid.omega_max:
            logger.warning(
                "grid_does_not_cover_modes",
                grid_min=grid.omega_min,
                grid_max=grid.omega_max,
                modes_min=float(lowest),
                modes_max=float(highest),
            )

    return SpectralDensity(
        kind=SpectralDensityKind.BROADENED_MODES,
        grid=grid,
        values=values,
        sigma=sigma,
    )


def gaussian_density(
    center: float,
    width: float,
    s_tot: float,
    grid: FrequencyGrid | None = None,
) -> SpectralDensity:
    """Closed-form Gaussian test density with total Huang-Rhys factor s_tot."""
    if width <= 0 or center <= 0 or s_tot < 0:
        raise BathError(
            f"Invalid Gaussian density (center={center}, width={width}, s_tot={s_tot})"
        )
    grid = grid or FrequencyGrid(
        0.0, center + GRID_SIGMAS * width, settings.DEFAULT_GRID_POINTS
    )
    return SpectralDensity(
        kind=SpectralDensityKind.ANALYTIC_TEST,
        grid=grid,
        values=s_tot * _gaussian(grid.points(), center, width),
        sigma=width,
        metadata={"center": center, "width": width, "s_tot": s_tot},
    )


def total_hrf(j: SpectralDensity) -> float:
    return float(trapezoid(j.values, j.omega))


def reorganization_energy(j: SpectralDensity) -> float:
    """λ = ∫ω J(ω) dω."""
    return float(trapezoid(j.omega * j.values, j.omega))


def franck_condon(alpha: float, s_tot: float) -> float:
    return float(np.exp(-alpha * s_tot / 2))


def scale_hrf(j: SpectralDensity, alpha: float) -> SpectralDensity:
    if not 0.0 <= alpha <= 1.0:
        raise BathError(f"alpha_HRF must lie in [0, 1], got {alpha}")
    return dataclasses.replace(j, values=alpha * j.values, alpha=j.alpha * alpha)


def effective_width_sd(j: SpectralDensity) -> SpectralDensity:
    """Single Gaussian with the zeroth, first and second moments of j.

    Weight at ω ≤ 0 is cut off and the remainder renormalized to the
    original total Huang-Rhys factor.
    """
    s_tot = total_hrf(j)
    if s_tot <= 0:
        raise BathError("Effective width needs a density with positive weight")

    omega = j.omega
    mean = trapezoid(omega * j.values, omega) / s_tot
    variance = trapezoid((omega - mean) ** 2 * j.values, omega) / s_tot
    width = float(np.sqrt(variance))
    if width <= 0:
        raise BathError("Effective width of a zero-width density is undefined")

    grid = FrequencyGrid(
        omega_min=0.0,
        omega_max=max(j.grid.omega_max, mean + GRID_SIGMAS * width),
        n_points=j.grid.n_points,
    )
    new_omega = grid.points()
    values = np.where(new_omega > 0, _gaussian(new_omega, mean, width), 0.0)
    values *= s_tot / trapezoid(values, new_omega)

    logger.debug("effective_width_density", center=float(mean), width=width)
    return SpectralDensity(
        kind=SpectralDensityKind.EFFECTIVE_WIDTH,
        grid=grid,
        values=values,
        sigma=width,
        alpha=j.alpha,
        metadata={"center": float(mean), "width": width, "s_tot": s_tot},
    )
