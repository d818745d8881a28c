"""Bath correlation function and discretized memory kernel.

All integrals are trapezoidal quadratures over the density's frequency grid.
The coupling normalization ω² is inserted explicitly because J is stored in
Huang-Rhys normalization.
"""

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import trapezoid

from cqed_tempo.settings import settings
from cqed_tempo.utils.units import thermal_energy

from .bath_types import BathError, MemoryKernel, SpectralDensity

logger = structlog.stdlib.get_logger(__name__)


def thermal_factor(
    omega: NDArray[np.float64], temperature: float
) -> NDArray[np.float64]:
    """coth(ω / 2k_BT), set to 0 at ω = 0.

    Every integrand multiplies this by a factor vanishing at least as ω² at
    ω = 0, so the product's limit there is 0.
    """
    if temperature <= 0:
        raise BathError(f"Temperature must be positive, got {temperature}")
    x = omega / (2 * thermal_energy(temperature))
    return np.divide(
        1.0, np.tanh(x), out=np.zeros_like(x, dtype=float), where=x > 0
    )


def _chunks(n: int):
    size = settings.KERNEL_CHUNK_SIZE
    for start in range(0, n, size):
        yield slice(start, min(start + size, n))


def correlation_function(
    j: SpectralDensity, temperature: float, t: ArrayLike
) -> complex | NDArray[np.complex128]:
    """C(t) = ∫dω ω²J(ω)[coth(ω/2k_BT) cos ωt − i sin ωt]."""
    omega = j.omega
    coth = thermal_factor(omega, temperature)
    weight = omega**2 * j.values

    times = np.asarray(t, dtype=float)
    flat = np.atleast_1d(times).ravel()
    result = np.empty(flat.shape, dtype=np.complex128)
    for chunk in _chunks(flat.size):
        phase = np.outer(flat[chunk], omega)
        integrand = weight * (coth * np.cos(phase) - 1j * np.sin(phase))
        result[chunk] = trapezoid(integrand, omega, axis=1)

    if times.ndim == 0:
        return complex(result[0])
    return result.reshape(times.shape)


def memory_kernel(
    j: SpectralDensity, temperature: float, dt: float, delta_max: int
) -> MemoryKernel:
    """η_Δ for Δ = 0 … delta_max with the time integrals done analytically.

    Δ ≥ 1 integrates C(t′ − t″) over a full step × step square;
    Δ = 0 over the time-ordered triangle t″ ≤ t′ within one step.
    """
    if dt <= 0:
        raise BathError(f"Time step must be positive, got {dt}")
    if delta_max < 0:
        raise BathError(f"delta_max must be non-negative, got {delta_max}")

    omega = j.omega
    coth = thermal_factor(omega, temperature)
    x = omega * dt
    # 1 − cos ωδt without cancellation at small ω
    one_minus_cos = 2 * np.sin(x / 2) ** 2

    eta = np.zeros(delta_max + 1, dtype=np.complex128)
    eta[0] = trapezoid(
        j.values * (one_minus_cos * coth - 1j * (x - np.sin(x))), omega
    )

    deltas = np.arange(1, delta_max + 1)
    weight = 2 * j.values * one_minus_cos
    for chunk in _chunks(deltas.size):
        phase = np.outer(deltas[chunk] * dt, omega)
        integrand = weight * (coth * np.cos(phase) - 1j * np.sin(phase))
        eta[1:][chunk] = trapezoid(integrand, omega, axis=1)

    logger.debug(
        "memory_kernel_built",
        dt=dt,
        temperature=temperature,
        delta_max=delta_max,
        eta_0=complex(eta[0]),
    )
    return MemoryKernel(dt=dt, temperature=temperature, eta=eta)


def independent_boson_phase(
    j: SpectralDensity, temperature: float, t: ArrayLike
) -> NDArray[np.complex128]:
    """Φ(t) = ∫dω J(ω)[(1 − cos ωt) coth(ω/2k_BT) + i sin ωt]."""
    omega = j.omega
    coth = thermal_factor(omega, temperature)
    times = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    result = np.empty(times.shape, dtype=np.complex128)
    for chunk in _chunks(times.size):
        phase = np.outer(times[chunk], omega)
        integrand = j.values * (
            2 * np.sin(phase / 2) ** 2 * coth + 1j * np.sin(phase)
        )
        result[chunk] = trapezoid(integrand, omega, axis=1)
    return result
