from collections.abc import Sequence

import numpy as np

from cqed_tempo.packages.tensors import DenseTensor, matrix_exponential

from .system_types import (
    CAVITY,
    DIMENSION,
    EXCITED,
    GROUND,
    SystemParams,
    SystemParamsError,
    devectorize,
    vectorize,
)


def _lowering(target: int) -> DenseTensor:
    """|g,0⟩⟨target|, the emitter (σ) or cavity (a) lowering operator."""
    op = np.zeros((DIMENSION, DIMENSION), dtype=np.complex128)
    op[GROUND, target] = 1.0
    return op


def jc_hamiltonian(p: SystemParams) -> DenseTensor:
    shift = p.frame_frequency
    h = np.diag([0.0, p.omega_e - shift, p.omega_c - shift]).astype(np.complex128)
    h[EXCITED, CAVITY] = p.g
    h[CAVITY, EXCITED] = p.g
    return h


def _dissipator(op: DenseTensor) -> DenseTensor:
    identity = np.eye(DIMENSION)
    number = op.conj().T @ op
    return (
        np.kron(op.conj(), op)
        - 0.5 * np.kron(identity, number)
        - 0.5 * np.kron(number.T, identity)
    )


def lindblad_liouvillian(p: SystemParams) -> DenseTensor:
    """ℒ₀ρ = −i[H, ρ] + Γ L_σ[ρ] + κ L_a[ρ] acting on column-stacked ρ."""
    h = jc_hamiltonian(p)
    identity = np.eye(DIMENSION)
    liouvillian = -1j * (np.kron(identity, h) - np.kron(h.T, identity))
    liouvillian = liouvillian + p.gamma * _dissipator(_lowering(EXCITED))
    liouvillian = liouvillian + p.kappa * _dissipator(_lowering(CAVITY))
    return liouvillian


def half_step_propagator(liouvillian: DenseTensor, dt: float) -> DenseTensor:
    if dt <= 0:
        raise SystemParamsError(f"Time step must be positive, got {dt}")
    return matrix_exponential(liouvillian * (dt / 2))


def exact_lindblad_dynamics(
    p: SystemParams,
    rho0: DenseTensor,
    t_grid: Sequence[float],
) -> np.ndarray:
    """Phonon-free reference ρ(t) = exp(ℒ₀t)[ρ0] on t_grid, shape (n, 3, 3)."""
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise SystemParamsError("Time grid must be a non-empty sequence")
    if times[0] != 0.0:
        raise SystemParamsError(f"Time grid must start at 0, got {times[0]}")
    if np.any(np.diff(times) < 0):
        raise SystemParamsError("Time grid must be ascending")

    liouvillian = lindblad_liouvillian(p)
    vec0 = vectorize(rho0)
    return np.stack(
        [devectorize(matrix_exponential(liouvillian * t) @ vec0) for t in times]
    )
