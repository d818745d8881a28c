"""Reference solutions the MPS propagation is checked against."""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from cqed_tempo.packages.bath import (
    MemoryKernel,
    SpectralDensity,
    independent_boson_phase,
    reorganization_energy,
)
from cqed_tempo.packages.influence import CouplingDiagonal, influence_tensor
from cqed_tempo.packages.system import (
    SystemParams,
    devectorize,
    half_step_propagator,
    lindblad_liouvillian,
    vectorize,
)
from cqed_tempo.packages.system.system_types import LIOUVILLE_DIMENSION
from cqed_tempo.packages.tensors import DenseTensor
from cqed_tempo.settings import settings

from .engine import check_kernel, initial_matrix
from .tempo_types import EngineConfig, TempoError

_D = LIOUVILLE_DIMENSION


def brute_force_adt(
    rho0: DenseTensor,
    k: int,
    cfg: EngineConfig,
    system: SystemParams,
    kernel: MemoryKernel,
    coupling: CouplingDiagonal | None = None,
    allow_unphysical: bool = False,
) -> DenseTensor:
    """Reduced state after k steps from the dense 9^k augmented tensor.

    No compression anywhere; cfg.svd_cutoff is ignored.
    """
    if k < 1:
        raise TempoError(f"Step count must be at least 1, got {k}")
    # three live copies of the dense tensor during an update
    required = 3 * np.dtype(np.complex128).itemsize * _D**k
    if (
        k > settings.BRUTE_FORCE_MAX_STEPS
        or required > settings.BRUTE_FORCE_MEMORY_BUDGET_BYTES
    ):
        raise TempoError(
            f"Dense augmented tensor for {k} steps needs {required} bytes, "
            f"beyond the brute-force budget"
        )
    check_kernel(cfg.model_copy(update={"max_steps": k}), kernel)
    coupling = coupling or CouplingDiagonal.emitter()

    half = half_step_propagator(lindblad_liouvillian(system), cfg.dt)
    full = half @ half

    def influence(delta: int) -> DenseTensor | None:
        if cfg.memory_cutoff is not None and delta > cfg.memory_cutoff:
            return None
        return influence_tensor(kernel, delta, coupling).values

    tensor = half @ vectorize(initial_matrix(rho0, allow_unphysical))
    b0 = influence(0)
    if b0 is not None:
        tensor = tensor * np.diag(b0)

    for m in range(2, k + 1):
        tensor = tensor[..., :, None] * full.T
        for l in range(1, m + 1):
            b = influence(m - l)
            if b is None:
                continue
            if l == m:
                tensor = tensor * np.diag(b)
                continue
            shape = [1] * m
            shape[l - 1] = _D
            shape[m - 1] = _D
            tensor = tensor * b.T.reshape(shape)

    newest = tensor.sum(axis=tuple(range(k - 1))) if k > 1 else tensor
    return devectorize(half @ newest)


def ibm_coherence_oracle(
    j: SpectralDensity, temperature: float, gamma: float, t: ArrayLike
) -> complex | NDArray[np.complex128]:
    """Exact ⟨e|ρ(t)|g⟩/⟨e|ρ(0)|g⟩ for a pure-dephasing emitter.

    Returned in the frame rotating at the bare emitter energy, so the
    polaron shift shows up as the phase e^{iλt}.
    """
    times = np.asarray(t, dtype=float)
    flat = np.atleast_1d(times).ravel()
    shift = reorganization_energy(j)
    values = np.exp(
        -gamma * flat / 2
        - independent_boson_phase(j, temperature, flat)
        + 1j * shift * flat
    )
    if times.ndim == 0:
        return complex(values[0])
    return values.reshape(times.shape)
