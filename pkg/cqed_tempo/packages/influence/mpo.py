import numpy as np
import structlog

from cqed_tempo.packages.bath import MemoryKernel
from cqed_tempo.packages.system.system_types import LIOUVILLE_DIMENSION
from cqed_tempo.packages.tensors import DenseTensor

from .influence_types import CouplingDiagonal, InfluenceError, InfluenceTensor, StepMpo

logger = structlog.stdlib.get_logger(__name__)

_D = LIOUVILLE_DIMENSION


def influence_tensor(
    kernel: MemoryKernel, delta: int, coupling: CouplingDiagonal
) -> InfluenceTensor:
    """b_Δ[β_i, β_j] = exp(−(λ_{s_i} − λ_{r_i})(η_Δ λ_{s_j} − η*_Δ λ_{r_j}))."""
    if not 0 <= delta <= kernel.delta_max:
        raise InfluenceError(
            f"Lag {delta} outside kernel range 0..{kernel.delta_max}"
        )
    eta = kernel.eta[delta]
    later = coupling.ket - coupling.bra
    earlier = eta * coupling.ket - np.conj(eta) * coupling.bra
    return InfluenceTensor(delta=delta, values=np.exp(-np.outer(later, earlier)))


def promote_rank4(b: InfluenceTensor) -> DenseTensor:
    """T[p, c, p, c] = b[c, p]: pass-through bond c, diagonal physical p."""
    tensor = np.zeros((_D, _D, _D, _D), dtype=np.complex128)
    p = np.arange(_D)[:, None]
    c = np.arange(_D)[None, :]
    tensor[p, c, p, c] = b.values.T
    return tensor


def _site(diagonal: DenseTensor) -> DenseTensor:
    """Embed a (physical, left, right) block as a physically diagonal site."""
    physical, left, right = diagonal.shape
    site = np.zeros((physical, left, physical, right), dtype=np.complex128)
    p = np.arange(physical)
    site[p, :, p, :] = diagonal
    return site


def build_step_mpo(
    kernel: MemoryKernel,
    k: int,
    coupling: CouplingDiagonal,
    memory_cutoff: int | None = None,
    compress_bonds: bool = False,
) -> StepMpo:
    """MPO for the influence of step k on itself and the previous steps.

    Site l (oldest first) carries b_{k−l}. With memory_cutoff K only the
    K + 1 newest slices are covered. With compress_bonds the bond carries
    the (λ_s, λ_r) class of the newest index rather than the index itself,
    which is exact because b depends on the later index only through it.
    """
    if k < 1:
        raise InfluenceError(f"Step must be at least 1, got {k}")
    span = k if memory_cutoff is None else min(k, memory_cutoff + 1)
    if kernel.delta_max < span - 1:
        raise InfluenceError(
            f"Kernel too short: step {k} needs lag {span - 1}, "
            f"kernel covers {kernel.delta_max}"
        )

    tensors = [influence_tensor(kernel, delta, coupling) for delta in range(span)]
    newest = np.diag(tensors[0].values)

    if span == 1:
        return StepMpo(step=k, sites=(_site(newest.reshape(_D, 1, 1)),))

    if compress_bonds:
        labels, representatives = coupling.classes()
    else:
        labels, representatives = np.arange(_D), np.arange(_D)
    bond = len(representatives)

    sites = []
    for delta in range(span - 1, 0, -1):
        # rows: bond value (later index class), columns: physical (earlier)
        rows = tensors[delta].values[representatives, :]
        if delta == span - 1:
            sites.append(_site(rows.T.reshape(_D, 1, bond)))
        elif not compress_bonds:
            sites.append(promote_rank4(tensors[delta]))
        else:
            diagonal = np.zeros((_D, bond, bond), dtype=np.complex128)
            a = np.arange(bond)
            diagonal[:, a, a] = rows.T
            sites.append(_site(diagonal))

    last = np.zeros((_D, bond, 1), dtype=np.complex128)
    last[np.arange(_D), labels, 0] = newest
    sites.append(_site(last))

    return StepMpo(step=k, sites=tuple(sites))
