"""Matrix-product-state propagation of the augmented density tensor.

Each step appends one time slice, applies the influence MPO of that step
and the merged full-step system propagator, then compresses with a
left-to-right QR sweep followed by a right-to-left truncating sweep that
keeps the reduced-state readout exact.
"""

import numpy as np
import structlog
from opt_einsum import contract as einsum

from cqed_tempo.packages.bath import MemoryKernel
from cqed_tempo.packages.influence import (
    CouplingDiagonal,
    StepMpo,
    build_step_mpo,
    influence_tensor,
)
from cqed_tempo.packages.system import (
    SystemParams,
    devectorize,
    half_step_propagator,
    is_physical,
    lindblad_liouvillian,
    vectorize,
)
from cqed_tempo.packages.system.system_types import LIOUVILLE_DIMENSION
from cqed_tempo.packages.tensors import (
    DenseTensor,
    economic_qr,
    truncate_preserving,
)
from cqed_tempo.settings import settings

from .tempo_types import (
    AugmentedState,
    BondDimensionExceededError,
    EngineConfig,
    TempoError,
    Trajectory,
)

logger = structlog.stdlib.get_logger(__name__)

_D = LIOUVILLE_DIMENSION


def check_kernel(cfg: EngineConfig, kernel: MemoryKernel) -> None:
    if not np.isclose(kernel.dt, cfg.dt, rtol=1e-12, atol=0.0):
        raise TempoError(f"Kernel time step {kernel.dt} differs from {cfg.dt}")
    needed = cfg.max_steps - 1
    if cfg.memory_cutoff is not None:
        needed = min(needed, cfg.memory_cutoff)
    if kernel.delta_max < needed:
        raise TempoError(
            f"Kernel covers lags up to {kernel.delta_max}, propagation needs {needed}"
        )


def initial_matrix(rho0: DenseTensor, allow_unphysical: bool) -> DenseTensor:
    rho0 = np.asarray(rho0, dtype=np.complex128)
    if rho0.shape != (3, 3):
        raise TempoError(f"Initial state must be 3×3, got {rho0.shape}")
    if not np.any(rho0):
        raise TempoError("Initial state is the zero matrix")
    if not allow_unphysical and not is_physical(rho0):
        raise TempoError("Initial state is not a physical density matrix")
    return rho0


class TempoEngine:
    """Propagator for one (system, kernel, config) combination.

    The engine itself is immutable; states are passed in and returned.
    """

    def __init__(
        self,
        cfg: EngineConfig,
        system: SystemParams,
        kernel: MemoryKernel,
        coupling: CouplingDiagonal | None = None,
    ):
        check_kernel(cfg, kernel)
        self.cfg = cfg
        self.system = system
        self.kernel = kernel
        self.coupling = coupling or CouplingDiagonal.emitter()

        self.half_step = half_step_propagator(lindblad_liouvillian(system), cfg.dt)
        self.full_step = self.half_step @ self.half_step

        # Lags past the kernel support carry all-ones influence tensors
        memory = kernel.support
        if cfg.memory_cutoff is not None:
            memory = min(memory, cfg.memory_cutoff)
        self.memory = memory
        self._mpos: dict[int, StepMpo] = {}

    def _step_mpo(self, k: int) -> StepMpo | None:
        if self.memory < 0:
            return None
        span = min(k, self.memory + 1)
        if span not in self._mpos:
            self._mpos[span] = build_step_mpo(
                self.kernel, span, self.coupling, compress_bonds=True
            )
        return self._mpos[span]

    def initialize(
        self, rho0: DenseTensor, allow_unphysical: bool = False
    ) -> AugmentedState:
        vec = self.half_step @ vectorize(initial_matrix(rho0, allow_unphysical))
        if self.memory >= 0:
            vec = vec * np.diag(influence_tensor(self.kernel, 0, self.coupling).values)
        return AugmentedState(sites=(vec.reshape(1, _D, 1),), step=1)

    def step(self, state: AugmentedState) -> AugmentedState:
        k = state.step + 1
        if k > self.cfg.max_steps:
            raise TempoError(f"Step {k} exceeds max_steps {self.cfg.max_steps}")

        if self.memory <= 0:
            return self._markovian_step(state, k)

        sites = list(state.sites)
        # Copy the newest index onto a bond and attach the next slice
        last = sites[-1][:, :, 0]
        sites[-1] = einsum("ap,pc->apc", last, np.eye(_D))
        sites.append(self.full_step.T.reshape(_D, _D, 1).copy())

        mpo = self._step_mpo(k)
        span = 0
        if mpo is not None:
            span = mpo.span
            offset = len(sites) - span
            for index, diagonal in enumerate(mpo.diagonals()):
                sites[offset + index] = _apply_site(sites[offset + index], diagonal)

        low = max(0, len(sites) - max(span, 2))
        discarded = self._compress(sites, low, len(sites) - 1)

        largest = max(site.shape[2] for site in sites[:-1])
        cap = self.cfg.max_bond_dimension
        if cap is not None and largest > cap:
            raise BondDimensionExceededError(k, largest, cap)

        keep = max(self.memory, 1)
        while len(sites) > keep:
            summed = sites.pop(0).sum(axis=1)
            sites[0] = np.tensordot(summed, sites[0], axes=([1], [0]))

        return AugmentedState(
            sites=tuple(sites),
            step=k,
            cumulative_discarded_weight=state.cumulative_discarded_weight + discarded,
        )

    def _markovian_step(self, state: AugmentedState, k: int) -> AugmentedState:
        """Without memory the state stays a single site and is propagated
        in place."""
        (site,) = state.sites
        propagator = self.full_step
        if self.memory == 0:
            b0 = influence_tensor(self.kernel, 0, self.coupling).values
            propagator = np.diag(b0)[:, None] * propagator
        updated = einsum("apb,qp->aqb", site, propagator)
        return AugmentedState(
            sites=(updated,),
            step=k,
            cumulative_discarded_weight=state.cumulative_discarded_weight,
        )

    def _compress(self, sites: list[DenseTensor], low: int, high: int) -> float:
        for i in range(low, high):
            left, physical, right = sites[i].shape
            q, r = economic_qr(sites[i].reshape(left * physical, right))
            sites[i] = q.reshape(left, physical, q.shape[1])
            sites[i + 1] = np.tensordot(r, sites[i + 1], axes=([1], [0]))

        # Reduced-state readout seen from each bond: half_step on the newest
        # index, sums over the older ones
        environment = self.half_step.T
        discarded = 0.0
        for i in range(high, low, -1):
            left, physical, right = sites[i].shape
            factorization = truncate_preserving(
                sites[i].reshape(left, physical * right),
                environment,
                self.cfg.svd_cutoff,
            )
            sites[i] = factorization.right.reshape(factorization.rank, physical, right)
            sites[i - 1] = np.tensordot(
                sites[i - 1], factorization.left, axes=([2], [0])
            )
            discarded += factorization.relative_discarded_weight
            environment = np.tile(factorization.right @ environment, (_D, 1))
        return discarded

    def reduced_state(self, state: AugmentedState) -> DenseTensor:
        vector = np.ones(1, dtype=np.complex128)
        for site in state.sites[:-1]:
            vector = vector @ site.sum(axis=1)
        newest = np.tensordot(vector, state.sites[-1][:, :, 0], axes=([0], [0]))
        return devectorize(self.half_step @ newest)

    def run(self, rho0: DenseTensor, allow_unphysical: bool = False) -> Trajectory:
        n_steps = self.cfg.max_steps
        rho = np.empty((n_steps + 1, 3, 3), dtype=np.complex128)
        bond_dimensions = np.ones(n_steps + 1, dtype=np.int64)
        discarded = np.zeros(n_steps + 1)

        rho[0] = initial_matrix(rho0, allow_unphysical)
        state = self.initialize(rho0, allow_unphysical)
        rho[1] = self.reduced_state(state)

        for n in range(2, n_steps + 1):
            state = self.step(state)
            rho[n] = self.reduced_state(state)
            bond_dimensions[n] = state.max_bond_dimension
            discarded[n] = state.cumulative_discarded_weight
            if n % settings.PROGRESS_LOG_INTERVAL == 0:
                logger.info(
                    "tempo_progress",
                    step=n,
                    max_steps=n_steps,
                    max_bond_dimension=state.max_bond_dimension,
                    sites=len(state.sites),
                )

        logger.info(
            "tempo_finished",
            steps=n_steps,
            max_bond_dimension=int(bond_dimensions.max()),
            discarded_weight=float(discarded[-1]),
        )
        return Trajectory(
            times=self.cfg.dt * np.arange(n_steps + 1),
            rho=rho,
            bond_dimensions=bond_dimensions,
            discarded_weights=discarded,
        )


def _apply_site(site: DenseTensor, diagonal: DenseTensor) -> DenseTensor:
    """Multiply an MPS site by a physically diagonal MPO site."""
    left, physical, right = site.shape
    _, bond_left, bond_right = diagonal.shape
    merged = einsum("apb,pcd->acpbd", site, diagonal)
    return merged.reshape(left * bond_left, physical, right * bond_right)


def initialize(
    rho0: DenseTensor,
    cfg: EngineConfig,
    system: SystemParams,
    kernel: MemoryKernel,
    allow_unphysical: bool = False,
) -> AugmentedState:
    return TempoEngine(cfg, system, kernel).initialize(rho0, allow_unphysical)


def step(
    state: AugmentedState,
    cfg: EngineConfig,
    system: SystemParams,
    kernel: MemoryKernel,
) -> AugmentedState:
    return TempoEngine(cfg, system, kernel).step(state)


def reduced_state(
    state: AugmentedState,
    cfg: EngineConfig,
    system: SystemParams,
    kernel: MemoryKernel,
) -> DenseTensor:
    return TempoEngine(cfg, system, kernel).reduced_state(state)


def run_dynamics(
    rho0: DenseTensor,
    cfg: EngineConfig,
    system: SystemParams,
    kernel: MemoryKernel,
    allow_unphysical: bool = False,
) -> Trajectory:
    return TempoEngine(cfg, system, kernel).run(rho0, allow_unphysical)
