"""Influence functional types.

Compound Liouville indices follow column-stacked vectorization:
β = 3·r + s where s is the row (ket) index and r the column (bra) index.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from cqed_tempo.packages.system.system_types import DIMENSION, LIOUVILLE_DIMENSION
from cqed_tempo.packages.tensors import DenseTensor


class InfluenceError(ValueError):
    """Raised when an influence tensor or MPO cannot be built."""

    pass


@dataclass(frozen=True)
class CouplingDiagonal:
    """Diagonal of the system-bath coupling operator in the fixed basis."""

    values: tuple[float, float, float] = (0.0, 1.0, 0.0)

    def __post_init__(self):
        if len(self.values) != DIMENSION:
            raise InfluenceError(
                f"Coupling diagonal needs {DIMENSION} entries, got {len(self.values)}"
            )

    @classmethod
    def emitter(cls) -> "CouplingDiagonal":
        """σ†σ: only |e,0⟩ couples to the phonons."""
        return cls()

    @property
    def ket(self) -> NDArray[np.float64]:
        """λ_s for every compound index."""
        beta = np.arange(LIOUVILLE_DIMENSION)
        return np.asarray(self.values, dtype=float)[beta % DIMENSION]

    @property
    def bra(self) -> NDArray[np.float64]:
        """λ_r for every compound index."""
        beta = np.arange(LIOUVILLE_DIMENSION)
        return np.asarray(self.values, dtype=float)[beta // DIMENSION]

    def classes(self) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
        """Group compound indices by their (λ_s, λ_r) pair.

        Returns the class label of every compound index and one
        representative index per class.
        """
        pairs = np.stack([self.ket, self.bra], axis=1)
        _, representatives, labels = np.unique(
            pairs, axis=0, return_index=True, return_inverse=True
        )
        return labels.reshape(-1), representatives


@dataclass(frozen=True)
class InfluenceTensor:
    """b_Δ[β_i, β_j] with β_i the later and β_j the earlier time slice."""

    delta: int
    values: DenseTensor

    @property
    def is_trivial(self) -> bool:
        return bool(np.all(self.values == 1.0))


@dataclass(frozen=True)
class StepMpo:
    """Influence MPO applied when step k is added to the augmented state.

    Sites are ordered oldest to newest and stored as
    (physical-out, left bond, physical-in, right bond). The left bond of the
    first site and the right bond of the last site have extent 1. Every site
    is diagonal in its physical indices.
    """

    step: int
    sites: tuple[DenseTensor, ...]

    @property
    def span(self) -> int:
        return len(self.sites)

    @property
    def bond_dimensions(self) -> list[int]:
        return [site.shape[3] for site in self.sites[:-1]]

    def diagonals(self) -> list[DenseTensor]:
        """Per-site (physical, left bond, right bond) diagonal blocks."""
        return [np.einsum("pcpd->pcd", site) for site in self.sites]

    def to_dense(self) -> DenseTensor:
        """Contract all bonds into the weight of every index string.

        Result has one axis of extent 9 per site, oldest first.
        """
        result = np.ones((1,), dtype=np.complex128)
        for diagonal in self.diagonals():
            result = np.tensordot(result, diagonal, axes=([-1], [1]))
        return result[..., 0]
