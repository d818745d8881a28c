"""Tensor types and data structures."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

DenseTensor = NDArray[np.complex128]


class TensorError(ValueError):
    """Raised for malformed tensors or incompatible shapes."""

    pass


@dataclass(frozen=True)
class TruncatedFactorization:
    """Result of a truncated singular value decomposition m ≈ left·diag(s)·right.

    Attributes:
        left: (rows, r) isometry, left†·left = 1
        singular_values: r non-negative values in descending order
        right: (r, cols) isometry, right·right† = 1
        discarded_weight: sum of squares of the dropped singular values
        total_weight: sum of squares of all singular values
    """

    left: DenseTensor
    singular_values: NDArray[np.float64]
    right: DenseTensor
    discarded_weight: float
    total_weight: float

    @property
    def rank(self) -> int:
        return len(self.singular_values)

    @property
    def relative_discarded_weight(self) -> float:
        if self.total_weight == 0.0:
            return 0.0
        return self.discarded_weight / self.total_weight

    def reconstruct(self) -> DenseTensor:
        return (self.left * self.singular_values) @ self.right


@dataclass(frozen=True)
class PreservingTruncation:
    """Truncated factorization m ≈ left·right that keeps m·environment exact.

    Attributes:
        left: (rows, r) carry to be absorbed by the neighbouring site
        right: (r, cols) with orthonormal rows, right·right† = 1
        discarded_weight: sum of squares of the dropped singular values
        total_weight: squared Frobenius norm of m
    """

    left: DenseTensor
    right: DenseTensor
    discarded_weight: float
    total_weight: float

    @property
    def rank(self) -> int:
        return self.right.shape[0]

    @property
    def relative_discarded_weight(self) -> float:
        if self.total_weight == 0.0:
            return 0.0
        return self.discarded_weight / self.total_weight

    def reconstruct(self) -> DenseTensor:
        return self.left @ self.right
