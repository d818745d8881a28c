"""Dense tensor primitives shared by every numerical package.

No dependencies on other cqed_tempo.* modules.
"""

from .operations import (
    contract,
    economic_qr,
    matrix_exponential,
    truncate_preserving,
    truncated_svd,
)
from .tensor_types import (
    DenseTensor,
    PreservingTruncation,
    TensorError,
    TruncatedFactorization,
)

__all__ = [
    # Types
    "DenseTensor",
    "TruncatedFactorization",
    "PreservingTruncation",
    "TensorError",
    # Operations
    "contract",
    "truncated_svd",
    "truncate_preserving",
    "economic_qr",
    "matrix_exponential",
]
