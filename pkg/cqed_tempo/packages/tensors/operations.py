from collections.abc import Sequence

import numpy as np
import scipy.linalg

from .tensor_types import (
    DenseTensor,
    PreservingTruncation,
    TensorError,
    TruncatedFactorization,
)


def as_tensor(data) -> DenseTensor:
    tensor = np.asarray(data, dtype=np.complex128)
    if not np.all(np.isfinite(tensor)):
        raise TensorError("Tensor contains non-finite entries")
    return tensor


def contract(
    a: DenseTensor,
    b: DenseTensor,
    axis_pairs: Sequence[tuple[int, int]],
) -> DenseTensor:
    """Sum over paired axes of a and b.

    The result carries the uncontracted axes of a followed by those of b.
    An empty axis_pairs gives the outer product.
    """
    a = as_tensor(a)
    b = as_tensor(b)
    axes_a = [pair[0] for pair in axis_pairs]
    axes_b = [pair[1] for pair in axis_pairs]
    for axis_a, axis_b in zip(axes_a, axes_b):
        if not (-a.ndim <= axis_a < a.ndim and -b.ndim <= axis_b < b.ndim):
            raise TensorError(f"Axis pair ({axis_a}, {axis_b}) out of range")
        if a.shape[axis_a] != b.shape[axis_b]:
            raise TensorError(
                f"Cannot contract axis {axis_a} of extent {a.shape[axis_a]} "
                f"with axis {axis_b} of extent {b.shape[axis_b]}"
            )
    return np.tensordot(a, b, axes=(axes_a, axes_b))


def truncated_svd(m: DenseTensor, cutoff: float) -> TruncatedFactorization:
    """Singular value decomposition keeping σ_i with σ_i / σ_max ≥ cutoff.

    An all-zero matrix factorizes with a single zero singular value so that
    bond dimensions never drop to zero.
    """
    m = as_tensor(m)
    if m.ndim != 2:
        raise TensorError(f"truncated_svd needs a matrix, got rank {m.ndim}")
    if m.size == 0:
        raise TensorError("Cannot factorize an empty matrix")
    if cutoff < 0:
        raise TensorError(f"SVD cutoff must be non-negative, got {cutoff}")

    rows, cols = m.shape
    if not np.any(m):
        left = np.zeros((rows, 1), dtype=np.complex128)
        left[0, 0] = 1.0
        right = np.zeros((1, cols), dtype=np.complex128)
        right[0, 0] = 1.0
        return TruncatedFactorization(
            left=left,
            singular_values=np.zeros(1),
            right=right,
            discarded_weight=0.0,
            total_weight=0.0,
        )

    try:
        u, s, vh = scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        # gesdd occasionally fails to converge on ill-conditioned input
        u, s, vh = scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesvd")

    keep = max(1, int(np.count_nonzero(s >= cutoff * s[0])))
    weights = s**2
    return TruncatedFactorization(
        left=u[:, :keep],
        singular_values=s[:keep],
        right=vh[:keep, :],
        discarded_weight=float(weights[keep:].sum()),
        total_weight=float(weights.sum()),
    )


def economic_qr(m: DenseTensor) -> tuple[DenseTensor, DenseTensor]:
    """m = q·r with q of orthonormal columns and min(rows, cols) of them."""
    m = as_tensor(m)
    if m.ndim != 2:
        raise TensorError(f"economic_qr needs a matrix, got rank {m.ndim}")
    if m.size == 0:
        raise TensorError("Cannot factorize an empty matrix")
    q, r = scipy.linalg.qr(m, mode="economic")
    return q, r


def truncate_preserving(
    m: DenseTensor, environment: DenseTensor, cutoff: float
) -> PreservingTruncation:
    """Truncate m while keeping m·environment exact.

    The row directions spanned by the environment columns are kept verbatim.
    Only the remainder of m orthogonal to them is truncated, dropping
    singular values below cutoff times the largest singular value of m.
    Falls back to an exact factorization when truncation would not shrink
    the bond below the row count.
    """
    m = as_tensor(m)
    environment = as_tensor(environment)
    if m.ndim != 2 or environment.ndim != 2:
        raise TensorError("truncate_preserving needs matrices")
    if environment.shape[0] != m.shape[1]:
        raise TensorError(
            f"Environment of {environment.shape[0]} rows does not match "
            f"{m.shape[1]} columns"
        )
    if cutoff < 0:
        raise TensorError(f"SVD cutoff must be non-negative, got {cutoff}")

    rows = m.shape[0]
    total = float(np.vdot(m, m).real)
    kept = scipy.linalg.orth(environment)
    coefficients = m @ kept
    remainder = truncated_svd(m - coefficients @ kept.conj().T, 0.0)

    s = remainder.singular_values
    scale = float(s[0])
    if kept.size:
        scale = max(scale, float(np.linalg.norm(coefficients, 2)))
    n_kept = 0
    if remainder.total_weight > 0.0:
        n_kept = int(np.count_nonzero(s >= cutoff * scale))

    if kept.shape[1] + n_kept > rows or kept.shape[1] + n_kept == 0:
        exact = truncated_svd(m, 0.0)
        return PreservingTruncation(
            left=exact.left * exact.singular_values,
            right=exact.right,
            discarded_weight=0.0,
            total_weight=total,
        )

    return PreservingTruncation(
        left=np.hstack([coefficients, remainder.left[:, :n_kept] * s[:n_kept]]),
        right=np.vstack([kept.conj().T, remainder.right[:n_kept]]),
        discarded_weight=float((s[n_kept:] ** 2).sum()),
        total_weight=total,
    )


def matrix_exponential(m: DenseTensor) -> DenseTensor:
    m = as_tensor(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise TensorError(f"Matrix exponential needs a square matrix, got {m.shape}")
    return scipy.linalg.expm(m)
