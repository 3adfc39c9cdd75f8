"""Input checking helpers shared by the public entry points."""

import numpy as np

from .exceptions import DimensionError, NonFiniteInputError


def as_matrix(M, name="M"):
    """Return `M` as a 2-D float64 or complex128 array.

    Python scalars and 0-d arrays become 1x1 matrices. Integer and boolean
    arrays are promoted to float64.
    """
    arr = np.asarray(M)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        return np.asarray(arr, dtype=np.complex128)
    return np.asarray(arr, dtype=np.float64)


def check_square(M, name="M"):
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")


def check_finite(*mats, names=None):
    for i, M in enumerate(mats):
        if M.size and not np.all(np.isfinite(M)):
            label = names[i] if names else f"argument {i}"
            raise NonFiniteInputError(f"non-finite input in {label}")


def check_triple(A, B, E):
    """Validate and coerce a block triple (A, B, E).

    Returns arrays sharing one dtype: complex128 if any operand is complex,
    float64 otherwise.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    E = as_matrix(E, "E")
    check_square(A, "A")
    check_square(B, "B")
    if E.shape != (A.shape[0], B.shape[0]):
        raise DimensionError(
            f"E must have shape {(A.shape[0], B.shape[0])} to match "
            f"A {A.shape} and B {B.shape}, got {E.shape}"
        )
    check_finite(A, B, E, names=("A", "B", "E"))
    dtype = np.result_type(A, B, E)
    return A.astype(dtype, copy=False), B.astype(dtype, copy=False), E.astype(dtype, copy=False)


def is_real(*mats):
    return not any(np.iscomplexobj(M) for M in mats)
