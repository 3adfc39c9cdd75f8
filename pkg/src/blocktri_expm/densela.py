"""Dense matrix kernels.

Matrices are plain 2-D NumPy arrays (float64 or complex128). LU and Schur
factorizations are delegated to LAPACK through SciPy; the Sylvester solver,
the closed-form 2x2 exponential and the multiplication counter live here.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg
from scipy.linalg import get_lapack_funcs, solve_triangular

from .exceptions import (
    DimensionError,
    IllSeparatedSylvesterError,
    SchurConvergenceError,
    SingularPadeDenominatorError,
)

UNIT_ROUNDOFF = 2.0 ** -53


class MatmulCounter:
    """Count of matrix-matrix products performed within one invocation."""

    def __init__(self):
        self.count = 0

    def reset(self):
        self.count = 0

    def increment(self, k=1):
        self.count += k

    def __repr__(self):
        return f"MatmulCounter(count={self.count})"


def matmul(A, B, counter=None):
    """Return ``A @ B``, recording the product in `counter`.

    Products with an empty operand do no arithmetic and are not counted.
    """
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise DimensionError(
            f"cannot multiply matrices of shapes {A.shape} and {B.shape}"
        )
    if counter is not None and A.size and B.size:
        counter.increment()
    return A @ B


@dataclass
class LUFactors:
    """Packed LU factors with the LAPACK pivot array (0-based)."""

    lu: np.ndarray
    piv: np.ndarray

    @property
    def shape(self):
        return self.lu.shape


def lu_factor(M):
    """LU factorization with partial pivoting.

    Raises
    ------
    SingularPadeDenominatorError
        If an exactly zero pivot is encountered.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"LU factorization needs a square matrix, got {M.shape}")
    if M.shape[0] == 0:
        return LUFactors(M.copy(), np.zeros(0, dtype=np.int32))
    (getrf,) = get_lapack_funcs(("getrf",), (M,))
    lu, piv, info = getrf(M, overwrite_a=False)
    if info > 0:
        raise SingularPadeDenominatorError(
            f"singular Padé denominator (zero pivot at position {info})"
        )
    if info < 0:
        raise ValueError(f"illegal argument {-info} to getrf")
    return LUFactors(lu, piv)


def lu_solve(M, RHS, side="left"):
    """Solve ``M S = RHS`` (side='left') or ``S M = RHS`` (side='right').

    `M` may be a square array or precomputed :class:`LUFactors`. The right
    solve reuses the factors of `M` through the transposed triangular solves.
    """
    fac = M if isinstance(M, LUFactors) else lu_factor(M)
    RHS = np.asarray(RHS)
    n = fac.shape[0]
    if side == "left":
        if RHS.shape[0] != n:
            raise DimensionError(f"cannot solve {fac.shape} system with RHS {RHS.shape}")
        if n == 0 or RHS.size == 0:
            return np.zeros(RHS.shape, dtype=np.result_type(fac.lu, RHS))
        return scipy.linalg.lu_solve((fac.lu, fac.piv), RHS, check_finite=False)
    if side == "right":
        if RHS.ndim != 2 or RHS.shape[1] != n:
            raise DimensionError(f"cannot solve S*{fac.shape} = RHS {RHS.shape}")
        if n == 0 or RHS.size == 0:
            return np.zeros(RHS.shape, dtype=np.result_type(fac.lu, RHS))
        St = scipy.linalg.lu_solve((fac.lu, fac.piv), RHS.T, trans=1, check_finite=False)
        return St.T
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


@dataclass
class SchurForm:
    """``M = Q T Q^H`` with T upper (quasi-)triangular."""

    Q: np.ndarray
    T: np.ndarray
    is_quasi: bool


def schur_real(M):
    """Schur decomposition: real quasi-triangular for real input,
    complex triangular for complex input.

    LAPACK's Hessenberg reduction plus Francis QR (with its own exceptional
    shifts) does the work.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"Schur decomposition needs a square matrix, got {M.shape}")
    n = M.shape[0]
    if n == 0:
        return SchurForm(np.eye(0, dtype=M.dtype), M.copy(), False)
    output = "complex" if np.iscomplexobj(M) else "real"
    try:
        T, Q = scipy.linalg.schur(M, output=output, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise SchurConvergenceError(
            f"QR iteration failed to converge for {n}x{n} input: {exc}"
        ) from exc
    is_quasi = output == "real" and bool(np.any(np.diag(T, -1) != 0))
    return SchurForm(Q, T, is_quasi)


def diagonal_blocks(T):
    """Diagonal block structure of an upper (quasi-)triangular matrix.

    Returns a list of ``(start, size)`` with size 1 or 2, or None when `T` is
    not quasi-triangular: nonzeros below the first subdiagonal, two
    consecutive nonzero subdiagonal entries, or a nonzero subdiagonal entry in
    a complex matrix.
    """
    n = T.shape[0]
    if n == 0:
        return []
    if n > 2 and np.any(np.tril(T, -2)):
        return None
    sub = np.diag(T, -1)
    if np.iscomplexobj(T) and np.any(sub):
        return None
    nz = sub != 0
    if np.any(nz[1:] & nz[:-1]):
        return None
    blocks = []
    i = 0
    while i < n:
        if i < n - 1 and nz[i]:
            blocks.append((i, 2))
            i += 2
        else:
            blocks.append((i, 1))
            i += 1
    return blocks


def _separation_ok(Ta, Tb, tol):
    da = np.diag(Ta)
    db = np.diag(Tb)
    if da.size == 0 or db.size == 0:
        return True
    return np.min(np.abs(da[:, None] + db[None, :])) >= tol


def _solve_triangular_sylvester(Ta, Tb, F):
    n, d = F.shape
    Y = np.zeros((n, d), dtype=np.result_type(Ta, Tb, F))
    eye = np.eye(n, dtype=Y.dtype)
    for j in range(d):
        rhs = F[:, j] - Y[:, :j] @ Tb[:j, j]
        Y[:, j] = solve_triangular(Ta + Tb[j, j] * eye, rhs, check_finite=False)
    return Y


def sylvester_solve(A, B, C, check=False):
    """Solve ``A R + R B = C`` by the Bartels-Stewart method.

    Both coefficient matrices are reduced to complex triangular Schur form
    (skipped when they are already upper triangular) and the transformed
    equation is solved column by column.

    Parameters
    ----------
    A : (n, n) array_like
    B : (d, d) array_like
    C : (n, d) array_like
    check : bool, optional
        Verify the residual bound ``||AR + RB - C|| <= c u (||A|| + ||B||) ||R||``
        and raise ``AssertionError`` if it fails.

    Returns
    -------
    R : (n, d) ndarray
        Real when all of A, B, C are real.

    Raises
    ------
    IllSeparatedSylvesterError
        If ``min |lambda_i(A) + mu_j(B)| < 10 u (||A|| + ||B||)``.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    C = np.asarray(C)
    n, d = C.shape
    if A.shape != (n, n) or B.shape != (d, d):
        raise DimensionError(
            f"Sylvester operands have incompatible shapes {A.shape}, {B.shape}, {C.shape}"
        )
    real = not (np.iscomplexobj(A) or np.iscomplexobj(B) or np.iscomplexobj(C))
    if n == 0 or d == 0:
        return np.zeros((n, d), dtype=np.result_type(A, B, C))

    scale = np.linalg.norm(A, np.inf) + np.linalg.norm(B, np.inf)
    tri_a = not np.any(np.tril(A, -1))
    tri_b = not np.any(np.tril(B, -1))
    if tri_a:
        Ta, Qa = A, None
    else:
        Ta, Qa = scipy.linalg.schur(A.astype(complex), output="complex")
    if tri_b:
        Tb, Qb = B, None
    else:
        Tb, Qb = scipy.linalg.schur(B.astype(complex), output="complex")

    if not _separation_ok(Ta, Tb, 10 * UNIT_ROUNDOFF * scale):
        raise IllSeparatedSylvesterError(
            "ill-separated Sylvester operands: spectra of A and -B nearly intersect"
        )

    F = C
    if Qa is not None:
        F = Qa.conj().T @ F
    if Qb is not None:
        F = F @ Qb
    Y = _solve_triangular_sylvester(Ta, Tb, F)
    if Qa is not None:
        Y = Qa @ Y
    if Qb is not None:
        Y = Y @ Qb.conj().T
    R = Y.real if real else Y

    if check:
        res = np.linalg.norm(A @ R + R @ B - C, np.inf)
        bound = 100 * max(n, d) * UNIT_ROUNDOFF * scale * np.linalg.norm(R, np.inf)
        assert res <= bound + 100 * UNIT_ROUNDOFF * np.linalg.norm(C, np.inf), (
            f"Sylvester residual {res:.3e} exceeds bound {bound:.3e}"
        )
    return R


_SINCH_CUTOFF = 1e-4


def sinch(x):
    """sinh(x)/x, with a Taylor expansion near zero. Accepts complex `x`."""
    if abs(x) < _SINCH_CUTOFF:
        x2 = x * x
        return 1 + (x2 / 6) * (1 + (x2 / 20) * (1 + x2 / 42))
    return np.sinh(x) / x


def exp_superdiag(lam1, lam2, t12):
    """(1,2) entry of ``exp([[lam1, t12], [0, lam2]])`` without cancellation."""
    return t12 * np.exp((lam1 + lam2) / 2) * sinch((lam1 - lam2) / 2)


def exp2x2(M):
    """Exponential of a real 2x2 matrix in closed form.

    With ``mu = (a+d)/2`` and ``delta**2 = ((a-d)/2)**2 + b*c``,
    ``exp(M) = exp(mu) * (cosh(delta) I + sinh(delta)/delta (M - mu I))``,
    using the trigonometric form when ``delta**2 < 0``. The discriminant
    ``delta**2`` is evaluated exactly in rational arithmetic before rounding.
    """
    M = np.asarray(M, dtype=float)
    if M.shape != (2, 2):
        raise DimensionError(f"exp2x2 needs a 2x2 matrix, got {M.shape}")
    a, b = M[0]
    c, d = M[1]
    mu = (a + d) / 2
    h = (a - d) / 2
    # delta**2 can suffer cancellation between h**2 and b*c; form it exactly
    fa, fb, fc, fd = (Fraction(float(x)) for x in (a, b, c, d))
    delta2 = float(((fa - fd) / 2) ** 2 + fb * fc)
    if abs(delta2) < _SINCH_CUTOFF ** 2:
        ch = 1 + (delta2 / 2) * (1 + (delta2 / 12) * (1 + delta2 / 30))
        sh = 1 + (delta2 / 6) * (1 + (delta2 / 20) * (1 + delta2 / 42))
    elif delta2 > 0:
        dl = np.sqrt(delta2)
        ch = np.cosh(dl)
        sh = np.sinh(dl) / dl
    else:
        dl = np.sqrt(-delta2)
        ch = np.cos(dl)
        sh = np.sin(dl) / dl
    em = np.exp(mu)
    return np.array(
        [[em * (ch + sh * h), em * (sh * b)], [em * (sh * c), em * (ch - sh * h)]]
    )
