"""Exponential of a block upper triangular matrix ``[[A, E], [0, B]]``.

:func:`expm_block_tri` returns ``exp(A)``, ``exp(B)`` and the off-diagonal
block ``L_exp(A, B, E)`` by scaling and squaring with diagonal Padé
approximants, without ever forming the ``(n+d) x (n+d)`` matrix. The scaling
parameter depends only on ``max(||A||_inf, ||B||_inf)``, never on E.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._validation import as_matrix, check_square, check_triple
from .backward_error import ELL_TABLE
from .densela import (
    MatmulCounter,
    diagonal_blocks,
    exp2x2,
    exp_superdiag,
    matmul,
    schur_real,
)
from .exceptions import NonFiniteInputError
from .pade import evaluate_scheme, rational_solve

SCHUR_MIN_SCALING = 10


@dataclass
class ExpmResult:
    """Output of :func:`expm_block_tri`.

    Attributes
    ----------
    X, Y, D : ndarray
        Approximations to ``exp(A)``, ``exp(B)`` and ``L_exp(A, B, E)``.
    m : int
        Padé degree used.
    s : int
        Scaling parameter.
    used_schur : bool
        Whether A and B were reduced to Schur form first.
    matmuls : int
        Matrix-matrix products performed.
    overflow : bool
        True if the squaring phase produced non-finite entries.
    """

    X: np.ndarray
    Y: np.ndarray
    D: np.ndarray
    m: int
    s: int
    used_schur: bool
    matmuls: int
    overflow: bool = False


def select_params(normA, normB, table=ELL_TABLE):
    """Choose the Padé degree m and scaling s from the diagonal-block norms.

    Returns the smallest m in {3, 5, 7, 9} with ``eta <= ell_m`` and s = 0, or
    m = 13 with the smallest s >= 0 such that ``2^-s eta <= ell_13``, where
    ``eta = max(normA, normB)``.
    """
    eta = max(normA, normB)
    if not (math.isfinite(normA) and math.isfinite(normB)):
        raise NonFiniteInputError("non-finite input norm")
    for m in (3, 5, 7, 9):
        if eta <= table.ell[m]:
            return m, 0
    ell13 = table.ell[13]
    s = max(0, math.ceil(math.log2(eta / ell13)))
    # log2 can be off by one ulp near powers of two
    while math.ldexp(eta, -s) > ell13:
        s += 1
    while s > 0 and math.ldexp(eta, -(s - 1)) <= ell13:
        s -= 1
    return 13, s


def _replace_diagonal(X, T, blocks, scale):
    for i, size in blocks:
        if size == 1:
            X[i, i] = np.exp(scale * T[i, i])
        else:
            X[i:i + 2, i:i + 2] = exp2x2(scale * T[i:i + 2, i:i + 2])
    for (i, si), (j, sj) in zip(blocks, blocks[1:]):
        if si == 1 and sj == 1:
            X[i, j] = exp_superdiag(scale * T[i, i], scale * T[j, j], scale * T[i, j])


def squaring_phase(X0, Y0, D0, s, tri_a=None, tri_b=None, counter=None):
    """Undo the scaling: ``D <- X D + D Y``, then ``X <- X^2``, ``Y <- Y^2``.

    Parameters
    ----------
    X0, Y0, D0 : ndarray
        ``r_m(2^-s A)``, ``r_m(2^-s B)`` and the matching off-diagonal block.
    s : int
        Number of squarings.
    tri_a, tri_b : ndarray, optional
        Unscaled upper (quasi-)triangular A and B. When given, the diagonal
        (1x1 entries, 2x2 blocks and the superdiagonal between 1x1 blocks) of
        X and Y is overwritten after every squaring by the exact exponential of
        the correspondingly scaled part of A and B.
    counter : MatmulCounter, optional
    """
    if s == 0:
        return X0, Y0, D0
    X, Y, D = X0.copy(), Y0.copy(), D0.copy()
    blocks_a = diagonal_blocks(tri_a) if tri_a is not None else None
    blocks_b = diagonal_blocks(tri_b) if tri_b is not None else None
    if blocks_a:
        _replace_diagonal(X, tri_a, blocks_a, 2.0 ** -s)
    if blocks_b:
        _replace_diagonal(Y, tri_b, blocks_b, 2.0 ** -s)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, s + 1):
            D = matmul(X, D, counter) + matmul(D, Y, counter)
            X = matmul(X, X, counter)
            Y = matmul(Y, Y, counter)
            if blocks_a:
                _replace_diagonal(X, tri_a, blocks_a, 2.0 ** (k - s))
            if blocks_b:
                _replace_diagonal(Y, tri_b, blocks_b, 2.0 ** (k - s))
    return X, Y, D


def _norm_inf(M):
    return float(np.linalg.norm(M, np.inf)) if M.size else 0.0


def expm_block_tri(A, B, E, schur="auto", side="auto", table=ELL_TABLE, counter=None):
    """Compute ``exp(A)``, ``exp(B)`` and ``L_exp(A, B, E)`` simultaneously.

    Parameters
    ----------
    A : (n, n) array_like
    B : (d, d) array_like
    E : (n, d) array_like
    schur : {'auto', 'always', 'never'}
        Reduce A and B to Schur form first. 'auto' does so when the scaling
        parameter is at least 10. Real inputs use the real Schur form.
    side : {'auto', 'left', 'right'}
        Which linear system recovers the off-diagonal block from the Padé
        pieces; 'auto' factors against the smaller diagonal block.
    table : EllTable
        Degree-selection thresholds.
    counter : MatmulCounter, optional
        Reset on entry and incremented for every matrix product.

    Returns
    -------
    ExpmResult

    Examples
    --------
    >>> import numpy as np
    >>> r = expm_block_tri([[1.0]], [[-1.0]], [[1.0]])
    >>> round(float(r.D[0, 0]), 12)  # sinh(1)
    1.175201193644
    """
    if schur not in ("auto", "always", "never"):
        raise ValueError(f"schur must be 'auto', 'always' or 'never', got {schur!r}")
    A, B, E = check_triple(A, B, E)
    if counter is None:
        counter = MatmulCounter()
    counter.reset()

    m, s = select_params(_norm_inf(A), _norm_inf(B), table)
    used_schur = schur == "always" or (schur == "auto" and s >= SCHUR_MIN_SCALING)
    if used_schur:
        fa, fb = schur_real(A), schur_real(B)
        A, B = fa.T, fb.T
        E = matmul(matmul(fa.Q.conj().T, E, counter), fb.Q, counter)

    tri_a = A if diagonal_blocks(A) is not None else None
    tri_b = B if diagonal_blocks(B) is not None else None

    scale = 2.0 ** -s
    scheme = evaluate_scheme(A * scale, B * scale, E * scale, m, counter)
    X, Y, D = rational_solve(scheme, side, counter)
    # overflow is reported once, below, instead of through numpy's warnings
    with np.errstate(over="ignore", invalid="ignore"):
        X, Y, D = squaring_phase(X, Y, D, s, tri_a, tri_b, counter)
        if used_schur:
            Qa, Qb = fa.Q, fb.Q
            X = matmul(matmul(Qa, X, counter), Qa.conj().T, counter)
            Y = matmul(matmul(Qb, Y, counter), Qb.conj().T, counter)
            D = matmul(matmul(Qa, D, counter), Qb.conj().T, counter)

    overflow = not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y)) and np.all(np.isfinite(D)))
    if overflow:
        warnings.warn(
            f"overflow in the squaring phase (s={s}); result contains non-finite entries",
            RuntimeWarning,
            stacklevel=2,
        )
    return ExpmResult(X, Y, D, m, s, used_schur, counter.count, overflow)


def expm(A, schur="auto", counter=None):
    """Matrix exponential via :func:`expm_block_tri` with an empty B block."""
    A = as_matrix(A, "A")
    check_square(A, "A")
    empty = np.zeros((0, 0), dtype=A.dtype)
    res = expm_block_tri(A, empty, np.zeros((A.shape[0], 0), dtype=A.dtype),
                         schur=schur, counter=counter)
    return res.X


def block_embed(A, B, E):
    """Reference route: library ``expm`` on the assembled block matrix.

    Returns ``(X, Y, D)`` read off the diagonal and (1,2) blocks. The scaling
    here depends on ``||E||``, which is what makes this route lose accuracy
    when E dominates.
    """
    A, B, E = check_triple(A, B, E)
    n = A.shape[0]
    F = scipy.linalg.expm(np.block([[A, E], [np.zeros((B.shape[0], n), dtype=A.dtype), B]]))
    return F[:n, :n], F[n:, n:], F[:n, n:]
