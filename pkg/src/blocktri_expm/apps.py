"""Application kernels built on :func:`expm_block_tri`.

Each kernel rewrites its problem as the exponential of a block upper
triangular matrix and reads the answer off the computed blocks.
"""

from typing import NamedTuple

import numpy as np

from ._validation import as_matrix, check_square
from .blocktri import expm, expm_block_tri
from .densela import UNIT_ROUNDOFF
from .exceptions import DimensionError


def phi_combination(A, ws, **opts):
    """Evaluate ``phi_0(A) w_0 + phi_1(A) w_1 + ... + phi_p(A) w_p``.

    With ``W = [w_p, ..., w_1]`` and ``J`` the p x p nilpotent Jordan block,
    the sum equals ``e^A w_0 + L_exp(A, J, W) e_p``, so one call to
    :func:`expm_block_tri` suffices.

    Parameters
    ----------
    A : (n, n) array_like
    ws : sequence of (n,) array_like
        ``w_0, ..., w_p``.
    **opts
        Passed to :func:`expm_block_tri`.

    Returns
    -------
    ndarray of shape (n,)

    Examples
    --------
    >>> float(phi_combination([[0.0]], [[1.0], [1.0], [1.0]])[0])
    2.5
    """
    A = as_matrix(A, "A")
    check_square(A, "A")
    n = A.shape[0]
    if len(ws) == 0:
        raise ValueError("at least w_0 is required")
    vecs = []
    for j, w in enumerate(ws):
        w = np.asarray(w).reshape(-1)
        if w.shape[0] != n:
            raise DimensionError(f"w_{j} has length {w.shape[0]}, expected {n}")
        vecs.append(w)
    p = len(vecs) - 1
    if p == 0:
        return expm(A, **opts) @ vecs[0]
    J = np.eye(p, k=1)
    W = np.column_stack(vecs[:0:-1])
    res = expm_block_tri(A, J, W, **opts)
    return res.X @ vecs[0] + res.D[:, -1]


class HamiltonianExp(NamedTuple):
    """Blocks of ``exp([[T, H], [0, -T^T]]) = [[F, D], [0, Y]]``; Y equals ``F^{-T}``."""

    F: np.ndarray
    D: np.ndarray
    Y: np.ndarray


def hamiltonian_exp(T, H, **opts):
    """Exponential of the Hamiltonian matrix ``[[T, H], [0, -T^T]]``.

    Parameters
    ----------
    T : (n, n) array_like
    H : (n, n) array_like
        Symmetric to within ``10 u ||H||_inf``.

    Returns
    -------
    HamiltonianExp
    """
    T = as_matrix(T, "T")
    H = as_matrix(H, "H")
    check_square(T, "T")
    if H.shape != T.shape:
        raise DimensionError(f"H must have shape {T.shape}, got {H.shape}")
    asym = np.linalg.norm(H - H.T, np.inf)
    if asym > 10 * UNIT_ROUNDOFF * np.linalg.norm(H, np.inf):
        raise ValueError(f"H is not symmetric (||H - H^T||_inf = {asym:.3e})")
    res = expm_block_tri(T, -T.T, H, **opts)
    return HamiltonianExp(res.X, res.D, res.Y)


class NestedLevel(NamedTuple):
    """One step of a nested block triangular sequence: new column block E, new diagonal G."""

    E: np.ndarray
    G: np.ndarray


def nested_sequence(G00, levels, **opts):
    """Exponentials of a recursively nested block upper triangular sequence.

    ``G_n = [[G_{n-1}, E_n], [0, G_nn]]`` and
    ``F_n = exp(G_n) = [[F_{n-1}, L_exp(G_{n-1}, G_nn, E_n)], [0, exp(G_nn)]]``.

    Parameters
    ----------
    G00 : (k, k) array_like
    levels : sequence of NestedLevel or (E, G) pairs

    Returns
    -------
    list of ndarray
        ``[F_0, F_1, ..., F_N]``.
    """
    G = as_matrix(G00, "G00")
    check_square(G, "G00")
    F = expm(G, **opts)
    out = [F]
    for i, lev in enumerate(levels, start=1):
        E, Gnn = (as_matrix(x, name) for x, name in zip(lev, ("E", "G")))
        check_square(Gnn, f"G at level {i}")
        if E.shape != (G.shape[0], Gnn.shape[0]):
            raise DimensionError(
                f"level {i}: E must have shape {(G.shape[0], Gnn.shape[0])}, got {E.shape}"
            )
        res = expm_block_tri(G, Gnn, E, **opts)
        lower = np.zeros((Gnn.shape[0], G.shape[0]), dtype=res.D.dtype)
        F = np.block([[F, res.D], [lower, res.Y]])
        G = np.block([[G, E], [lower.astype(G.dtype), Gnn]])
        out.append(F)
    return out


def best_split(T):
    """Index k minimising ``max(||T[:k,:k]||_inf, ||T[k:,k:]||_inf)``; ties go to the smallest k."""
    n = T.shape[0]
    best_k, best = None, np.inf
    for k in range(1, n):
        val = max(np.linalg.norm(T[:k, :k], np.inf), np.linalg.norm(T[k:, k:], np.inf))
        if val < best:
            best_k, best = k, val
    return best_k


def triangular_expm_partitioned(T, **opts):
    """Exponential of an upper triangular matrix via one 2x2 block partition.

    Parameters
    ----------
    T : (n, n) array_like
        Upper triangular, n >= 2.

    Returns
    -------
    ndarray
    """
    T = as_matrix(T, "T")
    check_square(T, "T")
    n = T.shape[0]
    if n < 2:
        raise DimensionError("triangular_expm_partitioned needs n >= 2")
    if np.any(np.tril(T, -1)):
        raise ValueError("T must be upper triangular")
    k = best_split(T)
    res = expm_block_tri(T[:k, :k], T[k:, k:], T[:k, k:], **opts)
    out = np.zeros_like(res.X, shape=(n, n))
    out[:k, :k] = res.X
    out[k:, k:] = res.Y
    out[:k, k:] = res.D
    return out
