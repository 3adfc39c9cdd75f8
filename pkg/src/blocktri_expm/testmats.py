"""Seeded test-matrix generators.

``chebspec`` is the Chebyshev spectral differentiation matrix on the n+1
extreme points ``x_j = cos(pi j / n)`` with the first row and column deleted.
``hamiltonian-pair`` returns ``(T, H)``: T is the triangular Schur factor of an
involutory matrix ``S diag(+-1) S^{-1}`` with its positive diagonal entries
negated (so T is stable with diagonal -1), and ``H = (C + C^T)/2`` with
``C = chebspec(n)``.
"""

import numpy as np
import scipy.linalg

KINDS = ("stable-tri", "symm", "randn", "chebspec", "hamiltonian-pair")


def cheb_nodes_matrix(N):
    """(N+1) x (N+1) Chebyshev differentiation matrix on ``cos(pi j / N)``."""
    if N == 0:
        return np.zeros((1, 1))
    j = np.arange(N + 1)
    x = np.cos(np.pi * j / N)
    c = np.ones(N + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** j
    dX = x[:, None] - x[None, :]
    Dm = np.outer(c, 1.0 / c) / (dX + np.eye(N + 1))
    Dm -= np.diag(Dm.sum(axis=1))
    return Dm


def chebspec(n):
    """n x n Chebyshev spectral differentiation matrix (first row/column removed).

    Examples
    --------
    >>> chebspec(2)
    array([[ 0. , -0.5],
           [ 2. , -1.5]])
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    return cheb_nodes_matrix(n)[1:, 1:]


def involutory(n, rng):
    """Random matrix S diag(+-1) S^{-1}, which squares to the identity."""
    S = rng.standard_normal((n, n))
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return S @ np.diag(signs) @ np.linalg.inv(S)


def hamiltonian_pair(n, rng):
    """Stable triangular T and symmetric H for the Hamiltonian test problem."""
    T, _ = scipy.linalg.schur(involutory(n, rng), output="real")
    T = np.triu(T)
    d = np.diag(T).copy()
    d[d > 0] *= -1
    np.fill_diagonal(T, d)
    C = chebspec(n)
    return T, (C + C.T) / 2


def gen_testmat(kind, n, seed=0):
    """Generate a test matrix (or the pair ``(T, H)`` for 'hamiltonian-pair').

    Parameters
    ----------
    kind : {'stable-tri', 'symm', 'randn', 'chebspec', 'hamiltonian-pair'}
    n : int
        Dimension, at least 1.
    seed : int
        Seed for :func:`numpy.random.default_rng`.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    if kind == "stable-tri":
        T = np.triu(rng.standard_normal((n, n)), 1)
        np.fill_diagonal(T, -(0.1 + np.abs(rng.standard_normal(n))))
        return T
    if kind == "symm":
        C = rng.standard_normal((n, n))
        return (C + C.T) / 2
    if kind == "randn":
        return rng.standard_normal((n, n))
    if kind == "chebspec":
        return chebspec(n)
    if kind == "hamiltonian-pair":
        return hamiltonian_pair(n, rng)
    raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
