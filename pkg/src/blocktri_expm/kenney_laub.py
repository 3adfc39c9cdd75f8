"""Kenney-Laub baseline for ``L_exp(A, B, E)``.

Uses ``L_exp(A, B, E) ~= (e^A R + R e^B) / 2`` where ``vec(R) =
tau(Omega/2) vec(E)``, ``Omega = A^T (+) (-B)`` and ``tau(z) = tanh(z)/z``.
``tau`` is replaced by its [8/8] Padé approximant in factored form, so R is
obtained from a cascade of eight Sylvester equations. Inputs are scaled so
that ``2^-s max(||A||_F, ||B||_F) <= 1/4`` and the scaling is undone by the
top-down recursion with independently computed exponentials per level.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
import scipy.linalg

from ._validation import check_triple, is_real
from .blocktri import expm
from .densela import sylvester_solve

TAU_PADE_DEGREE = 8
_TAU_DIGITS = 60


@dataclass(frozen=True)
class TauPade:
    """Roots of the [8/8] Padé approximant ``r_8(z) = prod (1 - z/alpha_j) / (1 - z/beta_j)``."""

    alpha: np.ndarray
    beta: np.ndarray

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        num = np.prod([1 - z / a for a in self.alpha], axis=0)
        den = np.prod([1 - z / b for b in self.beta], axis=0)
        return num / den


def _tau_series_in_w(nterms):
    """Coefficients of tau(z) as a series in ``w = z^2``."""
    S = [1 / mpmath.factorial(2 * k + 1) for k in range(nterms)]  # sinh(z)/z
    C = [1 / mpmath.factorial(2 * k) for k in range(nterms)]  # cosh(z)
    t = []
    for k in range(nterms):
        acc = S[k] - mpmath.fsum(C[k - j] * t[j] for j in range(k))
        t.append(acc / C[0])
    return t


def _tau_pade_polys(digits=_TAU_DIGITS):
    """Numerator/denominator of the [4/4] Padé approximant of tau in w = z^2."""
    with mpmath.workdps(digits):
        half = TAU_PADE_DEGREE // 2
        t = _tau_series_in_w(2 * half + 1)
        p, q = mpmath.pade(t, half, half)
        return p, q


def _roots_in_z(coeffs, digits):
    """Roots in z of ``sum_k coeffs[k] z^(2k)``, each w-root giving a +- pair."""
    with mpmath.workdps(digits):
        wroots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=2 * digits)
        out = []
        for w in wroots:
            r = mpmath.sqrt(mpmath.mpc(w))
            out.extend([complex(r), complex(-r)])
        return np.array(out)


@lru_cache(maxsize=None)
def tau_pade8():
    """Factored [8/8] Padé approximant of ``tau(z) = tanh(z)/z`` (cached).

    The Maclaurin series of tau is generated in 60-digit arithmetic as the
    quotient of the sinh(z)/z and cosh(z) series, the Padé system is solved
    in the variable ``w = z^2`` (tau is even) and the polynomial roots are
    mapped back to z.

    Examples
    --------
    >>> tp = tau_pade8()
    >>> bool(abs(tp(0.0) - 1) < 1e-15)
    True
    """
    p, q = _tau_pade_polys()
    return TauPade(_roots_in_z(p, _TAU_DIGITS), _roots_in_z(q, _TAU_DIGITS))


def tau_pade_error(z, digits=50):
    """``|tau(i z) - r_8(i z)|`` evaluated in `digits`-digit arithmetic."""
    p, q = _tau_pade_polys(digits + 20)
    with mpmath.workdps(digits + 20):
        iz = mpmath.mpc(0, z)
        w = iz * iz
        tau = mpmath.tanh(iz) / iz
        r = mpmath.polyval(list(reversed(p)), w) / mpmath.polyval(list(reversed(q)), w)
        return abs(tau - r)


def sylvester_cascade(A, B, E, tp=None):
    """Return R_8 with ``vec(R_8) = r_8(Omega/2) vec(E)``.

    Solves, for j = 1..8 and R_0 = E,
    ``(I + A/beta_j) R_j + R_j (I - B/beta_j) = (I + A/alpha_j) R_{j-1} + R_{j-1} (I - B/alpha_j)``.
    The arithmetic is complex; the result is returned complex.
    """
    tp = tau_pade8() if tp is None else tp
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    R = np.asarray(E, dtype=complex)
    In = np.eye(A.shape[0], dtype=complex)
    Id = np.eye(B.shape[0], dtype=complex)
    for a, b in zip(tp.alpha, tp.beta):
        rhs = (In + A / a) @ R + R @ (Id - B / a)
        R = sylvester_solve(In + A / b, Id - B / b, rhs)
    return R


@dataclass
class KLResult:
    """Output of :func:`kl_frechet`.

    Attributes
    ----------
    D : ndarray
        Approximation to ``L_exp(A, B, E)``.
    s : int
        Scaling parameter of the tau approximation.
    levels : list of dict
        Per-level diagnostics of the top-down recursion; the norms refer to
        the working basis (the Schur basis when ``schur=True``).
    imag_residual : float
        Largest discarded imaginary part (real inputs only).
    """

    D: np.ndarray
    s: int
    levels: list = field(default_factory=list)
    imag_residual: float = 0.0


def kl_scaling(normA_F, normB_F):
    """Smallest s >= 0 with ``2^-s max(normA_F, normB_F) <= 1/4``."""
    eta = max(normA_F, normB_F)
    if not np.isfinite(eta):
        raise ValueError("non-finite input norm")
    s = 0
    while np.ldexp(eta, -s) > 0.25:
        s += 1
    return s


def kl_frechet(A, B, E, schur=True):
    """Kenney-Laub approximation of ``L_exp(A, B, E)`` (recursive form).

    Parameters
    ----------
    A : (n, n) array_like
    B : (d, d) array_like
    E : (n, d) array_like
    schur : bool
        Reduce A and B to complex triangular Schur form first so every
        Sylvester equation in the cascade is triangular.

    Returns
    -------
    KLResult
    """
    A, B, E = check_triple(A, B, E)
    real = is_real(A, B, E)
    s = kl_scaling(np.linalg.norm(A, "fro"), np.linalg.norm(B, "fro"))

    if schur and A.size and B.size:
        Ta, Qa = scipy.linalg.schur(A.astype(complex), output="complex")
        Tb, Qb = scipy.linalg.schur(B.astype(complex), output="complex")
        A, B = Ta, Tb
        E = Qa.conj().T @ E @ Qb
    else:
        Qa = Qb = None

    scale = 2.0 ** -s
    D = sylvester_cascade(A * scale, B * scale, E)
    levels = []
    # with s = 0 the loop is empty and the final update uses e^A, e^B
    first = 0.5 if s else 1.0
    X, Y = expm(A * first), expm(B * first)
    for j in range(1, s + 1):
        D = X @ D + D @ Y
        levels.append({"level": j, "norm_X": float(np.linalg.norm(X, np.inf)),
                       "norm_Y": float(np.linalg.norm(Y, np.inf))})
        if j < s:
            X = expm(A * 2.0 ** -(j + 1))
            Y = expm(B * 2.0 ** -(j + 1))
    D = (X @ D + D @ Y) * 2.0 ** -(s + 1)

    if Qa is not None:
        D = Qa @ D @ Qb.conj().T
    imag = 0.0
    if real:
        imag = float(np.max(np.abs(D.imag))) if D.size else 0.0
        D = D.real.copy()
    return KLResult(D, s, levels, imag)
