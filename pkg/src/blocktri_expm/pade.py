"""Diagonal Padé approximants to exp and their block-triangular counterparts.

``p_m(z) = u_m(z) + v_m(z)`` splits into odd and even parts, so the
denominator is ``q_m(z) = p_m(-z) = -u_m(z) + v_m(z)``. The off-diagonal
block of ``u_m`` and ``v_m`` applied to ``[[A, E], [0, B]]`` is assembled from
the sequence ``M_l``, the (1,2) block of the l-th power of that matrix.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .densela import lu_factor, lu_solve, matmul
from .exceptions import DimensionError

DEGREES = (3, 5, 7, 9, 13)


def _exact_coeffs(m):
    c = [Fraction(1)]
    for k in range(1, m + 1):
        c.append(c[-1] * Fraction(m - k + 1, (2 * m - k + 1) * k))
    return tuple(c)


_EXACT = {m: _exact_coeffs(m) for m in DEGREES}
_COEFFS = {m: tuple(float(x) for x in _EXACT[m]) for m in DEGREES}


@dataclass(frozen=True)
class PadeCoeffs:
    """Numerator coefficients ``c_0 .. c_m`` of the [m/m] Padé approximant."""

    m: int
    c: tuple
    exact: tuple


def pade_coeffs(m):
    """Coefficients of ``p_m(z) = sum_i c_i z^i`` for m in {3, 5, 7, 9, 13}.

    Generated once in exact rational arithmetic, then rounded to double.
    """
    if m not in _COEFFS:
        raise ValueError(f"unsupported Padé degree {m}; expected one of {DEGREES}")
    return PadeCoeffs(m, _COEFFS[m], _EXACT[m])


def even_powers(M, m, counter=None):
    """Even powers of `M` needed by the degree-m scheme, keyed by exponent."""
    top = 6 if m == 13 else m - 1
    powers = {2: matmul(M, M, counter)}
    if top >= 4:
        powers[4] = matmul(powers[2], powers[2], counter)
    if top >= 6:
        powers[6] = matmul(powers[2], powers[4], counter)
    if top >= 8:
        powers[8] = matmul(powers[4], powers[4], counter)
    return powers


class UVParts(NamedTuple):
    """u_m(M), v_m(M) plus the intermediate polynomials reused for L_u, L_v.

    ``odd`` is the polynomial W with ``U = M W``. For m = 13, ``w1`` and
    ``y1`` hold w_1(M) and y_1(M); they are None otherwise.
    """

    U: np.ndarray
    V: np.ndarray
    odd: np.ndarray
    w1: Optional[np.ndarray]
    y1: Optional[np.ndarray]


def uv_parts(M, m, powers, counter=None):
    c = pade_coeffs(m).c
    n = M.shape[0]
    ident = np.eye(n, dtype=M.dtype)
    if m == 13:
        P2, P4, P6 = powers[2], powers[4], powers[6]
        w1 = c[13] * P6 + c[11] * P4 + c[9] * P2
        w2 = c[7] * P6 + c[5] * P4 + c[3] * P2 + c[1] * ident
        y1 = c[12] * P6 + c[10] * P4 + c[8] * P2
        y2 = c[6] * P6 + c[4] * P4 + c[2] * P2 + c[0] * ident
        W = matmul(P6, w1, counter) + w2
        U = matmul(M, W, counter)
        V = matmul(P6, y1, counter) + y2
        return UVParts(U, V, W, w1, y1)
    half = (m - 1) // 2
    odd = c[1] * ident
    V = c[0] * ident
    for k in range(1, half + 1):
        odd = odd + c[2 * k + 1] * powers[2 * k]
        V = V + c[2 * k] * powers[2 * k]
    U = matmul(M, odd, counter)
    return UVParts(U, V, odd, None, None)


def eval_uv(M, m, powers=None, counter=None):
    """Return ``(u_m(M), v_m(M))``.

    Parameters
    ----------
    M : (n, n) ndarray
    m : int
        Padé degree.
    powers : dict, optional
        Precomputed even powers ``{2: M^2, 4: M^4, ...}``; computed if absent.
    counter : MatmulCounter, optional
    """
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"eval_uv needs a square matrix, got {M.shape}")
    if powers is None:
        powers = even_powers(M, m, counter)
    parts = uv_parts(M, m, powers, counter)
    return parts.U, parts.V


def m_sequence(A, B, E, top, powers_a=None, powers_b=None, counter=None):
    """Even terms of ``M_l = L_{z^l}(A, B, E)`` up to index `top`.

    Uses ``M_2 = AE + EB`` and ``M_l = A^{l-2} M_2 + M_{l-2} B^2`` for l >= 4,
    so ``M_6 = A^4 M_2 + M_4 B^2`` as in the printed m = 13 scheme.

    Returns
    -------
    dict
        ``{1: E, 2: M_2, 4: M_4, ...}``.
    """
    n, d = E.shape
    if A.shape != (n, n) or B.shape != (d, d):
        raise DimensionError(
            f"incompatible shapes A {A.shape}, B {B.shape}, E {E.shape}"
        )
    if top not in (2, 4, 6, 8):
        raise ValueError(f"top must be one of 2, 4, 6, 8, got {top}")
    if powers_a is None:
        powers_a = {2: matmul(A, A, counter)}
    for k in range(4, top - 1, 2):
        if k not in powers_a:
            powers_a[k] = matmul(powers_a[k - 2], powers_a[2], counter)
    if powers_b is None:
        powers_b = {2: matmul(B, B, counter)}
    Ms = {1: E, 2: matmul(A, E, counter) + matmul(E, B, counter)}
    for ell in range(4, top + 1, 2):
        Ms[ell] = matmul(powers_a[ell - 2], Ms[2], counter) + matmul(
            Ms[ell - 2], powers_b[2], counter
        )
    return Ms


def eval_L_uv(A, B, E, m, powers_a, Ms, parts_b, counter=None):
    """Off-diagonal blocks ``(L_{u_m}(A,B,E), L_{v_m}(A,B,E))``.

    `parts_b` is the :class:`UVParts` of B, whose odd polynomial (and, for
    m = 13, w_1(B) and y_1(B)) enter through the product rule.
    """
    c = pade_coeffs(m).c
    if m == 13:
        M2, M4, M6 = Ms[2], Ms[4], Ms[6]
        A6 = powers_a[6]
        Dw1 = c[13] * M6 + c[11] * M4 + c[9] * M2
        Dw2 = c[7] * M6 + c[5] * M4 + c[3] * M2
        Dy1 = c[12] * M6 + c[10] * M4 + c[8] * M2
        Dy2 = c[6] * M6 + c[4] * M4 + c[2] * M2
        Dw = matmul(A6, Dw1, counter) + matmul(M6, parts_b.w1, counter) + Dw2
        Du = matmul(A, Dw, counter) + matmul(E, parts_b.odd, counter)
        Dv = matmul(A6, Dy1, counter) + matmul(M6, parts_b.y1, counter) + Dy2
        return Du, Dv
    half = (m - 1) // 2
    S_odd = c[3] * Ms[2]
    Dv = c[2] * Ms[2]
    for k in range(2, half + 1):
        S_odd = S_odd + c[2 * k + 1] * Ms[2 * k]
        Dv = Dv + c[2 * k] * Ms[2 * k]
    Du = matmul(A, S_odd, counter) + matmul(E, parts_b.odd, counter)
    return Du, Dv


@dataclass
class SchemeOutput:
    """Numerator/denominator pieces for A, B and the off-diagonal block."""

    U_a: np.ndarray
    V_a: np.ndarray
    U_b: np.ndarray
    V_b: np.ndarray
    D_u: np.ndarray
    D_v: np.ndarray


def evaluate_scheme(A, B, E, m, counter=None):
    """Evaluate u_m, v_m on A and B and L_{u_m}, L_{v_m} on (A, B, E)."""
    pa = even_powers(A, m, counter)
    pb = even_powers(B, m, counter)
    top = 6 if m == 13 else m - 1
    Ms = m_sequence(A, B, E, top, pa, pb, counter)
    parts_a = uv_parts(A, m, pa, counter)
    parts_b = uv_parts(B, m, pb, counter)
    Du, Dv = eval_L_uv(A, B, E, m, pa, Ms, parts_b, counter)
    return SchemeOutput(parts_a.U, parts_a.V, parts_b.U, parts_b.V, Du, Dv)


def rational_solve(scheme, side_hint="auto", counter=None):
    """Recover ``r_m(A)``, ``r_m(B)`` and ``L_{r_m}(A, B, E)``.

    Solves ``q(A) X = p(A)`` and ``q(B) Y = p(B)``, then either the left
    system ``q(A) D = (D_u + D_v) + (D_u - D_v) Y`` or the right system
    ``D q(B) = (D_u + D_v) + X (D_u - D_v)``. ``side_hint='auto'`` picks the
    left system when n <= d.

    Raises
    ------
    SingularPadeDenominatorError
    """
    sc = scheme
    n = sc.U_a.shape[0]
    d = sc.U_b.shape[0]
    if side_hint == "auto":
        side = "left" if n <= d else "right"
    elif side_hint in ("left", "right"):
        side = side_hint
    else:
        raise ValueError(f"side_hint must be 'auto', 'left' or 'right', got {side_hint!r}")
    fa = lu_factor(-sc.U_a + sc.V_a)
    fb = lu_factor(-sc.U_b + sc.V_b)
    X = lu_solve(fa, sc.U_a + sc.V_a)
    Y = lu_solve(fb, sc.U_b + sc.V_b)
    Dp = sc.D_u + sc.D_v
    Dm = sc.D_u - sc.D_v
    if side == "left":
        D = lu_solve(fa, Dp + matmul(Dm, Y, counter), side="left")
    else:
        D = lu_solve(fb, Dp + matmul(X, Dm, counter), side="right")
    return X, Y, D
