"""Backward-error thresholds for the Padé degrees.

For the [m/m] Padé approximant r_m, ``log(exp(-z) r_m(z)) = sum_k b_k z^(2m+2k+1)``
and ``h(z) = sum_k |b_k| z^(2m+2k+1)``. The thresholds are

* ``theta_m``: largest z with ``h(z)/z <= u`` (bound for the diagonal blocks),
* ``ell_m``: largest z with ``h'(z) <= u`` (bound for the off-diagonal block,
  which is a Fréchet derivative of the block-diagonal problem).

The shipped :data:`ELL_TABLE` was produced by :func:`derive_ell_theta` at
100 digits; ``tests/test_backward_error.py`` regenerates and compares it.
"""

from dataclasses import dataclass, field
from types import MappingProxyType

import mpmath

from .oracle import pade_backward_error_series
from .pade import DEGREES, pade_coeffs

UNIT_ROUNDOFF = 2.0 ** -53

_ELL = {
    3: 0.010813385777848366,
    5: 0.1998063206978949,
    7: 0.7834608472962045,
    9: 1.7824486239692787,
    13: 4.740307543766806,
}
_THETA = {
    3: 0.014955852179582915,
    5: 0.2539398330063232,
    7: 0.9504178996162932,
    9: 2.0978479612570675,
    13: 5.371920351148153,
}


@dataclass(frozen=True)
class EllTable:
    """Thresholds ``ell_m`` and ``theta_m`` keyed by Padé degree."""

    ell: MappingProxyType = field(default_factory=lambda: MappingProxyType(dict(_ELL)))
    theta: MappingProxyType = field(default_factory=lambda: MappingProxyType(dict(_THETA)))
    u: float = UNIT_ROUNDOFF


ELL_TABLE = EllTable()


def _bisect(f, target, lo, hi, iters=400):
    while f(hi) <= target:
        lo, hi = hi, 2 * hi
    for _ in range(iters):
        mid = (lo + hi) / 2
        if f(mid) <= target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= mpmath.mpf(10) ** (-mpmath.mp.dps + 5) * hi:
            break
    return lo


def _tail(terms):
    """Geometric estimate of the series remainder past the last two terms."""
    nz = [t for t in terms if t]
    if len(nz) < 2:
        return mpmath.mpf(0)
    ratio = nz[-1] / nz[-2]
    if ratio >= 1:
        return mpmath.inf
    return nz[-1] * ratio / (1 - ratio)


def derive_ell_theta(m, precision_digits=100, order=None, max_retries=5):
    """Compute ``(ell_m, theta_m)`` from the backward-error power series.

    Parameters
    ----------
    m : int
        Padé degree, one of 3, 5, 7, 9, 13.
    precision_digits : int
        Decimal digits for the series arithmetic (at least 100).
    order : int, optional
        Truncation order of the series; defaults to ``2*(m+60) + 1``.

    Returns
    -------
    (float, float)
    """
    if m not in DEGREES:
        raise ValueError(f"unsupported Padé degree {m}")
    if precision_digits < 100:
        raise ValueError("precision_digits must be at least 100")
    order = 2 * (m + 60) + 1 if order is None else order
    u = mpmath.mpf(UNIT_ROUNDOFF)
    for _ in range(max_retries):
        N = order + 1
        with mpmath.workdps(precision_digits):
            g = pade_backward_error_series(pade_coeffs(m).exact, N, precision_digits)
            # only odd powers from 2m+1 on are structurally nonzero
            a = [abs(x) if i % 2 and i >= 2 * m + 1 else mpmath.mpf(0)
                 for i, x in enumerate(g)]

            def h_over_z_terms(z):
                return [a[i] * z ** (i - 1) for i in range(1, N)]

            def dh_terms(z):
                return [i * a[i] * z ** (i - 1) for i in range(1, N)]

            theta = _bisect(lambda z: mpmath.fsum(h_over_z_terms(z)), u,
                            mpmath.mpf(0), mpmath.mpf(1))
            ell = _bisect(lambda z: mpmath.fsum(dh_terms(z)), u,
                          mpmath.mpf(0), mpmath.mpf(1))
            tail = max(_tail(h_over_z_terms(theta)), _tail(dh_terms(ell)))
            if tail <= u / 100:
                return float(ell), float(theta)
        order += 60
    raise RuntimeError(f"series truncation insufficient for m={m} after {max_retries} retries")


def series_coefficients(m, precision_digits=100, order=None):
    """Coefficients of ``log(exp(-z) r_m(z))`` up to `order` (mpmath values)."""
    order = 2 * (m + 60) + 1 if order is None else order
    with mpmath.workdps(precision_digits):
        return pade_backward_error_series(pade_coeffs(m).exact, order + 1, precision_digits)
