"""Arbitrary-precision reference computations.

Everything here is independent of the double-precision algorithms: dense
matrices are NumPy object arrays of gmpy2 ``mpfr``/``mpc`` numbers, and the
power-series work uses mpmath. Results are slow but accurate to the
requested number of decimal digits.
"""

import math

import gmpy2
import mpmath
import numpy as np

from .exceptions import DimensionError

DEFAULT_DIGITS = 100
GUARD_DIGITS = 20
_MPC = type(gmpy2.mpc(0))


def _bits(digits):
    return int(math.ceil((digits + GUARD_DIGITS) * math.log2(10)))


def _context(digits):
    return gmpy2.context(gmpy2.get_context(), precision=_bits(digits))


class BigMatrix:
    """Dense matrix of arbitrary-precision entries sharing one precision.

    Parameters
    ----------
    data : ndarray of object
        Entries as gmpy2 ``mpfr`` (real) or ``mpc`` (complex).
    digits : int
        Target decimal digits; arithmetic runs with 20 extra guard digits.
    """

    __array_priority__ = 100

    def __init__(self, data, digits=DEFAULT_DIGITS):
        self.data = data
        self.digits = digits

    @classmethod
    def from_array(cls, M, digits=DEFAULT_DIGITS, complex_=None):
        if isinstance(M, BigMatrix):
            return cls(M.data, digits)
        M = np.asarray(M)
        if M.ndim == 0:
            M = M.reshape(1, 1)
        if M.ndim != 2:
            raise DimensionError(f"expected a 2-D matrix, got shape {M.shape}")
        if complex_ is None:
            complex_ = np.iscomplexobj(M)
        conv = gmpy2.mpc if complex_ else gmpy2.mpfr
        with _context(digits):
            data = np.empty(M.shape, dtype=object)
            for idx, x in np.ndenumerate(M):
                data[idx] = conv(complex(x)) if complex_ else conv(float(x))
        return cls(data, digits)

    @classmethod
    def zeros(cls, rows, cols, digits=DEFAULT_DIGITS, complex_=False):
        with _context(digits):
            z = gmpy2.mpc(0) if complex_ else gmpy2.mpfr(0)
        return cls(np.full((rows, cols), z, dtype=object), digits)

    @classmethod
    def identity(cls, n, digits=DEFAULT_DIGITS, complex_=False):
        out = cls.zeros(n, n, digits, complex_)
        with _context(digits):
            one = gmpy2.mpc(1) if complex_ else gmpy2.mpfr(1)
        for i in range(n):
            out.data[i, i] = one
        return out

    @property
    def shape(self):
        return self.data.shape

    @property
    def is_complex(self):
        return any(isinstance(x, _MPC) for x in self.data.flat)

    def to_array(self):
        """Round every entry to the nearest double."""
        if self.is_complex:
            conv, dtype = complex, np.complex128
        else:
            conv, dtype = float, np.float64
        out = np.empty(self.shape, dtype=dtype)
        for idx, x in np.ndenumerate(self.data):
            out[idx] = conv(x)
        return out

    def _wrap(self, data):
        return BigMatrix(data, self.digits)

    def __matmul__(self, other):
        if self.shape[1] != other.shape[0]:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        with _context(self.digits):
            if self.shape[1] == 0:
                return BigMatrix.zeros(self.shape[0], other.shape[1], self.digits)
            return self._wrap(self.data.dot(other.data))

    def _operand(self, other):
        return other.data if isinstance(other, BigMatrix) else other

    def __add__(self, other):
        with _context(self.digits):
            return self._wrap(self.data + self._operand(other))

    def __sub__(self, other):
        with _context(self.digits):
            return self._wrap(self.data - self._operand(other))

    @staticmethod
    def _scalar(x):
        # numpy would otherwise route Python floats through float64 arithmetic
        if isinstance(x, (complex, np.complexfloating)):
            return gmpy2.mpc(complex(x))
        if isinstance(x, (int, float, np.integer, np.floating)):
            return gmpy2.mpfr(x)
        return x

    def __mul__(self, scalar):
        with _context(self.digits):
            return self._wrap(self.data * self._scalar(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        with _context(self.digits):
            return self._wrap(self.data / self._scalar(scalar))

    def __getitem__(self, key):
        out = self.data[key]
        return self._wrap(out) if isinstance(out, np.ndarray) else out

    @property
    def T(self):
        return self._wrap(self.data.T.copy())

    def norm_inf(self):
        with _context(self.digits):
            if self.data.size == 0:
                return gmpy2.mpfr(0)
            return max(sum(abs(x) for x in row) for row in self.data)

    def __repr__(self):
        return f"BigMatrix(shape={self.shape}, digits={self.digits})"


def _as_big(M, digits, complex_=None):
    return BigMatrix.from_array(M, digits, complex_=complex_)


def block_matrix(A, B, E, digits=DEFAULT_DIGITS):
    """Assemble ``[[A, E], [0, B]]`` as a BigMatrix."""
    complex_ = any(
        (m.is_complex if isinstance(m, BigMatrix) else np.iscomplexobj(m)) for m in (A, B, E)
    )
    A, B, E = (_as_big(m, digits, complex_) for m in (A, B, E))
    n, d = A.shape[0], B.shape[0]
    if E.shape != (n, d):
        raise DimensionError(f"E must be {(n, d)}, got {E.shape}")
    out = BigMatrix.zeros(n + d, n + d, digits, complex_)
    out.data[:n, :n] = A.data
    out.data[:n, n:] = E.data
    out.data[n:, n:] = B.data
    return out


def matmul_ref(A, B, digits=50):
    """Product of two matrices in `digits`-digit arithmetic."""
    return _as_big(A, digits) @ _as_big(B, digits)


def expm_ref(M, digits=DEFAULT_DIGITS):
    """High-precision matrix exponential by Taylor series with scaling.

    Scales so that ``||2^-s M||_inf <= 1/8``, sums the Taylor series until the
    term norm drops below ``10^-(digits+10)`` relative to the partial sum, then
    squares s times.
    """
    M = _as_big(M, digits)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionError(f"expm_ref needs a square matrix, got {M.shape}")
    complex_ = M.is_complex
    with _context(digits):
        nrm = M.norm_inf()
        s = 0
        eighth = gmpy2.mpfr(1) / 8
        while nrm > eighth:
            nrm /= 2
            s += 1
        Ms = M * (gmpy2.mpfr(2) ** -s)
        tol = gmpy2.mpfr(10) ** -(digits + 10)
        S = BigMatrix.identity(n, digits, complex_)
        term = BigMatrix.identity(n, digits, complex_)
        k = 1
        while n:
            term = (term @ Ms) / k
            S = S + term
            tn = term.norm_inf()
            if tn == 0 or tn <= tol * S.norm_inf():
                break
            k += 1
        for _ in range(s):
            S = S @ S
    return S


def Lexp_ref(A, B, E, digits=DEFAULT_DIGITS):
    """(1,2) block of ``exp([[A, E], [0, B]])`` via block embedding."""
    n = np.shape(A.data if isinstance(A, BigMatrix) else A)[0]
    F = expm_ref(block_matrix(A, B, E, digits), digits)
    return F[:n, n:]


def phi_ref(A, j, digits=DEFAULT_DIGITS):
    """``phi_j(A) = sum_k A^k / (k+j)!`` summed directly.

    Working precision grows with ``||A||_inf`` to absorb the cancellation in
    the alternating terms, so no scaling is required.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    A0 = _as_big(A, digits)
    n = A0.shape[0]
    nrm = float(A0.norm_inf())
    work = digits + int(math.ceil(nrm / math.log(10))) + 5
    A1 = BigMatrix(A0.data, work)
    complex_ = A1.is_complex
    with _context(work):
        term = BigMatrix.identity(n, work, complex_) / gmpy2.fac(j)
        S = term
        tol = gmpy2.mpfr(10) ** -(digits + 10)
        k = 1
        while n:
            term = (term @ A1) / (k + j)
            S = S + term
            tn = term.norm_inf()
            if tn == 0 or (k > nrm and tn <= tol * S.norm_inf()):
                break
            k += 1
    return BigMatrix(S.data, digits)


def eig_ref(M, digits=50):
    """Eigenvalues of a double matrix computed in `digits`-digit arithmetic."""
    M = np.asarray(M)
    with mpmath.workdps(digits):
        ev = mpmath.eig(mpmath.matrix(M.tolist()), left=False, right=False)
        return np.array([complex(x) for x in ev])


def rel_error_inf(computed, ref):
    """Relative inf-norm error ``||ref - computed|| / ||ref||``.

    The difference is formed in the reference precision and only then rounded
    to double, so the result does not suffer from rounding `ref` first.
    """
    diff = (ref - _as_big(computed, ref.digits, complex_=ref.is_complex)).to_array()
    refd = ref.to_array()
    denom = np.linalg.norm(refd, np.inf) if refd.size else 0.0
    num = np.linalg.norm(diff, np.inf) if diff.size else 0.0
    if denom == 0:
        return float(num)
    return float(num / denom)


# ---------------------------------------------------------------------------
# Power series in mpmath, truncated at a fixed order N (coefficients 0..N-1).


def series_mul(a, b, N):
    out = [mpmath.mpf(0)] * N
    for i, x in enumerate(a[:N]):
        if not x:
            continue
        for j, y in enumerate(b[: N - i]):
            out[i + j] += x * y
    return out


def series_inv(a, N):
    if not a[0]:
        raise ZeroDivisionError("series with zero constant term has no inverse")
    out = [mpmath.mpf(0)] * N
    out[0] = 1 / a[0]
    for k in range(1, N):
        acc = mpmath.mpf(0)
        for j in range(1, min(k, len(a) - 1) + 1):
            acc += a[j] * out[k - j]
        out[k] = -acc / a[0]
    return out


def series_log1p(w, N):
    """Series of ``log(1 + w)`` for `w` with zero constant term."""
    if w[0]:
        raise ValueError("log1p composition needs w(0) = 0")
    out = [mpmath.mpf(0)] * N
    power = [mpmath.mpf(1)] + [mpmath.mpf(0)] * (N - 1)
    k = 1
    while True:
        power = series_mul(power, w, N)
        if not any(power):
            break
        sign = 1 if k % 2 else -1
        for i in range(N):
            out[i] += sign * power[i] / k
        k += 1
    return out


def pade_backward_error_series(coeffs, N, digits=DEFAULT_DIGITS):
    """Coefficients of ``log(exp(-z) r_m(z))`` through ``z^(N-1)``.

    `coeffs` are the exact numerator coefficients of the [m/m] Padé
    approximant (fractions.Fraction); the denominator is ``p_m(-z)``.
    """
    with mpmath.workdps(digits):
        c = [mpmath.mpf(x.numerator) / x.denominator for x in coeffs]
        pad = [mpmath.mpf(0)] * max(0, N - len(c))
        p = (c + pad)[:N]
        q = ([x if i % 2 == 0 else -x for i, x in enumerate(c)] + pad)[:N]
        r = series_mul(p, series_inv(q, N), N)
        e = [(-1) ** k / mpmath.factorial(k) for k in range(N)]
        w = series_mul(e, r, N)
        w[0] -= 1
        return series_log1p(w, N)
