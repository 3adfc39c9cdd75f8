"""Reading and writing dense matrices.

Matrix Market files (array or coordinate) go through :mod:`scipy.io`; any
other file is read as whitespace-separated rows. Writes always use the
Matrix Market array format with 17 significant digits, which round-trips
double precision values exactly.
"""

import io
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .exceptions import BlockExpmError

MM_BANNER = "%%MatrixMarket"
_ARRAY_HEADER = "%%MatrixMarket matrix array {field} general"


class MatrixFileError(BlockExpmError, OSError):
    """A matrix file could not be read or parsed."""


def read_matrix(path):
    """Read a matrix from a Matrix Market or plain-text file.

    Parameters
    ----------
    path : str or Path

    Returns
    -------
    ndarray
        2-D float64 or complex128 array.

    Raises
    ------
    MatrixFileError
        If the file is missing or malformed; the message names the file and,
        where the parser reports it, the offending line.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MatrixFileError(f"{path}: cannot read file ({exc.strerror or exc})") from exc
    try:
        if text.lstrip().startswith(MM_BANNER):
            M = _empty_mm(text)
            if M is None:
                M = scipy.io.mmread(io.StringIO(text))
            if scipy.sparse.issparse(M):
                M = M.toarray()
        else:
            rows = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
            if not rows:
                raise ValueError("empty file")
            M = np.loadtxt(io.StringIO(text), ndmin=2, comments="#")
    except (ValueError, IndexError) as exc:
        raise MatrixFileError(f"{path}: {exc}") from exc
    M = np.asarray(M)
    if M.ndim != 2:
        raise MatrixFileError(f"{path}: expected a 2-D matrix, got shape {M.shape}")
    return M.astype(np.complex128 if np.iscomplexobj(M) else np.float64)


def _empty_mm(text):
    """Return an empty array if the Matrix Market size line has a zero dimension.

    scipy's reader and writer do not handle empty matrices.
    """
    lines = text.lstrip().splitlines()
    for ln in lines[1:]:
        if ln.strip() and not ln.startswith("%"):
            dims = [int(x) for x in ln.split()[:2]]
            if 0 in dims:
                dtype = np.complex128 if "complex" in lines[0] else np.float64
                return np.zeros(dims, dtype=dtype)
            return None
    return None


def write_matrix(path, M):
    """Write `M` in Matrix Market array format with 17 significant digits."""
    M = np.asarray(M)
    if M.ndim < 2:
        M = M.reshape(1, -1)
    try:
        if M.size == 0:
            field = "complex" if np.iscomplexobj(M) else "real"
            Path(path).write_text(_ARRAY_HEADER.format(field=field) + f"\n{M.shape[0]} {M.shape[1]}\n")
            return
        scipy.io.mmwrite(str(path), M, precision=17, symmetry="general")
    except OSError as exc:
        raise MatrixFileError(f"{path}: cannot write file ({exc.strerror or exc})") from exc
