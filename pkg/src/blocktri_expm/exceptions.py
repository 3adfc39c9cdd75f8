"""Exception hierarchy used across the package."""

import numpy as np


class BlockExpmError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(BlockExpmError, ValueError):
    """Operand shapes are incompatible."""


class NonFiniteInputError(BlockExpmError, ValueError):
    """An input contains NaN or Inf."""


class SingularPadeDenominatorError(BlockExpmError, np.linalg.LinAlgError):
    """An LU factorization hit an exactly zero pivot."""


class SchurConvergenceError(BlockExpmError, np.linalg.LinAlgError):
    """The QR iteration behind the Schur decomposition did not converge."""


class IllSeparatedSylvesterError(BlockExpmError, np.linalg.LinAlgError):
    """The spectra of A and -B are too close for a Sylvester solve."""
