"""Exponential of block upper triangular matrices ``[[A, E], [0, B]]``.

The main entry point is :func:`expm_block_tri`, which returns ``exp(A)``,
``exp(B)`` and the off-diagonal block ``L_exp(A, B, E)`` together, choosing
its Padé degree and scaling from ``||A||`` and ``||B||`` alone.
"""

from .apps import (
    HamiltonianExp,
    NestedLevel,
    hamiltonian_exp,
    nested_sequence,
    phi_combination,
    triangular_expm_partitioned,
)
from .backward_error import ELL_TABLE, EllTable, derive_ell_theta
from .blocktri import ExpmResult, block_embed, expm, expm_block_tri, select_params, squaring_phase
from .densela import MatmulCounter
from .exceptions import (
    BlockExpmError,
    DimensionError,
    IllSeparatedSylvesterError,
    NonFiniteInputError,
    SchurConvergenceError,
    SingularPadeDenominatorError,
)
from .kenney_laub import KLResult, TauPade, kl_frechet, tau_pade8
from .pade import pade_coeffs

__version__ = "0.1.0"

__all__ = [
    "BlockExpmError",
    "DimensionError",
    "ELL_TABLE",
    "EllTable",
    "ExpmResult",
    "HamiltonianExp",
    "IllSeparatedSylvesterError",
    "KLResult",
    "MatmulCounter",
    "NestedLevel",
    "NonFiniteInputError",
    "SchurConvergenceError",
    "SingularPadeDenominatorError",
    "TauPade",
    "block_embed",
    "derive_ell_theta",
    "expm",
    "expm_block_tri",
    "hamiltonian_exp",
    "kl_frechet",
    "nested_sequence",
    "pade_coeffs",
    "phi_combination",
    "select_params",
    "squaring_phase",
    "tau_pade8",
    "triangular_expm_partitioned",
]
