import gmpy2
import mpmath
import numpy as np
import pytest

from blocktri_expm.exceptions import DimensionError
from blocktri_expm.oracle import (
    BigMatrix,
    Lexp_ref,
    block_matrix,
    expm_ref,
    phi_ref,
    rel_error_inf,
)

from _helpers import U


def test_round_trip_exact(rng):
    M = rng.standard_normal((3, 4))
    assert np.array_equal(BigMatrix.from_array(M).to_array(), M)


def test_scalar_exp_many_digits():
    F = expm_ref([[1.0]], 80)
    with mpmath.workdps(80):
        diff = abs(mpmath.mpf(str(F[0, 0])) - mpmath.e)
    assert diff <= mpmath.mpf(10) ** -75


def test_rotation():
    F = expm_ref(np.array([[0.0, 2.0], [-2.0, 0.0]]), 40).to_array()
    assert np.allclose(F, [[np.cos(2), np.sin(2)], [-np.sin(2), np.cos(2)]], rtol=0, atol=2 * U)


def test_nilpotent():
    F = expm_ref(np.array([[0.0, 1.0], [0.0, 0.0]]), 40).to_array()
    assert np.array_equal(F, [[1.0, 1.0], [0.0, 1.0]])


def test_Lexp_divided_difference():
    D = float(Lexp_ref([[2.0]], [[1.0]], [[1.0]], 50)[0, 0])
    assert D == pytest.approx(np.e**2 - np.e, rel=2 * U)


def test_complex_block():
    A = np.array([[1j]])
    D = complex(Lexp_ref(A, [[0.0]], [[1.0]], 40).to_array()[0, 0])
    assert D == pytest.approx((np.exp(1j) - 1) / 1j, rel=2 * U)


def test_phi_values():
    assert float(phi_ref([[0.0]], 3, 30)[0, 0]) == pytest.approx(1 / 6, rel=U)
    x = -20.0
    ref = (np.expm1(x) - x) / x**2
    assert float(phi_ref([[x]], 2, 30)[0, 0]) == pytest.approx(ref, rel=1e-14)
    with pytest.raises(ValueError):
        phi_ref([[0.0]], -1)


def test_scalar_mul_large_float():
    M = BigMatrix.from_array(np.ones((1, 1)), 40)
    big = (M * 2.0**600) / 2.0**600
    assert big.to_array()[0, 0] == 1.0
    assert isinstance((M * 3).data[0, 0], type(gmpy2.mpfr(0)))


def test_block_matrix_shape_error():
    with pytest.raises(DimensionError):
        block_matrix(np.eye(2), np.eye(2), np.ones((3, 2)))


def test_rel_error():
    ref = BigMatrix.from_array(np.array([[1.0, 2.0]]))
    assert rel_error_inf(np.array([[1.0, 2.0]]), ref) == 0
    assert rel_error_inf(np.array([[1.0, 2.5]]), ref) == pytest.approx(0.5 / 3)


def test_Lexp_satisfies_sylvester(rng):
    A, B, E = rng.standard_normal((3, 3)), rng.standard_normal((2, 2)), rng.standard_normal((3, 2))
    digits = 60
    D = Lexp_ref(A, B, E, digits)
    eA, eB = expm_ref(A, digits), expm_ref(B, digits)
    Ab, Bb, Eb = (BigMatrix.from_array(M, digits) for M in (A, B, E))
    resid = (Ab @ D - D @ Bb) - (eA @ Eb - Eb @ eB)
    assert float(resid.norm_inf()) <= 1e-50
