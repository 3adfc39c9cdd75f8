import warnings

import numpy as np
import pytest
import scipy.linalg
from scipy.stats import ortho_group

from blocktri_expm.backward_error import ELL_TABLE
from blocktri_expm.blocktri import (
    block_embed,
    expm,
    expm_block_tri,
    select_params,
    squaring_phase,
)
from blocktri_expm.densela import MatmulCounter
from blocktri_expm.exceptions import DimensionError, NonFiniteInputError
from blocktri_expm.oracle import Lexp_ref, block_matrix, expm_ref, rel_error_inf

from _helpers import U, rel_inf


def _triple(rng, n=5, d=4, scale=1.0):
    return (scale * rng.standard_normal((n, n)), scale * rng.standard_normal((d, d)),
            rng.standard_normal((n, d)))


class TestSelectParams:
    @pytest.mark.parametrize("eta,expected", [
        (0.0, (3, 0)),
        (0.01, (3, 0)),
        (0.1, (5, 0)),
        (0.5, (7, 0)),
        (1.5, (9, 0)),
        (4.74, (13, 0)),
        (4.85e3, (13, 10)),
    ])
    def test_examples(self, eta, expected):
        assert select_params(eta, 0.0) == expected
        assert select_params(0.0, eta) == expected

    def test_boundaries(self):
        for m in (3, 5, 7, 9):
            assert select_params(ELL_TABLE.ell[m], 0)[0] == m
        ell13 = ELL_TABLE.ell[13]
        assert select_params(ell13, 0) == (13, 0)
        assert select_params(np.nextafter(ell13, np.inf), 0) == (13, 1)
        assert select_params(2 * ell13, 0) == (13, 1)
        assert select_params(np.nextafter(2 * ell13, np.inf), 0) == (13, 2)

    def test_scaled_norm_within_threshold(self):
        for eta in np.geomspace(5, 1e6, 50):
            m, s = select_params(eta, 0)
            assert eta / 2**s <= ELL_TABLE.ell[13] < eta / 2 ** (s - 1)

    @pytest.mark.parametrize("bad", [np.nan, np.inf])
    def test_non_finite(self, bad):
        with pytest.raises(NonFiniteInputError):
            select_params(bad, 1.0)


class TestExpmBlockTri:
    def test_zero_triple(self):
        r = expm_block_tri(np.zeros((3, 3)), np.zeros((2, 2)), np.zeros((3, 2)))
        assert np.array_equal(r.X, np.eye(3)) and np.array_equal(r.Y, np.eye(2))
        assert not r.D.any()
        assert (r.m, r.s) == (3, 0)

    @pytest.mark.parametrize("n,d", [(0, 3), (3, 0), (0, 0)])
    def test_empty_blocks(self, n, d, rng):
        A = rng.standard_normal((n, n))
        B = rng.standard_normal((d, d))
        r = expm_block_tri(A, B, np.zeros((n, d)))
        assert r.D.shape == (n, d)
        assert rel_inf(r.X, scipy.linalg.expm(A)) <= 10 * U if n else r.X.shape == (0, 0)

    def test_sinh_scalar(self):
        r = expm_block_tri([[1.0]], [[-1.0]], [[2.0]])
        assert abs(r.D[0, 0] - 2 * np.sinh(1.0)) <= 10 * U * 2 * np.sinh(1.0)

    def test_equal_scalars(self):
        r = expm_block_tri([[0.5]], [[0.5]], [[1.0]])
        assert abs(r.D[0, 0] - np.exp(0.5)) <= 10 * U * np.exp(0.5)

    def test_params_independent_of_E(self, rng):
        A, B, E = _triple(rng, scale=2.0)
        r1 = expm_block_tri(A, B, E)
        r2 = expm_block_tri(A, B, 1e10 * E)
        assert (r1.m, r1.s) == (r2.m, r2.s)
        assert rel_inf(r2.D, 1e10 * r1.D) <= 10 * U

    def test_linear_in_E(self, rng):
        A, B, E = _triple(rng)
        E2 = rng.standard_normal(E.shape)
        D1 = expm_block_tri(A, B, E).D
        D2 = expm_block_tri(A, B, E2).D
        D12 = expm_block_tri(A, B, E + E2).D
        assert rel_inf(D12, D1 + D2) <= 20 * U
        assert np.array_equal(expm_block_tri(A, B, 2.0**-40 * E).D, 2.0**-40 * D1)

    @pytest.mark.parametrize("scale", [0.01, 0.3, 1.0, 5.0, 50.0])
    def test_against_oracle(self, scale, rng):
        A, B, E = _triple(rng, 4, 3, scale / 3)
        r = expm_block_tri(A, B, E)
        F = expm_ref(block_matrix(A, B, E, 60), 60)
        n = A.shape[0]
        # relative errors bounded by condition-scaled roundoff
        assert rel_error_inf(r.X, F[:n, :n]) <= 1e-12
        assert rel_error_inf(r.Y, F[n:, n:]) <= 1e-12
        assert rel_error_inf(r.D, F[:n, n:]) <= 1e-12

    def test_similarity(self, rng):
        A, B, E = _triple(rng, 4, 3)
        P = ortho_group.rvs(4, random_state=1)
        Q = ortho_group.rvs(3, random_state=2)
        D = expm_block_tri(A, B, E).D
        D2 = expm_block_tri(P @ A @ P.T, Q @ B @ Q.T, P @ E @ Q.T).D
        assert rel_inf(D2, P @ D @ Q.T) <= 100 * U

    def test_left_and_right_sides(self, rng):
        A, B, E = _triple(rng)
        Dl = expm_block_tri(A, B, E, side="left").D
        Dr = expm_block_tri(A, B, E, side="right").D
        assert rel_inf(Dl, Dr) <= 100 * U

    @pytest.mark.parametrize("s", [0, 1, 2])
    def test_matmul_count(self, s):
        eta = ELL_TABLE.ell[13] * 2**s * 0.9
        A = np.diag(np.full(4, eta)) + np.triu(np.ones((4, 4)), 1) * 0  # diagonal, norm eta
        A = eta / 5 * np.ones((4, 4)) + 0.0
        A[0, 0] += 0.0
        A = A / np.linalg.norm(A, np.inf) * eta
        c = MatmulCounter()
        r = expm_block_tri(A, A[:3, :3] * 0.1, np.ones((4, 3)), schur="never", counter=c)
        assert (r.m, r.s) == (13, s)
        assert r.matmuls == c.count == 25 + 4 * s

    def test_schur_choice(self, rng):
        A, B, E = _triple(rng, 5, 4, 400.0)
        A, B = A - A.T, B - B.T  # skew: bounded exponentials
        auto = expm_block_tri(A, B, E)
        assert auto.s >= 10 and auto.used_schur
        never = expm_block_tri(A, B, E, schur="never")
        assert not never.used_schur
        scale = np.linalg.norm(never.D, np.inf)
        assert np.linalg.norm(auto.D - never.D, np.inf) <= 1e-9 * scale
        small = expm_block_tri(*_triple(rng))
        assert not small.used_schur
        assert expm_block_tri(*_triple(rng), schur="always").used_schur

    def test_quasi_triangular_input_diagonal(self):
        T = np.array([[0.0, 30.0, 1.0], [-30.0, 0.0, 2.0], [0.0, 0.0, -1.0]])
        r = expm_block_tri(T, np.array([[2.0]]), np.ones((3, 1)), schur="always")
        ref = expm_ref(T, 60).to_array()
        assert rel_inf(r.X, ref) <= 1e-12

    def test_complex_input(self, rng):
        A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        B = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        E = rng.standard_normal((3, 2)) + 0j
        r = expm_block_tri(A, B, E)
        assert np.iscomplexobj(r.D)
        assert rel_error_inf(r.D, Lexp_ref(A, B, E, 50)) <= 1e-13

    def test_overflow_warns(self):
        with pytest.warns(RuntimeWarning, match="overflow in the squaring phase"):
            r = expm_block_tri([[1000.0]], [[1.0]], [[1.0]])
        assert r.overflow

    def test_bad_input(self):
        with pytest.raises(DimensionError):
            expm_block_tri(np.eye(2), np.eye(2), np.ones((3, 2)))
        with pytest.raises(ValueError):
            expm_block_tri(np.eye(2), np.eye(2), np.ones((2, 2)), schur="sometimes")
        with pytest.raises(NonFiniteInputError):
            expm_block_tri([[np.nan]], [[1.0]], [[1.0]])


class TestSquaringPhase:
    def test_s0_returns_inputs(self, rng):
        X, Y, D = (rng.standard_normal((2, 2)) for _ in range(3))
        out = squaring_phase(X, Y, D, 0)
        assert out[0] is X and out[1] is Y and out[2] is D

    def test_scalar_doubling(self):
        X, Y, D = squaring_phase(np.array([[2.0]]), np.array([[2.0]]), np.array([[1.0]]), 2)
        assert X[0, 0] == 16 and Y[0, 0] == 16 and D[0, 0] == 32

    def test_exact_triangular_diagonal(self, rng):
        T = np.triu(rng.standard_normal((5, 5)))
        X0 = scipy.linalg.expm(T / 8)
        X, Y, D = squaring_phase(X0, X0, np.zeros((5, 5)), 3, tri_a=T, tri_b=T)
        d = np.diag(T)
        assert np.all(np.abs(np.diag(X) - np.exp(d)) <= 2 * U * np.exp(d))
        assert rel_inf(X, expm_ref(T, 50).to_array()) <= 100 * U

    def test_chain_rule(self, rng):
        """D for (A, B) equals the squared-out D for (A/4, B/4)."""
        A, B, E = _triple(rng, 3, 3, 0.5)
        r = expm_block_tri(A / 4, B / 4, E / 4)
        X, Y, D = squaring_phase(r.X, r.Y, r.D, 2)
        assert rel_error_inf(D, Lexp_ref(A, B, E, 50)) <= 100 * U


def test_expm_matches_scipy(rng):
    for scale in (0.1, 1, 10):
        A = scale * rng.standard_normal((6, 6))
        assert rel_error_inf(expm(A), expm_ref(A, 60)) <= 1e-12


def test_block_embed_matches_on_small_problem(rng):
    A, B, E = _triple(rng, 3, 2, 0.5)
    X, Y, D = block_embed(A, B, E)
    r = expm_block_tri(A, B, E)
    assert rel_inf(D, r.D) <= 1e-13 and rel_inf(X, r.X) <= 1e-13
