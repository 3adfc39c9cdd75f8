from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blocktri_expm.densela import MatmulCounter
from blocktri_expm.pade import (
    DEGREES,
    eval_L_uv,
    eval_uv,
    evaluate_scheme,
    even_powers,
    m_sequence,
    pade_coeffs,
    rational_solve,
    uv_parts,
)

from _helpers import U, rel_inf


def _exact_pade_numerator(m):
    """Solve the [m/m] Padé conditions for e^z in exact rationals.

    Unknowns p_0..p_m, q_1..q_m with q_0 = 1 and p(z) - e^z q(z) = O(z^(2m+1)).
    """
    fact = [Fraction(1)]
    for k in range(1, 2 * m + 1):
        fact.append(fact[-1] * k)
    t = [1 / f for f in fact]
    # q_1..q_m from the equations for z^(m+1) .. z^(2m): sum_j q_j t_{k-j} = 0
    n = m
    rows = [[t[k - j] if k - j >= 0 else Fraction(0) for j in range(1, m + 1)] + [-t[k]]
            for k in range(m + 1, 2 * m + 1)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col] / rows[col][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    q = [Fraction(1)] + [rows[i][n] / rows[i][i] for i in range(n)]
    p = [sum(q[j] * t[k - j] for j in range(0, k + 1)) for k in range(m + 1)]
    return p, q


class TestCoefficients:
    def test_m3_exact(self):
        p, q = _exact_pade_numerator(3)
        assert p == [1, Fraction(1, 2), Fraction(1, 10), Fraction(1, 120)]
        assert list(pade_coeffs(3).exact) == p
        assert pade_coeffs(3).c == (1.0, 0.5, 0.1, 1 / 120)

    @pytest.mark.parametrize("m", DEGREES)
    def test_against_linear_system(self, m):
        p, q = _exact_pade_numerator(m)
        pc = pade_coeffs(m)
        assert list(pc.exact) == p
        # denominator is p(-z)
        assert q == [x * (-1) ** i for i, x in enumerate(p)]
        assert pc.c == tuple(float(x) for x in p)

    def test_c13(self):
        assert pade_coeffs(13).exact[13] == Fraction(1, 64764752532480000)

    @pytest.mark.parametrize("m", DEGREES)
    def test_normalisation_and_recurrence(self, m):
        c = pade_coeffs(m).exact
        assert c[0] == 1 and c[1] == Fraction(1, 2)
        for k in range(1, m + 1):
            assert c[k] == c[k - 1] * Fraction(m - k + 1, (2 * m - k + 1) * k)

    def test_unsupported(self):
        with pytest.raises(ValueError):
            pade_coeffs(4)


class TestEvalUV:
    @pytest.mark.parametrize("m", DEGREES)
    def test_zero(self, m):
        U_, V = eval_uv(np.zeros((3, 3)), m)
        assert not U_.any()
        assert np.array_equal(V, np.eye(3))

    def test_r3_at_one(self):
        U_, V = eval_uv(np.array([[1.0]]), 3)
        assert U_[0, 0] == pytest.approx(61 / 120, rel=U)
        assert V[0, 0] == pytest.approx(11 / 10, rel=U)
        c = pade_coeffs(3).exact
        Ue = c[1] + c[3]
        Ve = c[0] + c[2]
        assert Ue == Fraction(61, 120) and Ve == Fraction(11, 10)
        assert (Ue + Ve) / (Ve - Ue) == Fraction(193, 71)
        assert (U_ + V)[0, 0] / (V - U_)[0, 0] == pytest.approx(193 / 71, rel=4 * U)

    def test_r13_accuracy(self):
        c = pade_coeffs(13).exact
        with mpmath.workdps(50):
            cm = [mpmath.mpf(x.numerator) / x.denominator for x in c]
            for z in np.linspace(-1, 1, 21):
                zm = mpmath.mpf(z)
                num = mpmath.fsum(ci * zm**i for i, ci in enumerate(cm))
                den = mpmath.fsum(ci * (-zm) ** i for i, ci in enumerate(cm))
                assert abs(num / den - mpmath.exp(zm)) <= 1e-16
                U_, V = eval_uv(np.array([[z]]), 13)
                r = ((U_ + V) / (V - U_))[0, 0]
                assert abs(r - float(mpmath.exp(zm))) <= 8 * U * np.exp(abs(z))

    def test_matches_polynomial_on_matrix(self, rng):
        M = 0.5 * rng.standard_normal((4, 4))
        for m in DEGREES:
            c = pade_coeffs(m).c
            P = sum(ci * np.linalg.matrix_power(M, i) for i, ci in enumerate(c))
            U_, V = eval_uv(M, m)
            assert rel_inf(U_ + V, P) <= 20 * U

    def test_power_table(self, rng):
        M = rng.standard_normal((3, 3))
        assert set(even_powers(M, 3)) == {2}
        assert set(even_powers(M, 5)) == {2, 4}
        assert set(even_powers(M, 7)) == {2, 4, 6}
        assert set(even_powers(M, 9)) == {2, 4, 6, 8}
        assert set(even_powers(M, 13)) == {2, 4, 6}


def _scalar(x):
    return np.array([[float(x)]])


class TestMSequence:
    def test_zero_E(self, rng):
        A, B = rng.standard_normal((3, 3)), rng.standard_normal((2, 2))
        Ms = m_sequence(A, B, np.zeros((3, 2)), 6)
        assert all(not Ms[k].any() for k in (2, 4, 6))

    def test_scalar_divided_difference(self):
        assert m_sequence(_scalar(2), _scalar(1), _scalar(1), 2)[2][0, 0] == 3
        Ms = m_sequence(_scalar(1), _scalar(0), _scalar(1), 6)
        assert [Ms[k][0, 0] for k in (2, 4, 6)] == [1, 1, 1]

    def test_block_powers(self, rng):
        n, d = 3, 2
        A, B, E = rng.standard_normal((n, n)), rng.standard_normal((d, d)), rng.standard_normal((n, d))
        Z = np.block([[A, E], [np.zeros((d, n)), B]])
        Ms = m_sequence(A, B, E, 8, even_powers(A, 9), even_powers(B, 9))
        for k in (2, 4, 6, 8):
            assert rel_inf(Ms[k], np.linalg.matrix_power(Z, k)[:n, n:]) <= 100 * U

    def test_shape_errors(self):
        with pytest.raises(Exception, match="incompatible"):
            m_sequence(np.eye(2), np.eye(2), np.ones((3, 2)), 2)
        with pytest.raises(ValueError):
            m_sequence(np.eye(2), np.eye(2), np.ones((2, 2)), 5)


def _L_uv(A, B, E, m):
    pa, pb = even_powers(A, m), even_powers(B, m)
    top = 6 if m == 13 else m - 1
    Ms = m_sequence(A, B, E, top, pa, pb)
    return eval_L_uv(A, B, E, m, pa, Ms, uv_parts(B, m, pb))


class TestEvalLUV:
    @pytest.mark.parametrize("m", DEGREES)
    def test_zero_E(self, m, rng):
        Du, Dv = _L_uv(rng.standard_normal((3, 3)), rng.standard_normal((2, 2)), np.zeros((3, 2)), m)
        assert not Du.any() and not Dv.any()

    def test_only_c1_term(self):
        Du, Dv = _L_uv(_scalar(0), _scalar(0), _scalar(1), 3)
        assert Du[0, 0] == 0.5 and Dv[0, 0] == 0

    def test_scalar_m5_against_embedding(self):
        Du, Dv = _L_uv(_scalar(1), _scalar(-1), _scalar(1), 5)
        Ue, Ve = eval_uv(np.array([[1.0, 1.0], [0.0, -1.0]]), 5)
        assert Du[0, 0] == pytest.approx(Ue[0, 1], rel=4 * U)
        assert Dv[0, 0] == pytest.approx(Ve[0, 1], rel=4 * U)

    @pytest.mark.parametrize("m", DEGREES)
    def test_matrix_against_embedding(self, m, rng):
        n, d = 4, 3
        A = 0.5 * rng.standard_normal((n, n))
        B = 0.5 * rng.standard_normal((d, d))
        E = rng.standard_normal((n, d))
        Du, Dv = _L_uv(A, B, E, m)
        Ue, Ve = eval_uv(np.block([[A, E], [np.zeros((d, n)), B]]), m)
        assert rel_inf(Du, Ue[:n, n:]) <= 50 * U
        assert rel_inf(Dv, Ve[:n, n:]) <= 50 * U

    @pytest.mark.parametrize("k", [-200, -3, 0, 5, 200])
    def test_power_of_two_homogeneous(self, k, rng):
        A, B, E = rng.standard_normal((4, 4)), rng.standard_normal((3, 3)), rng.standard_normal((4, 3))
        for m in DEGREES:
            Du, Dv = _L_uv(A, B, E, m)
            Du2, Dv2 = _L_uv(A, B, 2.0**k * E, m)
            assert np.array_equal(Du2, 2.0**k * Du) and np.array_equal(Dv2, 2.0**k * Dv)

    def test_additive(self, rng):
        A, B = rng.standard_normal((4, 4)), rng.standard_normal((3, 3))
        E1, E2 = rng.standard_normal((4, 3)), rng.standard_normal((4, 3))
        for m in DEGREES:
            a, b, c = _L_uv(A, B, E1, m), _L_uv(A, B, E2, m), _L_uv(A, B, E1 + E2, m)
            for i in range(2):
                scale = np.linalg.norm(a[i], np.inf) + np.linalg.norm(b[i], np.inf)
                assert np.linalg.norm(c[i] - a[i] - b[i], np.inf) <= 100 * U * scale


class TestRationalSolve:
    def test_zero_scalars(self):
        X, Y, D = rational_solve(evaluate_scheme(_scalar(0), _scalar(0), _scalar(1), 3))
        assert X[0, 0] == 1 and Y[0, 0] == 1 and D[0, 0] == 1

    def test_sinh(self):
        X, Y, D = rational_solve(evaluate_scheme(_scalar(1), _scalar(-1), _scalar(1), 13))
        assert abs(D[0, 0] - np.sinh(1.0)) <= 1e-15

    def test_left_right_agree(self, rng):
        for _ in range(5):
            A = rng.standard_normal((6, 6))
            B = rng.standard_normal((4, 4))
            A /= np.linalg.norm(A, np.inf)
            B /= np.linalg.norm(B, np.inf)
            E = rng.standard_normal((6, 4))
            sc = evaluate_scheme(A, B, E, 13)
            Dl = rational_solve(sc, "left")[2]
            Dr = rational_solve(sc, "right")[2]
            assert rel_inf(Dl, Dr) <= 100 * U

    def test_one_product_in_solve(self, rng):
        c = MatmulCounter()
        sc = evaluate_scheme(rng.standard_normal((3, 3)), rng.standard_normal((3, 3)),
                             rng.standard_normal((3, 3)), 13)
        rational_solve(sc, counter=c)
        assert c.count == 1

    def test_bad_side(self):
        with pytest.raises(ValueError):
            rational_solve(evaluate_scheme(_scalar(0), _scalar(0), _scalar(1), 3), "middle")

    @settings(deadline=None, max_examples=60)
    @given(st.floats(-1, 1), st.floats(-1, 1))
    def test_divided_difference_law(self, a, b):
        if abs(a - b) < 1e-6:
            return
        m = 13
        X, Y, D = rational_solve(evaluate_scheme(_scalar(a), _scalar(b), _scalar(1), m))
        with mpmath.workdps(40):
            ref = (mpmath.exp(a) - mpmath.exp(b)) / (mpmath.mpf(a) - mpmath.mpf(b))
        assert abs(D[0, 0] - float(ref)) <= 1e-14 * abs(float(ref))


@pytest.mark.parametrize("m", DEGREES)
def test_order_condition(m):
    c = pade_coeffs(m).exact
    with mpmath.workdps(200):
        cm = [mpmath.mpf(x.numerator) / x.denominator for x in c]
        zs = [mpmath.mpf(10) ** -k for k in (1, 2, 3)]
        errs = []
        for z in zs:
            num = mpmath.fsum(ci * z**i for i, ci in enumerate(cm))
            den = mpmath.fsum(ci * (-z) ** i for i, ci in enumerate(cm))
            errs.append(abs(num / den - mpmath.exp(z)))
        slope = np.polyfit([float(mpmath.log10(z)) for z in zs],
                           [float(mpmath.log10(e)) for e in errs], 1)[0]
    assert slope >= 2 * m + 0.8


def test_transpose_symmetry(rng):
    from blocktri_expm.blocktri import expm_block_tri

    for _ in range(5):
        A, B = 0.5 * rng.standard_normal((4, 4)), 0.5 * rng.standard_normal((3, 3))
        E = rng.standard_normal((4, 3))
        D = expm_block_tri(A, B, E).D
        Dt = expm_block_tri(B.T, A.T, E.T).D
        assert rel_inf(Dt, D.T) <= 10 * U


def test_product_rule_polynomial(rng):
    """L_{z^5} = A^3 L_{z^2} + L_{z^3} B^2, checked against the oracle."""
    from blocktri_expm.oracle import block_matrix, rel_error_inf

    for _ in range(5):
        A, B, E = (rng.standard_normal((3, 3)) for _ in range(3))
        M2 = A @ E + E @ B
        M3 = A @ M2 + E @ (B @ B)
        prod = np.linalg.matrix_power(A, 3) @ M2 + M3 @ (B @ B)
        Z = block_matrix(A, B, E, 40)
        Z5 = Z @ Z @ Z @ Z @ Z
        assert rel_error_inf(prod, Z5[:3, 3:]) <= 10 * U
