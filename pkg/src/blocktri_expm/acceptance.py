"""Acceptance checks, shared by ``blocktri-expm validate`` and the test suite.

Each ``criterion_N`` function returns a :class:`CriterionResult`; none of
them raise on a failed check.
"""

import time
import warnings
from dataclasses import dataclass

import gmpy2
import numpy as np
import scipy.stats

from .apps import phi_combination
from .backward_error import ELL_TABLE, derive_ell_theta
from .bench import METHODS, alpha_sweep, error_table, performance_profile, run_bench
from .blocktri import expm_block_tri, select_params, squaring_phase
from .densela import UNIT_ROUNDOFF as U
from .densela import MatmulCounter
from .kenney_laub import kl_frechet, tau_pade_error
from .oracle import BigMatrix, Lexp_ref, block_matrix, expm_ref, phi_ref, rel_error_inf
from .pade import DEGREES


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.title}: {self.detail}"


def criterion_1(count=50, n=10, d=8, tol=1e-13, need=48, seed=1, time_limit=60.0):
    """Oracle agreement of D on random triples, with a runtime limit."""
    t0 = time.perf_counter()
    errs = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        A, B, E = (rng.standard_normal(s) for s in ((n, n), (d, d), (n, d)))
        errs.append(rel_error_inf(expm_block_tri(A, B, E).D, Lexp_ref(A, B, E, 100)))
    elapsed = time.perf_counter() - t0
    good = sum(e <= tol for e in errs)
    return CriterionResult(
        1, "oracle agreement", good >= need and elapsed < time_limit,
        f"{good}/{count} within {tol:g} (max {max(errs):.2e}), {elapsed:.1f} s",
    )


def criterion_2(n=7, d=5, seed=2):
    """Multiplication count 25 + 4s on the full-matrix m = 13 path without Schur."""
    rng = np.random.default_rng(seed)
    out = []
    ok = True
    for s in (1, 2, 3):
        A = rng.standard_normal((n, n))
        B = rng.standard_normal((d, d))
        eta_target = 0.75 * ELL_TABLE.ell[13] * 2.0 ** s
        A *= eta_target / np.linalg.norm(A, np.inf)
        B *= 0.5 * eta_target / np.linalg.norm(B, np.inf)
        E = rng.standard_normal((n, d))
        r = expm_block_tri(A, B, E, schur="never", counter=MatmulCounter())
        ok &= r.m == 13 and r.s == s and r.matmuls == 25 + 4 * s
        out.append(f"s={r.s}: {r.matmuls}")
    return CriterionResult(2, "cost model 25+4s", ok, ", ".join(out))


def criterion_3(target=4.736, rel=0.02):
    """Derived ell_13 near the published value, and ell_m < theta_m for all m."""
    vals = {m: derive_ell_theta(m) for m in DEGREES}
    ell13 = vals[13][0]
    ok = abs(ell13 - target) <= rel * target and all(e < t for e, t in vals.values())
    return CriterionResult(
        3, "backward-error constants", ok,
        f"ell_13 = {ell13:.4f} (2^10 ell_13 = {1024 * ell13:.4g}); ell<theta: "
        + ", ".join(f"m={m}:{e:.4g}<{t:.4g}" for m, (e, t) in vals.items()),
    )


def criterion_4(ref=6.85e-28):
    """tau-Padé error at z = 1/4 within a factor 10 of the published value."""
    g = float(tau_pade_error(0.25))
    return CriterionResult(4, "tau Padé quality", ref / 10 <= g <= ref * 10, f"|g(1/4)| = {g:.4e}")


def criterion_5(n=8, seed=0, tol=1e-13, gap=1e6):
    """Alpha sweep: constant alg41 and KL columns, degrading block-embedding column."""
    rows = alpha_sweep(n=n, seed=seed)
    col = {m: [r.errors[m] for r in rows] for m in METHODS}
    a = col["alg41"]
    alg_const = all(x == a[0] for x in a) and a[0] <= tol
    kl_const = all(x == col["kl"][0] for x in col["kl"])
    blk = col["block"]
    blk_ok = len(set(blk)) > 1 and blk[-1] >= gap * a[-1]
    detail = (f"alg41 {a[0]:.3e} (constant={alg_const}), kl {col['kl'][0]:.3e} "
              f"(constant={kl_const}), block " + " ".join(f"{x:.1e}" for x in blk))
    return CriterionResult(5, "alpha sweep", alg_const and kl_const and blk_ok, detail)


def criterion_6(count=20, n=6, d=5, seed=6):
    """Bitwise linearity under E -> 2^k E for alg41 and KL."""
    scales = (0.1, 1.0, 10.0, 100.0, 1000.0)
    fails = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        c = scales[i % len(scales)]
        A, B = c * rng.standard_normal((n, n)), c * rng.standard_normal((d, d))
        if c > 100:
            # large but skew-symmetric, so the Schur path runs without overflow
            A, B = (A - A.T) / 2, (B - B.T) / 2
        E = rng.standard_normal((n, d))
        base = {"alg41": expm_block_tri(A, B, E).D, "kl": kl_frechet(A, B, E).D}
        for k in (-200, 0, 200):
            f = 2.0 ** k
            got = {"alg41": expm_block_tri(A, B, f * E).D, "kl": kl_frechet(A, B, f * E).D}
            for m in got:
                if not np.array_equal(got[m], f * base[m]):
                    fails.append(f"{m} triple {i} k={k}")
    return CriterionResult(
        6, "power-of-two linearity", not fails,
        f"{count} triples x 3 k x 2 methods bitwise" if not fails else "; ".join(fails[:5]),
    )


def criterion_7(count=20, n=6, d=4, seed=7):
    """(m, s) does not depend on E."""
    bad = 0
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        c = 10.0 ** rng.uniform(-3, 4)
        A, B = c * rng.standard_normal((n, n)), c * rng.standard_normal((d, d))
        E = rng.standard_normal((n, d))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)  # large c may overflow; only (m, s) matter
            ms = {(r.m, r.s) for r in (expm_block_tri(A, B, f * E) for f in (1.0, 1e10, 1e-10))}
        direct = select_params(np.linalg.norm(A, np.inf), np.linalg.norm(B, np.inf))
        bad += len(ms) != 1 or ms.pop() != direct
    return CriterionResult(7, "selection independent of E", bad == 0, f"{count - bad}/{count} unchanged")


def _vec_rel(x, ref):
    return float(np.max(np.abs(x - ref)) / np.max(np.abs(ref)))


def _phi_oracle(A, ws, digits=100):
    acc = None
    for j, w in enumerate(ws):
        term = phi_ref(A, j, digits) @ BigMatrix.from_array(np.asarray(w).reshape(-1, 1), digits)
        acc = term if acc is None else acc + term
    return acc


def criterion_8(seed=8, tol=1e-13):
    """phi-function linear combinations against the oracle."""
    rng = np.random.default_rng(seed)
    errs = {}
    cases = {
        "scalar phi_1(1)": (np.array([[1.0]]), [[0.0], [1.0]]),
        "scalar p=3": (np.array([[0.7]]), [[0.3], [-1.2], [2.0], [0.5]]),
        "5x5 p=3": (rng.standard_normal((5, 5)), [rng.standard_normal(5) for _ in range(4)]),
    }
    for name, (A, ws) in cases.items():
        ref = _phi_oracle(A, ws)
        errs[name] = rel_error_inf(phi_combination(A, ws).reshape(-1, 1), ref)
    w = [rng.standard_normal(4) for _ in range(3)]
    got = phi_combination(np.zeros((4, 4)), w)
    expected = w[0] + w[1] + w[2] / 2
    zero_err = _vec_rel(got, expected)
    ok = all(e <= tol for e in errs.values()) and zero_err <= 4 * U
    detail = ", ".join(f"{k}: {v:.1e}" for k, v in errs.items()) + f", A=0 p=2: {zero_err:.1e}"
    return CriterionResult(8, "phi combination", ok, detail)


def _oracle_block(F, n):
    return F[:n, n:]


def criterion_9(count=5, n=3, seed=9):
    """Sum, product, chain, similarity and Fréchet-derivative identities at 100u."""
    tol = 100 * U
    worst = {k: 0.0 for k in ("sum", "product", "chain", "similarity", "frechet")}
    digits = 60
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        A, B, E = (rng.standard_normal((n, n)) for _ in range(3))
        Z = block_matrix(A, B, E, digits)
        expZ = expm_ref(Z, digits)
        Z2 = Z @ Z
        r = expm_block_tri(A, B, E)
        M2 = A @ E + E @ B
        # sum rule with g(z) = z^3: L_{exp+g} = L_exp + L_g
        Lg = A @ M2 + E @ (B @ B)
        worst["sum"] = max(worst["sum"], rel_error_inf(r.D + Lg, _oracle_block(expZ + Z2 @ Z, n)))
        # product rule with g(z) = z^2: L_{exp*g} = e^A L_g + L_exp g(B)
        prod = r.X @ M2 + r.D @ (B @ B)
        worst["product"] = max(worst["product"], rel_error_inf(prod, _oracle_block(expZ @ Z2, n)))
        # chain rule: z^4 = (z^2)^2 through two squaring steps
        _, _, D4 = squaring_phase(A, B, E, 2)
        worst["chain"] = max(worst["chain"], rel_error_inf(D4, _oracle_block(Z2 @ Z2, n)))
        # similarity with random orthogonal P1, P2
        P1 = scipy.stats.ortho_group.rvs(n, random_state=rng)
        P2 = scipy.stats.ortho_group.rvs(n, random_state=rng)
        rs = expm_block_tri(P1.T @ A @ P1, P2.T @ B @ P2, P1.T @ E @ P2)
        worst["similarity"] = max(worst["similarity"],
                                  rel_error_inf(P1 @ rs.D @ P2.T, _oracle_block(expZ, n)))
        # L_exp(A, A, E) is the Fréchet derivative: central difference at high precision
        with gmpy2.context(gmpy2.get_context(), precision=400):
            h = gmpy2.mpfr(10) ** -30
        Ab = BigMatrix.from_array(A, digits)
        Eb = BigMatrix.from_array(E, digits) * h
        fd = (expm_ref(Ab + Eb, digits) - expm_ref(Ab - Eb, digits)) / (2 * h)
        worst["frechet"] = max(worst["frechet"], rel_error_inf(expm_block_tri(A, A, E).D, fd))
    ok = all(v <= tol for v in worst.values())
    return CriterionResult(
        9, "operator identities", ok,
        ", ".join(f"{k} {v / U:.1f}u" for k, v in worst.items()) + " (limit 100u)",
    )


def criterion_10(count=40, n=10, d=8, seed=10, factor=2.0, need=0.7):
    """Bench comparison: alg41 near-best on most problems and dominating KL."""
    records = run_bench(count, n, d, seed=seed)
    errs, methods = error_table(records, METHODS)
    alphas, p = performance_profile(errs)
    ia, ik = methods.index("alg41"), methods.index("kl")
    frac = float(np.mean(np.maximum(errs[:, ia], U) <= factor * np.maximum(errs, U).min(axis=1)))
    dominates = bool(np.all(p[:, ia] >= p[:, ik]))
    i2 = int(np.argmin(np.abs(alphas - 2.0)))
    return CriterionResult(
        10, "comparative accuracy", frac >= need and dominates,
        f"alg41 within {factor:g}x of best on {100 * frac:.0f}%; profile at alpha=2: "
        + ", ".join(f"{m} {p[i2, j]:.2f}" for j, m in enumerate(methods))
        + f"; alg41 >= kl at all alpha: {dominates}",
    )


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all(only=None):
    """Run all criteria (or those numbered in `only`) and return the results."""
    out = []
    for i, fn in enumerate(CRITERIA, start=1):
        if only and i not in only:
            continue
        out.append(fn())
    return out


__all__ = ["CriterionResult", "CRITERIA", "run_all", *(f"criterion_{i}" for i in range(1, 11))]
