"""Benchmark harness: random-triple accuracy runs, performance profiles and
the alpha sweep on a Hamiltonian problem.

Errors are relative inf-norm errors of the (1,2) block against the
arbitrary-precision oracle. A method that raises, or that returns non-finite
entries, is charged an infinite error.
"""

import csv
import math
import time
from dataclasses import dataclass

import numpy as np

from .blocktri import block_embed, expm_block_tri
from .densela import UNIT_ROUNDOFF, MatmulCounter
from .kenney_laub import kl_frechet
from .oracle import Lexp_ref, rel_error_inf
from .testmats import gen_testmat

METHODS = ("alg41", "kl", "block")
RECORD_FIELDS = ("problem", "method", "n", "d", "rel_error", "matmuls", "m", "s", "status")
ALPHA_TK = tuple(200 * (k - 3) for k in range(7))


def profile_grid(points_per_octave=4, top=64.0):
    """Log-spaced grid ``2^(j/points_per_octave)`` covering ``[1, top]``."""
    steps = int(round(math.log2(top) * points_per_octave))
    return np.array([2.0 ** (j / points_per_octave) for j in range(steps + 1)])


@dataclass
class BenchRecord:
    problem: int
    method: str
    n: int
    d: int
    rel_error: float
    matmuls: int = -1
    m: int = -1
    s: int = -1
    status: str = "ok"
    wall_time: float = 0.0

    def row(self):
        return [self.problem, self.method, self.n, self.d, repr(float(self.rel_error)),
                self.matmuls, self.m, self.s, self.status]


def run_method(method, A, B, E):
    """Run one method; returns ``(D, diagnostics dict)``."""
    if method == "alg41":
        counter = MatmulCounter()
        r = expm_block_tri(A, B, E, counter=counter)
        return r.D, {"matmuls": r.matmuls, "m": r.m, "s": r.s}
    if method == "kl":
        r = kl_frechet(A, B, E)
        return r.D, {"s": r.s}
    if method == "block":
        with np.errstate(all="ignore"):
            return block_embed(A, B, E)[2], {}
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def _error(D, ref):
    if not np.all(np.isfinite(D)):
        return math.inf
    return rel_error_inf(D, ref)


def random_triple(problem, n, d, seed):
    """Standard normal triple for problem index `problem`; independent of other problems."""
    rng = np.random.default_rng([seed, problem])
    return (rng.standard_normal((n, n)), rng.standard_normal((d, d)),
            rng.standard_normal((n, d)))


def run_bench(count, n, d, seed=0, methods=METHODS, oracle_digits=100):
    """Run every method on `count` seeded random triples.

    Returns
    -------
    list of BenchRecord
        Ordered by problem, then by the order of `methods`.
    """
    records = []
    for p in range(count):
        A, B, E = random_triple(p, n, d, seed)
        ref = Lexp_ref(A, B, E, oracle_digits)
        for method in methods:
            t0 = time.perf_counter()
            try:
                D, diag = run_method(method, A, B, E)
                rec = BenchRecord(p, method, n, d, _error(D, ref), **diag)
                if not math.isfinite(rec.rel_error):
                    rec.status = "nonfinite"
            except Exception as exc:  # a failing method is recorded, not fatal
                rec = BenchRecord(p, method, n, d, math.inf, status=f"fail:{type(exc).__name__}")
            rec.wall_time = time.perf_counter() - t0
            records.append(rec)
    return records


def error_table(records, methods=None):
    """Matrix of errors, problems by methods."""
    methods = list(methods or dict.fromkeys(r.method for r in records))
    problems = sorted({r.problem for r in records})
    pidx = {p: i for i, p in enumerate(problems)}
    errs = np.full((len(problems), len(methods)), np.inf)
    for r in records:
        errs[pidx[r.problem], methods.index(r.method)] = r.rel_error
    return errs, methods


def performance_profile(errors, alphas=None, floor=UNIT_ROUNDOFF):
    """Fraction of problems on which each method is within a factor alpha of the best.

    Parameters
    ----------
    errors : (P, M) array_like
        Error of method j on problem i.
    alphas : array_like, optional
        Defaults to :func:`profile_grid`.
    floor : float
        Errors are raised to at least this value first, so that differences
        below the unit roundoff do not count.

    Returns
    -------
    alphas : ndarray
    p : ndarray of shape (len(alphas), M)
    """
    errors = np.maximum(np.asarray(errors, dtype=float), floor)
    alphas = profile_grid() if alphas is None else np.asarray(alphas, dtype=float)
    best = errors.min(axis=1, keepdims=True)
    p = np.array([(errors <= a * best).mean(axis=0) for a in alphas])
    return alphas, p


def write_records(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_FIELDS)
        for r in records:
            w.writerow(r.row())


def write_timings(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("problem", "method", "wall_time"))
        for r in records:
            w.writerow((r.problem, r.method, f"{r.wall_time:.6f}"))


def write_profile(path, alphas, p, methods):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("alpha", *methods))
        for a, row in zip(alphas, p):
            w.writerow((repr(float(a)), *(repr(float(x)) for x in row)))


@dataclass
class AlphaSweepRow:
    t: int
    errors: dict


def alpha_sweep(n=8, seed=0, methods=METHODS, oracle_digits=100, tks=ALPHA_TK):
    """Relative errors of the (1,2) block of ``exp([[T, 2^t H], [0, -T^T]])``.

    ``(T, H)`` is the 'hamiltonian-pair' test problem. The oracle is evaluated
    once for t = 0 and scaled exactly by ``2^t`` (the block is linear in H).
    """
    T, H = gen_testmat("hamiltonian-pair", n, seed)
    ref = Lexp_ref(T, -T.T, H, oracle_digits)
    rows = []
    for t in tks:
        alpha = 2.0 ** t
        ref_t = ref * alpha
        errs = {}
        for method in methods:
            try:
                D, _ = run_method(method, T, -T.T, alpha * H)
                errs[method] = _error(D, ref_t)
            except Exception:
                errs[method] = math.inf
        rows.append(AlphaSweepRow(t, errs))
    return rows


def format_alpha_table(rows, methods=METHODS):
    lines = ["t_k " + " ".join(f"{m:>12}" for m in methods)]
    for r in rows:
        lines.append(f"{r.t:4d} " + " ".join(f"{r.errors[m]:12.3e}" for m in methods))
    return "\n".join(lines) + "\n"
