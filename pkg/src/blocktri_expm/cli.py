"""Command-line interface: ``blocktri-expm <command> ...``.

Exit status: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.
"""

import argparse
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import bench
from .backward_error import derive_ell_theta
from .blocktri import block_embed, expm_block_tri
from .exceptions import BlockExpmError, DimensionError
from .kenney_laub import kl_frechet
from .matrix_io import MatrixFileError, read_matrix, write_matrix
from .oracle import block_matrix, expm_ref
from .pade import DEGREES
from .testmats import KINDS, gen_testmat

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _write_diagnostics(path, items):
    with open(path, "w") as fh:
        for k, v in items.items():
            fh.write(f"{k}={v}\n")


def cmd_compute(args):
    A, B, E = (read_matrix(p) for p in (args.A, args.B, args.E))
    t0 = time.perf_counter()
    diag = {"method": args.method, "n": A.shape[0], "d": B.shape[0]}
    X = Y = None
    if args.method == "alg41":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            r = expm_block_tri(A, B, E, schur=args.force_schur)
        X, Y, D = r.X, r.Y, r.D
        diag.update(m=r.m, s=r.s, matmuls=r.matmuls, used_schur=int(r.used_schur),
                    overflow=int(r.overflow))
    elif args.method == "kl":
        r = kl_frechet(A, B, E)
        D = r.D
        diag.update(s=r.s, imag_residual=repr(r.imag_residual))
    elif args.method == "block":
        with np.errstate(all="ignore"):
            X, Y, D = block_embed(A, B, E)
    else:  # oracle
        n = A.shape[0]
        F = expm_ref(block_matrix(A, B, E, args.digits), args.digits)
        X, Y, D = F[:n, :n].to_array(), F[n:, n:].to_array(), F[:n, n:].to_array()
        diag["digits"] = args.digits
    diag["seconds"] = f"{time.perf_counter() - t0:.6f}"
    out = args.out
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    for name, M in (("X", X), ("Y", Y), ("D", D)):
        if M is not None:
            write_matrix(f"{out}_{name}.mtx", M)
    _write_diagnostics(f"{out}_diag.txt", diag)
    if not all(np.all(np.isfinite(M)) for M in (X, Y, D) if M is not None):
        print("error: result contains non-finite entries (overflow)", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_bench(args):
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in bench.METHODS:
            raise _UsageError(f"unknown method {m!r}; expected a subset of {','.join(bench.METHODS)}")
    records = bench.run_bench(args.count, args.nA, args.nB, seed=args.seed, methods=methods,
                              oracle_digits=args.oracle_digits)
    errs, methods = bench.error_table(records, methods)
    alphas, p = bench.performance_profile(errs)
    bench.write_records(f"{args.out}_records.csv", records)
    bench.write_timings(f"{args.out}_timings.csv", records)
    bench.write_profile(f"{args.out}_profile.csv", alphas, p, methods)
    i2 = int(np.argmin(np.abs(alphas - 2.0)))
    for j, m in enumerate(methods):
        print(f"{m:>6}: median error {np.median(errs[:, j]):.3e}, p(1)={p[0, j]:.2f}, "
              f"p(2)={p[i2, j]:.2f}, p(64)={p[-1, j]:.2f}")
    return EXIT_OK


def cmd_alpha_sweep(args):
    rows = bench.alpha_sweep(n=args.n, seed=args.seed, oracle_digits=args.oracle_digits)
    table = bench.format_alpha_table(rows)
    if args.out:
        Path(args.out).write_text(table)
    sys.stdout.write(table)
    return EXIT_OK


def cmd_gen(args):
    if args.n < 1:
        raise _UsageError("n must be at least 1")
    M = gen_testmat(args.kind, args.n, args.seed)
    if args.kind == "hamiltonian-pair":
        write_matrix(f"{args.out}_T.mtx", M[0])
        write_matrix(f"{args.out}_H.mtx", M[1])
    else:
        write_matrix(args.out, M)
    return EXIT_OK


def cmd_derive_constants(args):
    print(f"{'m':>3} {'ell_m':>24} {'theta_m':>24}")
    for m in DEGREES:
        ell, theta = derive_ell_theta(m, precision_digits=args.digits)
        print(f"{m:>3} {ell!r:>24} {theta!r:>24}")
    return EXIT_OK


def cmd_validate(args):
    from .acceptance import run_all

    only = {int(x) for x in args.only.split(",")} if args.only else None
    ok = True
    for res in run_all(only):
        print(res.line(), flush=True)
        ok &= res.passed
    return EXIT_OK if ok else EXIT_NUMERICAL


def build_parser():
    p = _Parser(prog="blocktri-expm",
                description="Exponential of block triangular matrices and its off-diagonal block.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="compute X, Y, D for matrices read from files")
    c.add_argument("--A", required=True)
    c.add_argument("--B", required=True)
    c.add_argument("--E", required=True)
    c.add_argument("--method", choices=("alg41", "kl", "block", "oracle"), default="alg41")
    c.add_argument("--out", required=True, help="output prefix")
    c.add_argument("--force-schur", choices=("auto", "always", "never"), default="auto")
    c.add_argument("--digits", type=int, default=100, help="precision for --method oracle")
    c.set_defaults(func=cmd_compute)

    b = sub.add_parser("bench", help="accuracy benchmark on random triples")
    b.add_argument("--count", type=int, default=40)
    b.add_argument("--nA", type=int, default=10)
    b.add_argument("--nB", type=int, default=8)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--methods", default=",".join(bench.METHODS))
    b.add_argument("--oracle-digits", type=int, default=100)
    b.add_argument("--out", default="bench", help="output prefix")
    b.set_defaults(func=cmd_bench)

    a = sub.add_parser("alpha-sweep", help="errors for E scaled by 2^t, t = -600..600")
    a.add_argument("--n", type=int, default=8)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--oracle-digits", type=int, default=100)
    a.add_argument("--out")
    a.set_defaults(func=cmd_alpha_sweep)

    g = sub.add_parser("gen", help="write a test matrix")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("derive-constants", help="recompute the degree-selection thresholds")
    d.add_argument("--digits", type=int, default=100)
    d.set_defaults(func=cmd_derive_constants)

    v = sub.add_parser("validate", help="run the acceptance checks")
    v.add_argument("--only", help="comma-separated criterion numbers")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (MatrixFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BlockExpmError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
