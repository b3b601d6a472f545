"""Command-line front end.

Subcommands: ``sample`` writes matrix draws to a file, ``density`` evaluates
log kernels for matrices read from a file, ``opcount`` prints the kernel-call
table for all parameterization/algorithm combinations and verifies it against
the embedded expectations, ``validate`` runs the statistical check suite and
emits an NDJSON report, and ``bench`` times the two inverse-Wishart
algorithms side by side.

Exit codes: 0 success, 2 invalid arguments or inputs, 3 I/O failure,
4 numerical failure (for example a scale matrix that is not positive
definite).
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import matio, suite
from .densities import (
    logkernel_cholinvwishart,
    logkernel_cholwishart,
    logkernel_invwishart,
    logkernel_wishart,
)
from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NotPositiveDefinite,
    NumericalFailure,
    SingularMatrix,
    TriwishError,
)
from .linalg import OpCounter, gram_ut
from .rng import RngStream
from .samplers import (
    AUTO,
    SamplerSpec,
    ScaleParam,
    cholesky_upper_param,
    recommend_algorithm,
    sample_invwishart,
)

_FLAG = {False: "0", True: "1"}


def _add_scale_flags(p):
    p.add_argument("--scale", required=True, help="matrix file holding the scale parameter")
    p.add_argument(
        "--iscov",
        action="store_true",
        help="scale is a covariance (default: precision)",
    )
    p.add_argument(
        "--ischolu",
        action="store_true",
        help="scale file holds an upper Cholesky factor instead of the full matrix",
    )


def _add_out_flags(p, default_format="csv"):
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument(
        "--format", choices=("csv", "ndjson"), default=default_format, help="output format"
    )


def _load_scale(args, m=None):
    kind, matrix = matio.read_single_matrix(args.scale)
    ischolu = args.ischolu or kind == matio.KIND_CHOLU
    scale = ScaleParam(matrix, iscov=args.iscov, ischolu=ischolu)
    if m is not None and m != scale.dim:
        raise DimensionMismatch(f"--m {m} does not match the {scale.dim}x{scale.dim} scale matrix")
    return scale


def cmd_sample(args):
    scale = _load_scale(args, args.m)
    spec = SamplerSpec(scale.dim, args.n, scale, retcholu=args.retcholu)
    if args.square and not args.retcholu:
        raise InvalidParameter("--square only applies with --retcholu")
    algorithm = args.algorithm
    if algorithm == AUTO:
        algorithm = recommend_algorithm(scale)
    rng = RngStream(args.seed)
    mats = []
    counter = None
    for _ in range(args.nsamples):
        counter = OpCounter()
        draw = sample_invwishart(rng, spec, algorithm, counter=counter)
        if args.square:
            draw = gram_ut(draw)
        mats.append(draw)
    factor_out = args.retcholu and not args.square
    kind = matio.KIND_CHOLU if factor_out else matio.KIND_SQUARE
    header = [
        "triwish sample",
        "m={} n={} iscov={} ischolu={} retcholu={} square={}".format(
            spec.m,
            repr(float(spec.n)),
            _FLAG[scale.iscov],
            _FLAG[scale.ischolu],
            _FLAG[spec.retcholu],
            _FLAG[args.square],
        ),
        f"algorithm={algorithm} requested={args.algorithm}",
        f"seed={args.seed} nsamples={args.nsamples} format={args.format}",
        "opcount potrf={} trtri={} trmm={}".format(counter.potrf, counter.trtri, counter.trmm),
    ]
    matio.write_matrices(args.out, mats, kinds=kind, header=header, fmt=args.format)
    if args.out != "-":
        print(f"wrote {args.nsamples} draw(s) to {args.out} [algorithm={algorithm}]")
    return 0


_KERNELS = {
    "wishart": (logkernel_wishart, False),
    "invwishart": (logkernel_invwishart, True),
    "cholwishart": (logkernel_cholwishart, False),
    "cholinvwishart": (logkernel_cholinvwishart, True),
}


def cmd_density(args):
    kernel, wants_omega = _KERNELS[args.kind]
    scale = _load_scale(args)
    # The kernels take the factor of Sigma (Wishart) or Omega (inverse-Wishart);
    # invert when the provided scale lives on the other side.
    invert = args.iscov if wants_omega else not args.iscov
    factor = cholesky_upper_param(scale, invert=invert)
    _, blocks = matio.read_matrices(args.matrices)
    values = []
    for kind, mat in blocks:
        if mat.shape[0] != scale.dim:
            raise DimensionMismatch(
                f"matrix block is {mat.shape[0]}x{mat.shape[0]}, scale is {scale.dim}x{scale.dim}"
            )
        values.append(float(kernel(mat, args.n, factor)))
    buf = io.StringIO()
    if args.format == "ndjson":
        for i, v in enumerate(values):
            buf.write(json.dumps({"index": i, "kind": args.kind, "n": args.n, "logkernel": v}) + "\n")
    else:
        buf.write("index,logkernel\n")
        for i, v in enumerate(values):
            buf.write(f"{i},{matio.format_float(v)}\n")
    _write_text(args.out, buf.getvalue())
    return 0


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _opcount_cell(full, chol):
    return str(full) if full == chol else f"{full}({chol})"


def cmd_opcount(args):
    del args
    from .samplers import DIRECT, EXPECTED_OP_COUNTS, INDIRECT

    rng = RngStream(0)
    diag = np.array([1.0, 2.0, 0.5, 1.5])
    bases = {
        "cov": ScaleParam(np.diag(diag), iscov=True),
        "cov_chol": ScaleParam(np.diag(np.sqrt(diag)), iscov=True, ischolu=True),
        "prec": ScaleParam(np.diag(diag), iscov=False),
        "prec_chol": ScaleParam(np.diag(np.sqrt(diag)), iscov=False, ischolu=True),
    }
    measured = {}
    matches = 0
    for (kind, algorithm, retcholu), expected in EXPECTED_OP_COUNTS.items():
        spec = SamplerSpec(4, 7.5, bases[kind], retcholu=retcholu)
        counter = OpCounter()
        sample_invwishart(rng, spec, algorithm, counter=counter)
        measured[(kind, algorithm, retcholu)] = counter
        if counter == expected:
            matches += 1
    print(f"{'param':<10} {'algorithm':<10} {'TRTRI':<7} {'TRMM':<7} {'POTRF':<7}")
    for kind in ("cov", "cov_chol", "prec", "prec_chol"):
        for algorithm in (INDIRECT, DIRECT):
            full = measured[(kind, algorithm, False)]
            chol = measured[(kind, algorithm, True)]
            print(
                f"{kind:<10} {algorithm:<10} "
                f"{_opcount_cell(full.trtri, chol.trtri):<7} "
                f"{_opcount_cell(full.trmm, chol.trmm):<7} "
                f"{_opcount_cell(full.potrf, chol.potrf):<7}"
            )
    total = len(EXPECTED_OP_COUNTS)
    verdict = "MATCH" if matches == total else "MISMATCH"
    print(f"verdict: {verdict} {matches}/{total}")
    return 0 if matches == total else 1


def cmd_validate(args):
    records = suite.run_checks(seed=args.seed, only=args.only, jobs=args.jobs)
    if not records:
        raise InvalidParameter(f"--only {args.only!r} matched no checks")
    buf = io.StringIO()
    if args.format == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "params", "statistic", "threshold", "pass", "seed"])
        for rec in records:
            d = rec.to_dict()
            writer.writerow(
                [d["check"], json.dumps(d["params"]), d["statistic"], d["threshold"],
                 d["pass"], d["seed"]]
            )
    else:
        for rec in records:
            buf.write(json.dumps(rec.to_dict()) + "\n")
    _write_text(args.out, buf.getvalue())
    failed = [rec for rec in records if not rec.passed]
    print(
        f"{len(records)} record(s), {len(failed)} failed",
        file=sys.stderr,
    )
    for rec in failed:
        print(f"FAIL {rec.check} statistic={rec.statistic!r}", file=sys.stderr)
    return 0 if not failed else 1


def cmd_bench(args):
    from .samplers import DIRECT, INDIRECT

    reps = max(args.reps, 1)
    sizes = args.m or [200]
    for m in sizes:
        if m < 1:
            raise InvalidParameter("--m must be a positive integer")
        n = float(m + 2)
        values = np.linspace(0.5, 2.0, m)
        matrix = np.diag(np.sqrt(values)) if args.ischolu else np.diag(values)
        scale = ScaleParam(matrix, iscov=args.iscov, ischolu=args.ischolu)
        med_ind, med_dir, counts = suite.bench_pair(
            scale, m, n, args.retcholu, args.seed, reps=reps
        )
        print(
            f"m={m} n={n:g} scale={scale.kind()} retcholu={_FLAG[args.retcholu]} "
            f"reps={reps} warmup=5"
        )
        print(f"{'algorithm':<10} {'median_ms':<12} {'TRTRI':<6} {'TRMM':<6} {'POTRF':<6}")
        for name, med in ((INDIRECT, med_ind), (DIRECT, med_dir)):
            c = counts[name]
            print(
                f"{name:<10} {med * 1e3:<12.3f} {c.trtri:<6} {c.trmm:<6} {c.potrf:<6}"
            )
        ratio_ops = counts[DIRECT].total() / max(counts[INDIRECT].total(), 1)
        print(
            f"ratios direct/indirect: ops={ratio_ops:.2f} time={med_dir / med_ind:.3f}"
        )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="triwish",
        description="Wishart and inverse-Wishart sampling on the Cholesky scale.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sample", help="draw matrices and write them to a file")
    p.add_argument("--m", type=int, default=None, help="dimension (default: from scale file)")
    p.add_argument("--n", type=float, required=True, help="degrees of freedom (real, > m-1)")
    _add_scale_flags(p)
    p.add_argument("--retcholu", action="store_true", help="emit upper Cholesky factors")
    p.add_argument(
        "--algorithm", choices=("indirect", "direct", "auto"), default="auto",
        help="inverse-Wishart sampling route (auto picks by parameterization)",
    )
    p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    p.add_argument("--nsamples", type=int, default=1, help="number of draws")
    p.add_argument(
        "--square",
        action="store_true",
        help="with --retcholu: write U^T U instead of the factor U",
    )
    _add_out_flags(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("density", help="evaluate log-density kernels for stored matrices")
    p.add_argument("kind", choices=sorted(_KERNELS), help="which log kernel to evaluate")
    p.add_argument("matrices", help="matrix file with the evaluation points")
    p.add_argument("--n", type=float, required=True, help="degrees of freedom")
    _add_scale_flags(p)
    _add_out_flags(p, default_format="ndjson")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("opcount", help="print the kernel-call table and verify it")
    p.set_defaults(func=cmd_opcount)

    p = sub.add_parser("validate", help="run the statistical validation suite")
    p.add_argument("--seed", type=int, default=suite.DEFAULT_SEED, help="64-bit RNG seed")
    p.add_argument("--only", default=None, help="comma-separated substring filter on check names")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for the checks")
    _add_out_flags(p, default_format="ndjson")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="time both inverse-Wishart algorithms")
    p.add_argument(
        "--m", type=int, action="append", help="dimension (repeatable; default 200)"
    )
    p.add_argument("--reps", type=int, default=25, help="timed repetitions (median reported)")
    p.add_argument("--iscov", action="store_true", help="benchmark a covariance scale")
    p.add_argument(
        "--ischolu", action="store_true", help="benchmark a Cholesky-factor scale"
    )
    p.add_argument("--retcholu", action="store_true", help="benchmark factor output")
    p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (NotPositiveDefinite, SingularMatrix, NumericalFailure) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except TriwishError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
