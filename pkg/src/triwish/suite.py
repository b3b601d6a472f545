"""Registry of self-contained validation checks.

Each check draws what it needs from its own deterministic stream, compares a
statistic against a fixed threshold, and reports one record per assertion:
``{check, params, statistic, threshold, pass, seed}``.  The registry drives
the ``validate`` subcommand and the acceptance tests; ``run_checks`` filters
by substring and can fan checks out over worker threads while keeping the
output order fixed.
"""

import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .densities import (
    logjac_chol,
    logjac_tri_inverse,
    logkernel_cholinvwishart,
    logkernel_cholwishart,
    logkernel_invwishart,
    logkernel_wishart,
)
from .errors import InvalidDegreesOfFreedom, MeanUndefined
from .linalg import OpCounter, gram_ut, log_det_tri, tri_inverse, tri_mul
from .rng import RngStream
from .samplers import (
    DIRECT,
    EXPECTED_OP_COUNTS,
    INDIRECT,
    SamplerSpec,
    ScaleParam,
    cholesky_upper_param,
    draw_bartlett_invwishart,
    draw_bartlett_wishart,
    rinvwishart_chol,
    rwishart,
    rwishart_chol,
    sample_invwishart,
)
from .validation import (
    chi_square_cdf,
    fd_logdet_jacobian,
    ks_one_sample,
    ks_two_sample,
    mc_mean_invwishart,
    mc_mean_wishart,
    normal_cdf,
    rwishart_outer_oracle,
)

DEFAULT_SEED = 424242
ALPHA = 0.001

# Fixed scale matrices used across checks (all strictly diagonally dominant,
# hence symmetric positive definite).
SIGMA_2 = np.array([[2.0, 0.6], [0.6, 1.0]])
SIGMA_3 = np.array([[2.0, 0.5, 0.2], [0.5, 1.5, 0.3], [0.2, 0.3, 1.0]])
SPD_4 = np.array(
    [
        [1.0, 0.1, 0.1, 0.1],
        [0.1, 2.0, 0.1, 0.1],
        [0.1, 0.1, 0.5, 0.1],
        [0.1, 0.1, 0.1, 1.5],
    ]
)


@dataclass
class CheckRecord:
    check: str
    params: dict
    statistic: float
    threshold: float
    passed: bool
    seed: int

    def to_dict(self):
        return {
            "check": self.check,
            "params": self.params,
            "statistic": float(self.statistic),
            "threshold": float(self.threshold),
            "pass": bool(self.passed),
            "seed": int(self.seed),
        }


def _ks_record(check, params, seed, result, threshold):
    return CheckRecord(check, params, result.pvalue, threshold, result.pvalue >= threshold, seed)


# ---------------------------------------------------------------------------
# operation counts


def check_opcount(seed):
    """Every (parameterization, algorithm, retcholU) op count matches the table."""
    rng = RngStream(seed, 1)
    diag = np.array([1.0, 2.0, 0.5, 1.5])
    bases = {
        "cov": ScaleParam(np.diag(diag), iscov=True),
        "cov_chol": ScaleParam(np.diag(np.sqrt(diag)), iscov=True, ischolu=True),
        "prec": ScaleParam(np.diag(diag), iscov=False),
        "prec_chol": ScaleParam(np.diag(np.sqrt(diag)), iscov=False, ischolu=True),
    }
    matches = 0
    for (kind, algorithm, retcholu), expected in EXPECTED_OP_COUNTS.items():
        spec = SamplerSpec(4, 7.5, bases[kind], retcholu=retcholu)
        counter = OpCounter()
        sample_invwishart(rng, spec, algorithm, counter=counter)
        if counter == expected:
            matches += 1
    total = len(EXPECTED_OP_COUNTS)
    return [
        CheckRecord(
            "opcount.table",
            {"m": 4, "n": 7.5, "combinations": total},
            float(matches),
            float(total),
            matches == total,
            seed,
        )
    ]


# ---------------------------------------------------------------------------
# triangular-fill marginals and the outer-product oracle


def _fill_marginals(check_prefix, seed, stream, draw_fn, diag_df, m, n, nsamples):
    rng = RngStream(seed, stream)
    diags = np.empty((nsamples, m))
    offdiags = np.empty((nsamples, m * (m - 1) // 2))
    iu = np.triu_indices(m, k=1)
    for i in range(nsamples):
        z = draw_fn(rng, m, n)
        diags[i] = np.diag(z)
        offdiags[i] = z[iu]
    records = []
    for j in range(1, m + 1):
        df = diag_df(j)
        res = ks_one_sample(diags[:, j - 1] ** 2, lambda x, d=df: chi_square_cdf(x, d))
        records.append(
            _ks_record(
                f"{check_prefix}.diag",
                {"j": j, "df": df, "m": m, "n": n, "nsamples": nsamples},
                seed,
                res,
                ALPHA / m,
            )
        )
    res = ks_one_sample(offdiags.ravel(), normal_cdf)
    records.append(
        _ks_record(
            f"{check_prefix}.offdiag",
            {"m": m, "n": n, "nsamples": nsamples},
            seed,
            res,
            ALPHA,
        )
    )
    return records


def check_bartlett_wishart(seed):
    """Wishart fill: z_jj^2 is chi-square(n+1-j), off-diagonals are N(0,1)."""
    m, n, nsamples = 5, 10, 50_000
    return _fill_marginals(
        "bartlett.wishart", seed, 2, draw_bartlett_wishart, lambda j: n + 1 - j, m, n, nsamples
    )


def check_bartlett_invwishart(seed):
    """Inverse-Wishart fill: z_jj^2 is chi-square(n-m+j), off-diagonals N(0,1)."""
    m, n, nsamples = 5, 10, 50_000
    return _fill_marginals(
        "bartlett.invwishart", seed, 5, draw_bartlett_invwishart, lambda j: n - m + j, m, n, nsamples
    )


def check_wishart_outer(seed):
    """Triangular-fill Wishart draws match the n-column outer-product construction."""
    m, n, nsamples = 2, 5, 50_000
    scale = ScaleParam(SIGMA_2, iscov=True)
    spec = SamplerSpec(m, n, scale)
    u_sigma = cholesky_upper_param(scale, invert=False)
    rng_a = RngStream(seed, 3)
    rng_b = RngStream(seed, 4)
    fast = np.empty((nsamples, m, m))
    naive = np.empty((nsamples, m, m))
    for i in range(nsamples):
        fast[i] = rwishart(rng_a, spec)
        naive[i] = rwishart_outer_oracle(rng_b, m, n, u_sigma)
    entries = [(i, j) for j in range(m) for i in range(j + 1)]
    records = []
    for i, j in entries:
        res = ks_two_sample(fast[:, i, j], naive[:, i, j])
        records.append(
            _ks_record(
                "bartlett.wishart.outer",
                {"entry": [i + 1, j + 1], "m": m, "n": n, "nsamples": nsamples},
                seed,
                res,
                ALPHA / len(entries),
            )
        )
    return records


def check_agreement(seed):
    """Both inverse-Wishart algorithms draw from the same law (two-sample KS)."""
    m, n, nsamples = 3, 8, 50_000
    scale = ScaleParam(SIGMA_3, iscov=True)
    spec = SamplerSpec(m, n, scale)
    rng_a = RngStream(seed, 6)
    rng_b = RngStream(seed, 7)
    via_indirect = np.empty((nsamples, m, m))
    via_direct = np.empty((nsamples, m, m))
    for i in range(nsamples):
        via_indirect[i] = sample_invwishart(rng_a, spec, INDIRECT)
        via_direct[i] = sample_invwishart(rng_b, spec, DIRECT)
    entries = [(i, j) for j in range(m) for i in range(j + 1)]
    records = []
    for i, j in entries:
        res = ks_two_sample(via_indirect[:, i, j], via_direct[:, i, j])
        records.append(
            _ks_record(
                "agreement.invwishart",
                {"entry": [i + 1, j + 1], "m": m, "n": n, "nsamples": nsamples},
                seed,
                res,
                ALPHA / len(entries),
            )
        )
    return records


# ---------------------------------------------------------------------------
# Monte Carlo moments


def check_moments_wishart(seed):
    m, n, nsamples = 4, 10, 200_000
    spec = SamplerSpec(m, n, ScaleParam(SPD_4, iscov=True))
    report = mc_mean_wishart(RngStream(seed, 8), spec, nsamples)
    threshold = 0.02
    return [
        CheckRecord(
            "moments.wishart",
            {"m": m, "n": n, "nsamples": nsamples},
            report.relative_error,
            threshold,
            report.relative_error < threshold,
            seed,
        )
    ]


def _moment_invwishart(seed, stream, algorithm):
    m, n, nsamples = 4, 10, 200_000
    spec = SamplerSpec(m, n, ScaleParam(SPD_4, iscov=False))
    report = mc_mean_invwishart(RngStream(seed, stream), spec, algorithm, nsamples)
    threshold = 0.05
    return CheckRecord(
        f"moments.invwishart.{algorithm}",
        {"m": m, "n": n, "nsamples": nsamples, "algorithm": algorithm},
        report.relative_error,
        threshold,
        report.relative_error < threshold,
        seed,
    )


def check_moments_invwishart_indirect(seed):
    return [_moment_invwishart(seed, 9, INDIRECT)]


def check_moments_invwishart_direct(seed):
    return [_moment_invwishart(seed, 10, DIRECT)]


# ---------------------------------------------------------------------------
# finite-difference Jacobian oracles


def _random_factor(rng, m):
    t = np.zeros((m, m))
    for j in range(m):
        for i in range(j):
            t[i, j] = 0.5 * rng.standard_normal()
        t[j, j] = 0.5 + rng.uniform()
    return t


def _jacobian_records(check, seed, stream, map_fn, analytic_fn, npoints=10):
    rng = RngStream(seed, stream)
    records = []
    for m in (1, 2, 3):
        worst = 0.0
        for _ in range(npoints):
            t = _random_factor(rng, m)
            fd = fd_logdet_jacobian(map_fn, t)
            analytic = analytic_fn(t)
            err = abs(fd - analytic) / max(1.0, abs(analytic))
            worst = max(worst, err)
        threshold = 1e-5
        records.append(
            CheckRecord(
                check, {"m": m, "points": npoints}, worst, threshold, worst < threshold, seed
            )
        )
    return records


def check_jacobian_chol(seed):
    """FD log|det J| of T -> T^T T against the closed form."""
    return _jacobian_records("jacobian.chol", seed, 11, gram_ut, logjac_chol)


def check_jacobian_triinv(seed):
    """FD log|det J| of R -> R^{-1} against the closed form."""
    return _jacobian_records("jacobian.triinv", seed, 12, tri_inverse, logjac_tri_inverse)


# ---------------------------------------------------------------------------
# density-kernel consistency


def _offset_record(check, seed, params, offsets):
    spread = float(np.std(offsets))
    threshold = 1e-8
    return CheckRecord(check, params, spread, threshold, spread < threshold, seed)


def check_density_wishart(seed):
    """Factor kernel = squared-matrix kernel + Cholesky Jacobian, up to a constant."""
    m, n, ndraws = 3, 7.5, 100
    u_sigma = cholesky_upper_param(ScaleParam(SIGMA_3, iscov=True), invert=False)
    rng = RngStream(seed, 13)
    offsets = np.empty(ndraws)
    for i in range(ndraws):
        u_a = rwishart_chol(rng, m, n, u_sigma)
        offsets[i] = (
            logkernel_cholwishart(u_a, n, u_sigma)
            - logkernel_wishart(gram_ut(u_a), n, u_sigma)
            - logjac_chol(u_a)
        )
    return [_offset_record("density.wishart", seed, {"m": m, "n": n, "draws": ndraws}, offsets)]


def check_density_invwishart(seed):
    m, n, ndraws = 3, 6.5, 100
    u_omega = cholesky_upper_param(ScaleParam(SIGMA_3, iscov=False), invert=False)
    rng = RngStream(seed, 14)
    offsets = np.empty(ndraws)
    for i in range(ndraws):
        u_b = rinvwishart_chol(rng, m, n, u_omega)
        offsets[i] = (
            logkernel_cholinvwishart(u_b, n, u_omega)
            - logkernel_invwishart(gram_ut(u_b), n, u_omega)
            - logjac_chol(u_b)
        )
    return [_offset_record("density.invwishart", seed, {"m": m, "n": n, "draws": ndraws}, offsets)]


def check_density_chain(seed):
    """Triangular fill + inversion: the factor kernel follows from the scalar laws.

    For Z from the inverse-Wishart fill and U_B = Z^{-1} U_Omega, the factor
    log kernel minus (m+1)*log det Z must differ from the summed chi and
    normal log kernels of Z's entries by a draw-independent constant.
    """
    m, n, ndraws = 3, 8, 100
    u_omega = cholesky_upper_param(ScaleParam(SIGMA_3, iscov=False), invert=False)
    rng = RngStream(seed, 15)
    offsets = np.empty(ndraws)
    for i in range(ndraws):
        z = draw_bartlett_invwishart(rng, m, n)
        u_b = tri_mul(tri_inverse(z), u_omega)
        log_pz = -0.5 * float(np.sum(z * z))
        for j in range(1, m + 1):
            df = n - m + j
            log_pz += (df - 1.0) * math.log(z[j - 1, j - 1])
        offsets[i] = (
            logkernel_cholinvwishart(u_b, n, u_omega) - (m + 1) * log_det_tri(z) - log_pz
        )
    return [_offset_record("density.chain", seed, {"m": m, "n": n, "draws": ndraws}, offsets)]


# ---------------------------------------------------------------------------
# univariate reductions


def check_scalar_wishart(seed):
    """m=1 draws follow the scaled chi-square law."""
    n, nsamples = 4.5, 50_000
    sigma_sq = 2.0
    spec = SamplerSpec(1, n, ScaleParam(np.array([[sigma_sq]]), iscov=True))
    rng = RngStream(seed, 16)
    draws = np.empty(nsamples)
    for i in range(nsamples):
        draws[i] = rwishart(rng, spec)[0, 0]
    res = ks_one_sample(draws, lambda x: chi_square_cdf(x / sigma_sq, n))
    return [
        _ks_record(
            "scalar.wishart", {"n": n, "sigma_sq": sigma_sq, "nsamples": nsamples}, seed, res, ALPHA
        )
    ]


def _scalar_invwishart(seed, stream, algorithm):
    """m=1 draws follow the inverse-gamma law (via 2*omega/B ~ chi-square(n))."""
    n, nsamples = 6, 50_000
    omega = 3.0
    spec = SamplerSpec(1, n, ScaleParam(np.array([[omega]]), iscov=False))
    rng = RngStream(seed, stream)
    draws = np.empty(nsamples)
    for i in range(nsamples):
        draws[i] = sample_invwishart(rng, spec, algorithm)[0, 0]
    res = ks_one_sample(draws, lambda x: 1.0 - chi_square_cdf(omega / x, n))
    return _ks_record(
        f"scalar.invwishart.{algorithm}",
        {"n": n, "omega": omega, "nsamples": nsamples, "algorithm": algorithm},
        seed,
        res,
        ALPHA,
    )


def check_scalar_invwishart_indirect(seed):
    return [_scalar_invwishart(seed, 17, INDIRECT)]


def check_scalar_invwishart_direct(seed):
    return [_scalar_invwishart(seed, 18, DIRECT)]


# ---------------------------------------------------------------------------
# timing


def time_algorithm(seed, stream, spec, algorithm, reps=25, warmup=5):
    """Median wall-clock seconds per draw, after warmup."""
    rng = RngStream(seed, stream)
    for _ in range(warmup):
        sample_invwishart(rng, spec, algorithm)
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        sample_invwishart(rng, spec, algorithm)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_pair(scale, m, n, retcholu, seed, reps=25, warmup=5, streams=(19, 20)):
    """Median per-draw time and op counts for both algorithms on one setup."""
    spec = SamplerSpec(m, n, scale, retcholu=retcholu)
    counts = {}
    for algorithm in (INDIRECT, DIRECT):
        counter = OpCounter()
        sample_invwishart(RngStream(seed, streams[0]), spec, algorithm, counter=counter)
        counts[algorithm] = counter
    med_indirect = time_algorithm(seed, streams[0], spec, INDIRECT, reps, warmup)
    med_direct = time_algorithm(seed, streams[1], spec, DIRECT, reps, warmup)
    return med_indirect, med_direct, counts


def check_bench_precchol(seed):
    """Direct beats indirect for a precision-factor scale with factor output."""
    m, n, reps = 200, 202, 25
    scale = ScaleParam(np.diag(np.linspace(0.5, 2.0, m)), iscov=False, ischolu=True)
    med_indirect, med_direct, _ = bench_pair(scale, m, n, True, seed, reps=reps)
    ratio = med_direct / med_indirect
    return [
        CheckRecord(
            "bench.precchol",
            {"m": m, "n": n, "reps": reps, "retcholu": True, "scale": "prec_chol"},
            ratio,
            1.0,
            ratio < 1.0,
            seed,
        )
    ]


def check_bench_cov(seed):
    """Indirect beats direct for a covariance scale with full-matrix output."""
    m, n, reps = 200, 202, 25
    scale = ScaleParam(np.diag(np.linspace(0.5, 2.0, m)), iscov=True)
    med_indirect, med_direct, _ = bench_pair(scale, m, n, False, seed, reps=reps, streams=(21, 22))
    ratio = med_indirect / med_direct
    return [
        CheckRecord(
            "bench.cov",
            {"m": m, "n": n, "reps": reps, "retcholu": False, "scale": "cov"},
            ratio,
            1.0,
            ratio < 1.0,
            seed,
        )
    ]


# ---------------------------------------------------------------------------
# command-line contracts


def check_cli_determinism(seed):
    """Same seed, same flags: byte-identical output files."""
    import io
    import tempfile
    from contextlib import redirect_stdout
    from pathlib import Path

    from . import cli, matio

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        scale_path = str(tmp / "scale.csv")
        matio.write_matrices(scale_path, [np.eye(2)])
        args = [
            "sample", "--m", "2", "--n", "5", "--scale", scale_path, "--iscov",
            "--seed", str(seed), "--nsamples", "3",
        ]
        outs = []
        for name in ("a.csv", "b.csv"):
            out = str(tmp / name)
            with redirect_stdout(io.StringIO()):
                rc = cli.main(args + ["--out", out])
            outs.append((rc, Path(out).read_bytes()))
        same = outs[0] == outs[1] and outs[0][0] == 0
    return [
        CheckRecord(
            "cli.determinism",
            {"m": 2, "n": 5, "nsamples": 3},
            0.0 if same else 1.0,
            0.0,
            same,
            seed,
        )
    ]


def check_cli_square(seed):
    """--retcholu --square reproduces the retcholu=false matrices bit-exactly."""
    import io
    import tempfile
    from contextlib import redirect_stdout
    from pathlib import Path

    from . import cli, matio

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        scale_path = str(tmp / "scale.csv")
        matio.write_matrices(scale_path, [SIGMA_3])
        base = [
            "sample", "--m", "3", "--n", "6.5", "--scale", scale_path, "--iscov",
            "--algorithm", "direct", "--seed", str(seed), "--nsamples", "4",
        ]
        squared = str(tmp / "squared.csv")
        plain = str(tmp / "plain.csv")
        with redirect_stdout(io.StringIO()):
            rc1 = cli.main(base + ["--retcholu", "--square", "--out", squared])
            rc2 = cli.main(base + ["--out", plain])
        _, blocks_sq = matio.read_matrices(squared)
        _, blocks_pl = matio.read_matrices(plain)
        same = (
            rc1 == 0
            and rc2 == 0
            and len(blocks_sq) == len(blocks_pl)
            and all(
                ka == kb == "square" and a.tobytes() == b.tobytes()
                for (ka, a), (kb, b) in zip(blocks_sq, blocks_pl)
            )
        )
    return [
        CheckRecord(
            "cli.square",
            {"m": 3, "n": 6.5, "nsamples": 4, "algorithm": DIRECT},
            0.0 if same else 1.0,
            0.0,
            same,
            seed,
        )
    ]


# ---------------------------------------------------------------------------
# error contracts


def check_errors_df(seed):
    """Too-small degrees of freedom are rejected before any sampling."""
    try:
        SamplerSpec(3, 1.5, ScaleParam(np.eye(3)))
        ok = False
    except InvalidDegreesOfFreedom:
        ok = True
    return [
        CheckRecord("errors.df", {"m": 3, "n": 1.5}, 1.0 if ok else 0.0, 1.0, ok, seed)
    ]


def check_errors_notspd(seed):
    """A non-positive-definite scale file exits with the numerical-failure code."""
    import io
    import tempfile
    from contextlib import redirect_stderr, redirect_stdout
    from pathlib import Path

    from . import cli, matio

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        scale_path = str(tmp / "bad.csv")
        matio.write_matrices(scale_path, [np.array([[1.0, 2.0], [2.0, 1.0]])])
        err = io.StringIO()
        with redirect_stdout(io.StringIO()), redirect_stderr(err):
            rc = cli.main(
                [
                    "sample", "--m", "2", "--n", "5", "--scale", scale_path, "--iscov",
                    "--seed", str(seed), "--out", str(tmp / "out.csv"),
                ]
            )
        ok = rc == 4 and "pivot" in err.getvalue()
    return [
        CheckRecord("errors.notspd", {"m": 2, "exit": rc}, float(rc), 4.0, ok, seed)
    ]


def check_errors_mean(seed):
    """The inverse-Wishart moment check refuses n <= m+1 (mean does not exist)."""
    spec = SamplerSpec(2, 3, ScaleParam(np.eye(2), iscov=False))
    try:
        mc_mean_invwishart(RngStream(seed, 23), spec, DIRECT, 2000)
        ok = False
    except MeanUndefined:
        ok = True
    return [
        CheckRecord("errors.mean", {"m": 2, "n": 3}, 1.0 if ok else 0.0, 1.0, ok, seed)
    ]


# ---------------------------------------------------------------------------
# registry

REGISTRY = [
    ("opcount.table", check_opcount),
    ("bartlett.wishart", check_bartlett_wishart),
    ("bartlett.wishart.outer", check_wishart_outer),
    ("bartlett.invwishart", check_bartlett_invwishart),
    ("agreement.invwishart", check_agreement),
    ("moments.wishart", check_moments_wishart),
    ("moments.invwishart.indirect", check_moments_invwishart_indirect),
    ("moments.invwishart.direct", check_moments_invwishart_direct),
    ("jacobian.chol", check_jacobian_chol),
    ("jacobian.triinv", check_jacobian_triinv),
    ("density.wishart", check_density_wishart),
    ("density.invwishart", check_density_invwishart),
    ("density.chain", check_density_chain),
    ("scalar.wishart", check_scalar_wishart),
    ("scalar.invwishart.indirect", check_scalar_invwishart_indirect),
    ("scalar.invwishart.direct", check_scalar_invwishart_direct),
    ("bench.precchol", check_bench_precchol),
    ("bench.cov", check_bench_cov),
    ("cli.determinism", check_cli_determinism),
    ("cli.square", check_cli_square),
    ("errors.df", check_errors_df),
    ("errors.notspd", check_errors_notspd),
    ("errors.mean", check_errors_mean),
]


def _selected(name, only):
    if not only:
        return True
    for token in str(only).split(","):
        token = token.strip()
        if not token:
            continue
        if token in name or token.rstrip("s") in name:
            return True
    return False


def select_checks(only=None):
    """Registry entries whose name matches the comma-separated filter."""
    return [entry for entry in REGISTRY if _selected(entry[0], only)]


def run_checks(seed=DEFAULT_SEED, only=None, jobs=1):
    """Run the selected checks; records come back in registry order."""
    selected = select_checks(only)
    if jobs and jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(fn, seed) for _, fn in selected]
            groups = [f.result() for f in futures]
    else:
        groups = [fn(seed) for _, fn in selected]
    return [record for group in groups for record in group]
