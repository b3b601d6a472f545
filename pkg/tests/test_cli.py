"""End-to-end tests of the triwish command line interface."""

import json
import re
import subprocess
import sys

import numpy as np
import pytest

from triwish import matio
from triwish.cli import main
from triwish.densities import logkernel_wishart
from triwish.linalg import chol_upper
from triwish.samplers import ScaleParam, cholesky_upper_param

SIGMA_2 = np.array([[2.0, 0.6], [0.6, 1.0]])


def write_scale(tmp_path, matrix, name="scale.csv", kind=matio.KIND_SQUARE):
    path = tmp_path / name
    matio.write_matrices(str(path), [np.asarray(matrix, dtype=float)], kinds=kind)
    return str(path)


def run_cli(argv):
    return main(argv)


def test_sample_roundtrip_csv(tmp_path, capsys):
    scale = write_scale(tmp_path, np.eye(2))
    out = tmp_path / "draws.csv"
    rc = run_cli([
        "sample", "--n", "5", "--scale", scale, "--iscov",
        "--seed", "7", "--nsamples", "3", "--out", str(out),
    ])
    assert rc == 0
    assert "wrote 3 draw(s)" in capsys.readouterr().out
    header, blocks = matio.read_matrices(str(out))
    assert len(blocks) == 3
    assert all(kind == matio.KIND_SQUARE for kind, _ in blocks)
    assert all(mat.shape == (2, 2) for _, mat in blocks)
    assert any(line.startswith("triwish sample") for line in header)
    assert any("seed=7 nsamples=3" in line for line in header)


def test_sample_roundtrip_ndjson_matches_csv(tmp_path):
    scale = write_scale(tmp_path, SIGMA_2)
    outs = {}
    for fmt in ("csv", "ndjson"):
        out = tmp_path / f"draws.{fmt}"
        rc = run_cli([
            "sample", "--n", "6", "--scale", scale, "--iscov", "--retcholu",
            "--seed", "11", "--nsamples", "2", "--format", fmt, "--out", str(out),
        ])
        assert rc == 0
        _, blocks = matio.read_matrices(str(out))
        outs[fmt] = blocks
    for (ka, a), (kb, b) in zip(outs["csv"], outs["ndjson"]):
        assert ka == kb == matio.KIND_CHOLU
        assert a.tobytes() == b.tobytes()


def test_sample_deterministic_bytes(tmp_path):
    scale = write_scale(tmp_path, np.eye(2))
    paths = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        rc = run_cli([
            "sample", "--m", "2", "--n", "5", "--scale", scale, "--iscov",
            "--seed", "123", "--nsamples", "4", "--out", str(out),
        ])
        assert rc == 0
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sample_auto_resolution_recorded(tmp_path):
    prec = write_scale(tmp_path, np.eye(2), "prec.csv")
    out = tmp_path / "draws.csv"
    rc = run_cli(["sample", "--n", "5", "--scale", prec, "--out", str(out)])
    assert rc == 0
    header, _ = matio.read_matrices(str(out))
    assert any("algorithm=direct requested=auto" in line for line in header)

    out2 = tmp_path / "draws2.csv"
    rc = run_cli(["sample", "--n", "5", "--scale", prec, "--iscov", "--out", str(out2)])
    assert rc == 0
    header, _ = matio.read_matrices(str(out2))
    assert any("algorithm=indirect requested=auto" in line for line in header)


def test_sample_header_records_op_counts(tmp_path):
    prec = write_scale(tmp_path, np.eye(3), "prec.csv")
    out = tmp_path / "draws.csv"
    rc = run_cli(["sample", "--n", "6", "--scale", prec, "--out", str(out)])
    assert rc == 0
    header, _ = matio.read_matrices(str(out))
    assert any(line == "opcount potrf=1 trtri=1 trmm=2" for line in header)


def test_sample_square_matches_full_matrix_output(tmp_path):
    scale = write_scale(tmp_path, SIGMA_2)
    base = ["--n", "6.5", "--scale", scale, "--iscov", "--algorithm", "direct",
            "--seed", "31", "--nsamples", "3"]
    full_out = tmp_path / "full.csv"
    sq_out = tmp_path / "square.csv"
    assert run_cli(["sample", *base, "--out", str(full_out)]) == 0
    assert run_cli(["sample", *base, "--retcholu", "--square", "--out", str(sq_out)]) == 0
    _, full_blocks = matio.read_matrices(str(full_out))
    _, sq_blocks = matio.read_matrices(str(sq_out))
    for (ka, a), (kb, b) in zip(full_blocks, sq_blocks):
        assert ka == kb == matio.KIND_SQUARE
        assert a.tobytes() == b.tobytes()


def test_sample_square_requires_retcholu(tmp_path, capsys):
    scale = write_scale(tmp_path, np.eye(2))
    rc = run_cli(["sample", "--n", "5", "--scale", scale, "--square", "--out", "-"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_sample_df_rejected_before_output(tmp_path, capsys):
    scale = write_scale(tmp_path, np.eye(3))
    out = tmp_path / "never.csv"
    rc = run_cli(["sample", "--n", "1.5", "--scale", scale, "--out", str(out)])
    assert rc == 2
    assert "error:" in capsys.readouterr().err
    assert not out.exists()


def test_sample_not_spd_exit_code(tmp_path, capsys):
    scale = write_scale(tmp_path, np.array([[1.0, 2.0], [2.0, 1.0]]))
    rc = run_cli(["sample", "--n", "5", "--scale", scale, "--iscov", "--out", "-"])
    assert rc == 4
    err = capsys.readouterr().err
    assert "numerical failure:" in err
    assert "pivot" in err


def test_sample_missing_scale_file(tmp_path, capsys):
    rc = run_cli(["sample", "--n", "5", "--scale", str(tmp_path / "nope.csv")])
    assert rc == 3
    assert "I/O error:" in capsys.readouterr().err


def test_sample_m_mismatch(tmp_path, capsys):
    scale = write_scale(tmp_path, np.eye(3))
    rc = run_cli(["sample", "--m", "2", "--n", "5", "--scale", scale])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_flag_exit_code(tmp_path, capsys):
    scale = write_scale(tmp_path, np.eye(2))
    rc = run_cli(["sample", "--n", "5", "--scale", scale, "--frobnicate"])
    assert rc == 2
    capsys.readouterr()


def test_sample_stdout_output(tmp_path, capsys):
    scale = write_scale(tmp_path, np.eye(1))
    rc = run_cli(["sample", "--n", "4", "--scale", scale, "--seed", "9", "--out", "-"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("#")
    assert "# m=1 kind=square" in out


def test_opcount_table_and_verdict(capsys):
    rc = run_cli(["opcount"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "verdict: MATCH 16/16" in out
    assert re.search(r"prec\s+direct\s+1\s+2\(1\)\s+1", out)
    assert re.search(r"cov_chol\s+indirect\s+1\s+2\s+0\(1\)", out)


def test_density_matches_library(tmp_path, capsys):
    scale_path = write_scale(tmp_path, SIGMA_2)
    u_sigma = chol_upper(SIGMA_2)
    rng = np.random.default_rng(5)
    mats = []
    for _ in range(3):
        g = rng.standard_normal((6, 2)) @ u_sigma
        mats.append(g.T @ g)
    mats_path = tmp_path / "points.csv"
    matio.write_matrices(str(mats_path), mats)
    rc = run_cli([
        "density", "wishart", str(mats_path), "--n", "6",
        "--scale", scale_path, "--iscov", "--out", "-",
    ])
    assert rc == 0
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["index"] for r in records] == [0, 1, 2]
    expected = [
        float(logkernel_wishart(mat, 6.0, u_sigma)) for mat in mats
    ]
    got = [r["logkernel"] for r in records]
    np.testing.assert_allclose(got, expected, rtol=0, atol=0)


def test_density_csv_format(tmp_path, capsys):
    scale_path = write_scale(tmp_path, np.eye(2))
    mats_path = tmp_path / "points.csv"
    matio.write_matrices(str(mats_path), [np.eye(2)])
    rc = run_cli([
        "density", "invwishart", str(mats_path), "--n", "5",
        "--scale", scale_path, "--format", "csv", "--out", "-",
    ])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "index,logkernel"
    assert lines[1].startswith("0,")
    assert float(lines[1].split(",")[1]) == -1.0  # -tr(I)/2 at B=Omega=I


def test_validate_only_jacobians(tmp_path, capsys):
    out = tmp_path / "report.ndjson"
    rc = run_cli(["validate", "--only", "jacobians", "--out", str(out)])
    capsys.readouterr()
    assert rc == 0
    records = [json.loads(line) for line in out.read_text().splitlines()]
    names = sorted({r["check"] for r in records})
    assert names == ["jacobian.chol", "jacobian.triinv"]
    assert all(r["pass"] for r in records)


def test_validate_seed_changes_statistics_not_verdicts(tmp_path, capsys):
    stats = {}
    for seed in (11, 12):
        out = tmp_path / f"report{seed}.ndjson"
        rc = run_cli([
            "validate", "--only", "jacobian", "--seed", str(seed), "--out", str(out),
        ])
        capsys.readouterr()
        assert rc == 0
        records = [json.loads(line) for line in out.read_text().splitlines()]
        assert all(r["pass"] for r in records)
        assert all(r["seed"] == seed for r in records)
        stats[seed] = [r["statistic"] for r in records]
    assert stats[11] != stats[12]


def test_validate_jobs_do_not_change_records(tmp_path, capsys):
    contents = {}
    for jobs in (1, 3):
        out = tmp_path / f"report{jobs}.ndjson"
        rc = run_cli([
            "validate", "--only", "jacobian,density", "--jobs", str(jobs),
            "--out", str(out),
        ])
        capsys.readouterr()
        assert rc == 0
        contents[jobs] = out.read_text()
    assert contents[1] == contents[3]
    assert len(contents[1].splitlines()) >= 4


def test_validate_csv_format(tmp_path, capsys):
    out = tmp_path / "report.csv"
    rc = run_cli(["validate", "--only", "density", "--format", "csv", "--out", str(out)])
    capsys.readouterr()
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "check,params,statistic,threshold,pass,seed"
    assert len(lines) >= 4


def test_validate_unmatched_filter(capsys):
    rc = run_cli(["validate", "--only", "zzz-no-such-check"])
    assert rc == 2
    assert "matched no checks" in capsys.readouterr().err


def test_bench_smoke(capsys):
    rc = run_cli(["bench", "--m", "24", "--reps", "2", "--seed", "3"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "m=24" in out
    assert "indirect" in out and "direct" in out
    assert "ratios direct/indirect:" in out


def test_bench_rejects_bad_m(capsys):
    rc = run_cli(["bench", "--m", "0", "--reps", "1"])
    assert rc == 2
    capsys.readouterr()


def test_scale_file_can_hold_factor(tmp_path):
    u_sigma = cholesky_upper_param(ScaleParam(SIGMA_2), invert=False)
    chol_path = write_scale(tmp_path, u_sigma, "factor.csv", kind=matio.KIND_CHOLU)
    square_path = write_scale(tmp_path, SIGMA_2, "square.csv")
    outs = []
    for path, extra in ((chol_path, []), (square_path, [])):
        out = tmp_path / f"out{len(outs)}.csv"
        rc = run_cli([
            "sample", "--n", "6", "--scale", path, "--iscov", *extra,
            "--seed", "21", "--nsamples", "2", "--out", str(out),
        ])
        assert rc == 0
        _, blocks = matio.read_matrices(str(out))
        outs.append(blocks)
    # A factor file is detected from its kind tag; the factor route skips the
    # initial POTRF but the draws follow the same law, so shapes agree here.
    assert all(mat.shape == (2, 2) for _, mat in outs[0])
    assert all(mat.shape == (2, 2) for _, mat in outs[1])


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "triwish.cli", "opcount"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "verdict: MATCH 16/16" in proc.stdout
