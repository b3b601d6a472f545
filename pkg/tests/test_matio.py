"""Bit-exact matrix file round-trips and malformed-input rejection."""

import numpy as np
import pytest

from triwish import matio
from triwish.errors import InvalidParameter


def _ugly_matrices():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 3)) * 1e17
    b = np.array([[0.1 + 0.2, -0.0], [1e-308, np.pi]])
    c = np.array([[123456789.123456789]])
    return [a, b, c]


def test_csv_roundtrip_bit_exact(tmp_path):
    path = str(tmp_path / "mats.csv")
    mats = _ugly_matrices()
    kinds = ["square", "cholU", "square"]
    header = ["demo file", "k=v pairs allowed"]
    matio.write_matrices(path, mats, kinds=kinds, header=header)
    got_header, blocks = matio.read_matrices(path)
    assert got_header == header
    assert [k for k, _ in blocks] == kinds
    for mat, (_, back) in zip(mats, blocks):
        assert mat.tobytes() == back.tobytes()


def test_ndjson_roundtrip_bit_exact(tmp_path):
    path = str(tmp_path / "mats.ndjson")
    mats = _ugly_matrices()
    matio.write_matrices(path, mats, kinds="square", header=["hello"], fmt="ndjson")
    got_header, blocks = matio.read_matrices(path)
    assert got_header == ["hello"]
    for mat, (kind, back) in zip(mats, blocks):
        assert kind == "square"
        assert mat.tobytes() == back.tobytes()


def test_format_float_shortest_roundtrip():
    rng = np.random.default_rng(8)
    values = list(rng.standard_normal(1000) * 10.0 ** rng.integers(-300, 300, size=1000))
    values += [0.0, -0.0, 1.0, 2.0**-1074, np.nextafter(1.0, 2.0)]
    for v in values:
        assert float(matio.format_float(v)) == float(v)


def test_single_matrix_reader(tmp_path):
    path = str(tmp_path / "one.csv")
    matio.write_matrices(path, [np.eye(2)])
    kind, mat = matio.read_single_matrix(path)
    assert kind == "square"
    np.testing.assert_array_equal(mat, np.eye(2))

    matio.write_matrices(path, [np.eye(2), np.eye(2)])
    with pytest.raises(InvalidParameter):
        matio.read_single_matrix(path)


def test_truncated_block_rejected(tmp_path):
    path = str(tmp_path / "bad.csv")
    path_obj = tmp_path / "bad.csv"
    path_obj.write_text("# m=2 kind=square\n1.0,2.0\n")
    with pytest.raises(InvalidParameter):
        matio.read_matrices(path)


def test_wrong_row_width_rejected(tmp_path):
    (tmp_path / "bad.csv").write_text("# m=2 kind=square\n1.0,2.0\n1.0,2.0,3.0\n")
    with pytest.raises(InvalidParameter):
        matio.read_matrices(str(tmp_path / "bad.csv"))


def test_non_numeric_rejected(tmp_path):
    (tmp_path / "bad.csv").write_text("# m=1 kind=square\nspam\n")
    with pytest.raises(InvalidParameter):
        matio.read_matrices(str(tmp_path / "bad.csv"))


def test_stray_content_rejected(tmp_path):
    (tmp_path / "bad.csv").write_text("1.0,2.0\n")
    with pytest.raises(InvalidParameter):
        matio.read_matrices(str(tmp_path / "bad.csv"))


def test_malformed_ndjson_rejected(tmp_path):
    (tmp_path / "bad.ndjson").write_text('{"m": 2, "kind": "square"\n')
    with pytest.raises(InvalidParameter):
        matio.read_matrices(str(tmp_path / "bad.ndjson"))
    (tmp_path / "bad2.ndjson").write_text('{"m": 2, "kind": "square", "rows": [[1.0]]}\n')
    with pytest.raises(InvalidParameter):
        matio.read_matrices(str(tmp_path / "bad2.ndjson"))
    (tmp_path / "bad3.ndjson").write_text('{"m": 1, "kind": "wat", "rows": [[1.0]]}\n')
    with pytest.raises(InvalidParameter):
        matio.read_matrices(str(tmp_path / "bad3.ndjson"))


def test_kinds_length_checked(tmp_path):
    with pytest.raises(InvalidParameter):
        matio.write_matrices(str(tmp_path / "x.csv"), [np.eye(2)], kinds=["square", "cholU"])
    with pytest.raises(InvalidParameter):
        matio.write_matrices(str(tmp_path / "x.csv"), [np.eye(2)], fmt="xml")
