"""Matrix block files: bit-exact CSV (default) or NDJSON.

CSV layout: optional leading ``#`` comment lines (the run header), then one
block per matrix.  A block is the line ``# m=<m> kind=<square|cholU>``
followed by m rows of m comma-separated values; blocks are separated by a
blank line.  Values are printed with Python's shortest round-trip float
representation, so write-then-read reproduces every entry bit-exactly.

NDJSON layout: an optional first record ``{"header": [...]}``, then one
record ``{"m": ..., "kind": ..., "rows": [[...], ...]}`` per matrix.
"""

import json
import re

import numpy as np

from .errors import InvalidParameter

_BLOCK_RE = re.compile(r"^# m=(\d+) kind=(square|cholU)$")

KIND_SQUARE = "square"
KIND_CHOLU = "cholU"


def format_float(v):
    """Shortest decimal representation that parses back to the same float."""
    return repr(float(v))


def _write_csv(fh, mats, kinds, header):
    for line in header:
        fh.write(f"# {line}\n")
    for idx, (mat, kind) in enumerate(zip(mats, kinds)):
        if idx or header:
            fh.write("\n")
        m = mat.shape[0]
        fh.write(f"# m={m} kind={kind}\n")
        for row in mat:
            fh.write(",".join(format_float(v) for v in row) + "\n")


def _write_ndjson(fh, mats, kinds, header):
    if header:
        fh.write(json.dumps({"header": list(header)}) + "\n")
    for mat, kind in zip(mats, kinds):
        rec = {"m": mat.shape[0], "kind": kind, "rows": [[float(v) for v in row] for row in mat]}
        fh.write(json.dumps(rec) + "\n")


def write_matrices(path, mats, kinds=None, header=(), fmt="csv"):
    """Write matrices to ``path`` ('-' for stdout) in the given format."""
    mats = [np.asarray(m, dtype=np.float64) for m in mats]
    if kinds is None:
        kinds = [KIND_SQUARE] * len(mats)
    elif isinstance(kinds, str):
        kinds = [kinds] * len(mats)
    if len(kinds) != len(mats):
        raise InvalidParameter("one kind per matrix required")
    writer = {"csv": _write_csv, "ndjson": _write_ndjson}.get(fmt)
    if writer is None:
        raise InvalidParameter(f"unknown format {fmt!r}")
    if path == "-":
        import sys

        writer(sys.stdout, mats, kinds, header)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            writer(fh, mats, kinds, header)


def _parse_csv(text):
    header = []
    blocks = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        if not line.strip():
            i += 1
            continue
        match = _BLOCK_RE.match(line)
        if match:
            m = int(match.group(1))
            kind = match.group(2)
            rows = []
            for r in range(m):
                i += 1
                if i >= len(lines):
                    raise InvalidParameter(f"block of size {m} truncated at row {r + 1}")
                cells = lines[i].split(",")
                if len(cells) != m:
                    raise InvalidParameter(
                        f"expected {m} values per row, got {len(cells)} on line {i + 1}"
                    )
                try:
                    rows.append([float(c) for c in cells])
                except ValueError as exc:
                    raise InvalidParameter(f"non-numeric value on line {i + 1}") from exc
            blocks.append((kind, np.array(rows, dtype=np.float64)))
        elif line.startswith("#"):
            header.append(line[1:].strip())
        else:
            raise InvalidParameter(f"unexpected content on line {i + 1}: {line[:40]!r}")
        i += 1
    return header, blocks


def _parse_ndjson(text):
    header = []
    blocks = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(f"malformed JSON on line {lineno}") from exc
        if "header" in rec:
            header.extend(rec["header"])
            continue
        try:
            m = int(rec["m"])
            kind = rec["kind"]
            mat = np.array(rec["rows"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"malformed matrix record on line {lineno}") from exc
        if kind not in (KIND_SQUARE, KIND_CHOLU):
            raise InvalidParameter(f"unknown matrix kind {kind!r} on line {lineno}")
        if mat.shape != (m, m):
            raise InvalidParameter(f"matrix on line {lineno} is not {m}x{m}")
        blocks.append((kind, mat))
    return header, blocks


def read_matrices(path):
    """Read a matrix file; returns (header_lines, [(kind, matrix), ...]).

    The format is auto-detected: a first non-blank character of ``{`` means
    NDJSON, anything else is parsed as CSV blocks.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_ndjson(text)
    return _parse_csv(text)


def read_single_matrix(path):
    """Read a file that must contain exactly one matrix block."""
    _, blocks = read_matrices(path)
    if len(blocks) != 1:
        raise InvalidParameter(f"expected exactly one matrix in {path}, found {len(blocks)}")
    return blocks[0]
