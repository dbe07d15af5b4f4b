"""Text formats: ``rkmat`` / ``rkvec`` arrays and the CSV outputs.

rkmat::

    rkmat 1 <real|complex> <m> <n>
    <m lines of n space-separated entries>

rkvec::

    rkvec 1 <real|complex> <len>
    <one entry per line>

Real entries are decimal floats, complex entries ``re,im``.  Floats are written
with 17 significant digits, so reading a written file back is exact.
"""

from __future__ import annotations

import csv
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from rkaczmarz.linalg import field_of


class FormatError(ValueError):
    pass


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def _fmt_entry(v) -> str:
    if isinstance(v, complex) or np.iscomplexobj(v):
        return f"{fmt(v.real)},{fmt(v.imag)}"
    return fmt(v)


def _parse_entry(tok: str, field: str):
    try:
        if field == "complex":
            re_, im_ = tok.split(",")
            return complex(float(re_), float(im_))
        return float(tok)
    except ValueError:
        raise FormatError(f"bad {field} entry {tok!r}") from None


@contextmanager
def atomic_open(path, mode="w"):
    """Write to a temp file beside ``path`` and rename into place on success."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, newline="") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_matrix(path, A: np.ndarray) -> None:
    m, n = A.shape
    with atomic_open(path) as fh:
        fh.write(f"rkmat 1 {field_of(A)} {m} {n}\n")
        for row in A:
            fh.write(" ".join(_fmt_entry(v) for v in row.tolist()) + "\n")


def write_vector(path, v: np.ndarray) -> None:
    with atomic_open(path) as fh:
        fh.write(f"rkvec 1 {field_of(v)} {len(v)}\n")
        for x in v.tolist():
            fh.write(_fmt_entry(x) + "\n")


def _header(line: str, magic: str, nums: int):
    parts = line.split()
    if len(parts) != 3 + nums or parts[0] != magic or parts[1] != "1":
        raise FormatError(f"expected a '{magic} 1 <field> ...' header, got {line.strip()!r}")
    field = parts[2]
    if field not in ("real", "complex"):
        raise FormatError(f"unknown field {field!r}")
    try:
        dims = [int(p) for p in parts[3:]]
    except ValueError:
        raise FormatError(f"bad dimensions in header {line.strip()!r}") from None
    if any(d < 1 for d in dims):
        raise FormatError(f"dimensions must be positive, got {dims}")
    return field, dims


def read_matrix(path) -> np.ndarray:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise FormatError(f"{path}: empty file")
    field, (m, n) = _header(lines[0], "rkmat", 2)
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != m:
        raise FormatError(f"{path}: expected {m} rows, found {len(body)}")
    dtype = np.complex128 if field == "complex" else np.float64
    A = np.empty((m, n), dtype=dtype)
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != n:
            raise FormatError(f"{path}: row {i + 1} has {len(toks)} entries, expected {n}")
        A[i] = [_parse_entry(t, field) for t in toks]
    return A


def read_vector(path) -> np.ndarray:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise FormatError(f"{path}: empty file")
    field, (length,) = _header(lines[0], "rkvec", 1)
    body = [ln.strip() for ln in lines[1:] if ln.strip()]
    if len(body) != length:
        raise FormatError(f"{path}: expected {length} entries, found {len(body)}")
    dtype = np.complex128 if field == "complex" else np.float64
    return np.array([_parse_entry(t, field) for t in body], dtype=dtype)


TRAJECTORY_COLUMNS = ("trial", "iter", "error", "noisy_bound")
SUMMARY_COLUMNS = ("trial", "R", "gamma", "threshold", "final_error")


def write_csv(path, columns, rows) -> None:
    """Rows of ints/floats; floats are formatted at 17 significant digits."""
    with atomic_open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([v if isinstance(v, (int, np.integer)) else fmt(v) for v in row])
