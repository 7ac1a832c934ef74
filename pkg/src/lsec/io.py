"""Dense matrix and label-vector file formats.

Two matrix formats are supported:

``csv``
    One row per point, comma separated, no header.
``bin``
    Little-endian header of two unsigned 64-bit counts ``(n, d)`` followed
    by ``n*d`` 32-bit floats in row-major order.

Label files hold one non-negative integer per line.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import FormatError

_HEADER = np.dtype("<u8")
_VALUE = np.dtype("<f4")


@dataclass
class DataMatrix:
    """An ``n x d`` matrix of finite features plus a free-form name."""

    values: np.ndarray
    name: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise FormatError(f"expected a non-empty 2-D matrix, got shape {values.shape}")
        if not np.isfinite(values).all():
            raise FormatError("matrix contains non-finite values")
        self.values = values

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def _infer_format(path, fmt):
    if fmt is not None:
        return fmt
    return "bin" if str(path).endswith(".bin") else "csv"


def load_matrix(path, format: str | None = None) -> DataMatrix:
    """Read a matrix; ``format`` is ``"csv"`` or ``"bin"`` (inferred from the suffix if omitted)."""
    fmt = _infer_format(path, format)
    name = os.path.splitext(os.path.basename(str(path)))[0]
    if fmt == "bin":
        with open(path, "rb") as fh:
            raw = fh.read()
        if len(raw) < 16:
            raise FormatError("binary file shorter than its 16-byte header")
        n, d = (int(v) for v in np.frombuffer(raw[:16], dtype=_HEADER))
        body = np.frombuffer(raw[16:], dtype=_VALUE)
        if n < 1 or d < 1 or body.size != n * d:
            raise FormatError(f"header says {n}x{d} but file holds {body.size} values")
        return DataMatrix(body.reshape(n, d).astype(np.float64), name)
    if fmt != "csv":
        raise FormatError(f"unknown matrix format {fmt!r}")

    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                row = [float(tok) for tok in line.split(",")]
            except ValueError:
                raise FormatError(f"line {lineno}: non-numeric token") from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise FormatError(f"line {lineno}: expected {width} columns, got {len(row)}")
            rows.append(row)
    if not rows:
        raise FormatError("empty csv file")
    values = np.array(rows, dtype=np.float64)
    if not np.isfinite(values).all():
        raise FormatError("csv contains non-finite values")
    return DataMatrix(values, name)


def save_matrix(matrix, path, format: str | None = None) -> None:
    values = np.asarray(matrix, dtype=np.float64)
    fmt = _infer_format(path, format)
    if fmt == "bin":
        with open(path, "wb") as fh:
            fh.write(np.array(values.shape, dtype=_HEADER).tobytes())
            fh.write(np.ascontiguousarray(values, dtype=_VALUE).tobytes())
    elif fmt == "csv":
        np.savetxt(path, values, delimiter=",", fmt="%.17g")
    else:
        raise FormatError(f"unknown matrix format {fmt!r}")


def save_labels(labels, path) -> None:
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.size == 0 or (labels < 0).any():
        raise FormatError("labels must be a non-empty vector of non-negative integers")
    with open(path, "w") as fh:
        fh.write("".join(f"{int(v)}\n" for v in labels))


def load_labels(path) -> np.ndarray:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            tok = line.strip()
            if not tok:
                continue
            if not tok.isdigit():
                raise FormatError(f"line {lineno}: {tok!r} is not a non-negative integer")
            out.append(int(tok))
    if not out:
        raise FormatError("empty label file")
    return np.array(out, dtype=np.int64)
