"""Plain-text matrix files.

Line one holds the dimension ``d``; then ``d*d`` entries follow in row-major
order, each written as a ``real imag`` pair.  Any whitespace separates
numbers, so files may be reflowed freely.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np


def write_matrix(path, M) -> None:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected square matrix, got shape {M.shape}")
    lines = [str(M.shape[0])]
    for row in M:
        lines.append(" ".join(f"{z.real:.17e} {z.imag:.17e}" for z in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path) -> np.ndarray:
    tokens = Path(path).read_text().split()
    if not tokens:
        raise ValueError(f"{path}: empty matrix file")
    try:
        d = int(tokens[0])
        vals = np.array([float(t) for t in tokens[1:]])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed matrix file ({exc})") from None
    if d < 1 or vals.size != 2 * d * d:
        raise ValueError(f"{path}: expected {2 * d * d} numbers for dimension {d}, found {vals.size}")
    M = (vals[0::2] + 1j * vals[1::2]).reshape(d, d)
    return M.real.copy() if not np.any(M.imag) else M
