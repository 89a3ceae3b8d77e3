"""Plain-text matrix serialization.

File layout::

    # optional comment lines
    rows cols
    <rows * cols whitespace-separated entries>

Entries are written as ``re`` for real values or ``re+imj`` / ``re-imj``
for complex ones, e.g. ``0.5``, ``1.0-0.25j``.  Writing uses ``repr`` of
the double-precision parts, so a write/read cycle is bit-identical.
Parsing is locale-independent (Python numeric literals only).
"""

from __future__ import annotations

import math
import os

import numpy as np

from .validation import MatrixFormatError, check_complex_matrix

__all__ = ["format_entry", "parse_entry", "save_matrix", "load_matrix"]


def format_entry(z: complex) -> str:
    """Render one complex entry; the imaginary part is kept only if nonzero.

    A negative-zero imaginary part is preserved as ``-0.0j`` so that the
    round trip is exact at the bit level.
    """
    z = complex(z)
    if z.imag == 0.0 and math.copysign(1.0, z.imag) > 0:
        return repr(z.real)
    sign = "+" if math.copysign(1.0, z.imag) > 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}j"


def parse_entry(token: str) -> complex:
    """Parse one entry token; rejects non-finite values."""
    try:
        z = complex(token)
    except ValueError as exc:
        raise MatrixFormatError(f"bad matrix entry {token!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise MatrixFormatError(f"non-finite matrix entry {token!r}")
    return z


def save_matrix(path, m, comments: list[str] | None = None) -> None:
    """Write ``m`` to ``path``, preceded by optional ``#`` comment lines."""
    m = check_complex_matrix(m, "matrix")
    rows, cols = m.shape
    lines = []
    for c in comments or []:
        if "\n" in c or "\r" in c:
            raise ValueError(f"comment must be a single line, got {c!r}")
        lines.append(f"# {c}")
    lines.append(f"{rows} {cols}")
    for r in range(rows):
        lines.append(" ".join(format_entry(z) for z in m[r]))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_matrix(path) -> tuple[np.ndarray, list[str]]:
    """Read a matrix file; returns ``(matrix, comment_lines)``.

    Comment lines are returned stripped of the leading ``#``.  Entries may
    be laid out with any whitespace, as long as exactly rows*cols of them
    follow the dimension line.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such matrix file: {path}")
    comments: list[str] = []
    tokens: list[str] = []
    dims: tuple[int, int] | None = None
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                comments.append(stripped[1:].strip())
                continue
            if dims is None:
                parts = stripped.split()
                if len(parts) != 2:
                    raise MatrixFormatError(f"expected dimension line 'rows cols', got {stripped!r}")
                try:
                    dims = (int(parts[0]), int(parts[1]))
                except ValueError as exc:
                    raise MatrixFormatError(f"bad dimension line {stripped!r}") from exc
                if dims[0] < 1 or dims[1] < 1:
                    raise MatrixFormatError(f"dimensions must be positive, got {dims}")
                continue
            tokens.extend(stripped.split())
    if dims is None:
        raise MatrixFormatError("missing dimension line")
    rows, cols = dims
    if len(tokens) != rows * cols:
        raise MatrixFormatError(f"expected {rows * cols} entries for a {rows}x{cols} matrix, found {len(tokens)}")
    entries = [parse_entry(t) for t in tokens]
    return np.array(entries, dtype=np.complex128).reshape(rows, cols), comments
