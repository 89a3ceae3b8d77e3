"""Input validation helpers shared across the package."""

from __future__ import annotations

import numbers

import numpy as np

#: Relative singular-value threshold below which a matrix is treated as rank
#: deficient.  A generator is usable only if s_min > RANK_RTOL * s_max.
RANK_RTOL = 1e-10

#: Absolute floor for norm-relative tolerances, so that comparisons stay
#: meaningful for matrices with tiny or zero norm.
TOL_FLOOR = 1e-12


class MatrixFormatError(ValueError):
    """Raised when a matrix text file cannot be parsed."""


class RankDeficientError(np.linalg.LinAlgError):
    """Raised when a matrix does not have the full row rank an operation needs."""


class NotHermitianError(np.linalg.LinAlgError):
    """Raised when a matrix expected to be Hermitian is not, beyond tolerance."""


def check_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex128 array.

    Raises ValueError for empty, non-2-D, or non-finite input.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def check_vector(u, length: int | None = None, name: str = "vector") -> np.ndarray:
    """Coerce ``u`` to a finite 1-D complex128 array, optionally of fixed length."""
    a = np.asarray(u, dtype=np.complex128)
    if a.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got ndim={a.ndim}")
    if length is not None and a.shape[0] != length:
        raise ValueError(f"{name} must have length {length}, got {a.shape[0]}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def check_row_indices(row_indices, n: int, k: int | None = None) -> tuple[int, ...]:
    """Validate a selection of distinct row indices in ``[0, n)``.

    Order is preserved; ``k``, when given, fixes the required count.
    """
    rows = tuple(int(i) for i in row_indices)
    if len(rows) == 0:
        raise ValueError("row_indices must select at least one row")
    if len(set(rows)) != len(rows):
        raise ValueError(f"row_indices contains duplicates: {rows}")
    for i in rows:
        if not 0 <= i < n:
            raise ValueError(f"row index {i} out of range [0, {n})")
    if k is not None and len(rows) != k:
        raise ValueError(f"expected {k} row indices, got {len(rows)}")
    return rows


def check_count(value, name: str, minimum: int = 1) -> int:
    """Validate an integer count with a lower bound."""
    if not isinstance(value, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    v = int(value)
    if v < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {v}")
    return v


def check_seed(seed, name: str = "seed") -> int:
    """Validate an integer RNG seed and reduce it to the unsigned 64-bit range."""
    if not isinstance(seed, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {seed!r}")
    return int(seed) & 0xFFFFFFFFFFFFFFFF


def frobenius_tolerance(m: np.ndarray, rel: float) -> float:
    """Tolerance relative to the Frobenius norm of ``m`` with an absolute floor."""
    return max(rel * float(np.linalg.norm(m)), TOL_FLOOR)
