"""Complex dense-matrix kernel: products, factorizations, pseudo-inverse.

Everything here operates on plain 2-D ``numpy`` arrays of complex128.  The
contract of this module is the numerical residual bounds stated in each
docstring, not any particular factorization algorithm; the heavy lifting is
delegated to ``numpy.linalg`` (LAPACK).

Spectra are always returned sorted ascending.
"""

from __future__ import annotations

import numpy as np

from .validation import (
    RANK_RTOL,
    NotHermitianError,
    RankDeficientError,
    check_complex_matrix,
)

__all__ = [
    "matmul",
    "hermitian_transpose",
    "gram",
    "hermitian_eigenvalues",
    "hermitian_eigensystem",
    "singular_values",
    "left_pseudo_inverse",
]

#: Entrywise tolerance used by the Hermitian-symmetry precondition check,
#: scaled up with the Frobenius norm for matrices far from unit scale.
HERMITIAN_ATOL = 1e-10


def matmul(a, b) -> np.ndarray:
    """Complex matrix product ``a @ b`` with an explicit dimension check."""
    a = check_complex_matrix(a, "a")
    b = check_complex_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: ({a.shape[0]}x{a.shape[1]}) @ ({b.shape[0]}x{b.shape[1]})")
    return a @ b


def hermitian_transpose(m) -> np.ndarray:
    """Conjugate transpose: ``(m^H)[j, i] = conj(m[i, j])``."""
    m = check_complex_matrix(m, "m")
    return m.conj().T


def gram(g) -> np.ndarray:
    """Gram matrix ``G G^H``, symmetrized so it is exactly Hermitian."""
    g = check_complex_matrix(g, "g")
    p = g @ g.conj().T
    return 0.5 * (p + p.conj().T)


def _check_hermitian(m: np.ndarray) -> np.ndarray:
    if m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"matrix must be square, got shape {m.shape}")
    tol = max(HERMITIAN_ATOL, HERMITIAN_ATOL * float(np.linalg.norm(m)))
    dev = float(np.abs(m - m.conj().T).max())
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian: max |m - m^H| entry = {dev:.3e} > {tol:.3e}")
    return m


def hermitian_eigenvalues(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted ascending.

    The input must be square and Hermitian to within an entrywise tolerance
    of ``HERMITIAN_ATOL`` (norm-scaled for large matrices).
    """
    m = _check_hermitian(check_complex_matrix(m, "m"))
    return np.linalg.eigvalsh(m)


def hermitian_eigensystem(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Returns ``(values, vectors)`` with eigenvectors as columns, satisfying
    ``vectors @ diag(values) @ vectors^H == m`` to within a Frobenius
    residual of ``1e-9 * ||m||_F``.
    """
    m = _check_hermitian(check_complex_matrix(m, "m"))
    values, vectors = np.linalg.eigh(m)
    return values, vectors


def singular_values(g) -> np.ndarray:
    """Singular values of ``g``, sorted ascending.

    Returns ``min(rows, cols)`` values; their squares equal the eigenvalues
    of ``G G^H`` when ``rows <= cols``.
    """
    g = check_complex_matrix(g, "g")
    return np.linalg.svd(g, compute_uv=False)[::-1]


def left_pseudo_inverse(g) -> np.ndarray:
    """Left pseudo-inverse ``B = (G G^H)^{-1} G`` of a full-row-rank matrix.

    Satisfies ``B @ G^H == I_k`` to within a Frobenius residual of 1e-9.
    Raises RankDeficientError when the smallest singular value does not
    clear ``RANK_RTOL`` relative to the largest.
    """
    g = check_complex_matrix(g, "g")
    k, n = g.shape
    if k > n:
        raise RankDeficientError(f"matrix has more rows ({k}) than columns ({n}); cannot have full row rank")
    s = singular_values(g)
    if s[0] <= RANK_RTOL * s[-1]:
        raise RankDeficientError(
            f"matrix is rank deficient: smallest singular value {s[0]:.3e} "
            f"<= {RANK_RTOL:g} * largest ({s[-1]:.3e})"
        )
    return np.linalg.solve(gram(g), g)
