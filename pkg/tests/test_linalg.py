"""Numeric kernel tests.

Eigenvalues are checked against closed-form roots of the characteristic
polynomial (quadratic formula for 2x2, trigonometric cubic for 3x3), a
route that never touches the eigensolver under test.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from analogcodes import linalg
from analogcodes.validation import NotHermitianError, RankDeficientError

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


def charpoly_eigen_2x2(m):
    # roots of x^2 - tr x + det for a Hermitian 2x2
    tr = (m[0, 0] + m[1, 1]).real
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    disc = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
    return np.array([(tr - disc) / 2.0, (tr + disc) / 2.0])


def charpoly_eigen_3x3(m):
    # trigonometric solution of x^3 - c2 x^2 + c1 x - c0 with all-real roots
    a, b, c = m[0, 0].real, m[1, 1].real, m[2, 2].real
    p_, q_, r_ = m[0, 1], m[0, 2], m[1, 2]
    c2 = a + b + c
    c1 = a * b + a * c + b * c - (abs(p_) ** 2 + abs(q_) ** 2 + abs(r_) ** 2)
    c0 = (
        a * b * c
        + 2.0 * (p_ * r_ * np.conj(q_)).real
        - a * abs(r_) ** 2
        - b * abs(q_) ** 2
        - c * abs(p_) ** 2
    )
    p = c1 - c2 * c2 / 3.0
    q = -c0 + c1 * c2 / 3.0 - 2.0 * c2**3 / 27.0
    shift = c2 / 3.0
    if abs(p) < 1e-30:
        root = math.copysign(abs(q / 2.0) ** (1.0 / 3.0), -q)
        return np.sort(np.array([root, root, root]) + shift)
    m2 = 2.0 * math.sqrt(-p / 3.0)
    arg = (3.0 * q) / (2.0 * p) * math.sqrt(-3.0 / p)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg) / 3.0
    roots = [m2 * math.cos(theta - 2.0 * math.pi * j / 3.0) + shift for j in range(3)]
    return np.sort(np.array(roots))


def test_eigen_2x2_against_quadratic_formula():
    m = np.array([[2.0, 1.0], [1.0, 2.0]], dtype=np.complex128)
    got = linalg.hermitian_eigenvalues(m)
    np.testing.assert_allclose(got, [1.0, 3.0], atol=1e-10)
    np.testing.assert_allclose(got, charpoly_eigen_2x2(m), atol=1e-10)


def test_eigen_3x3_against_cubic_formula():
    m = np.array(
        [[4.0, 1.0 + 2.0j, -0.5j], [1.0 - 2.0j, 1.0, 0.25], [0.5j, 0.25, -2.0]],
        dtype=np.complex128,
    )
    got = linalg.hermitian_eigenvalues(m)
    np.testing.assert_allclose(got, charpoly_eigen_3x3(m), atol=1e-10)


@given(st.lists(finite, min_size=4, max_size=4))
def test_eigen_2x2_random_hermitian(vals):
    a, b, re, im = vals
    m = np.array([[a, re + 1j * im], [re - 1j * im, b]], dtype=np.complex128)
    got = linalg.hermitian_eigenvalues(m)
    np.testing.assert_allclose(got, charpoly_eigen_2x2(m), atol=1e-9)


@given(st.lists(finite, min_size=9, max_size=9))
def test_eigen_3x3_random_hermitian(vals):
    a, b, c, pr, pi, qr, qi, rr, ri = vals
    m = np.array(
        [
            [a, pr + 1j * pi, qr + 1j * qi],
            [pr - 1j * pi, b, rr + 1j * ri],
            [qr - 1j * qi, rr - 1j * ri, c],
        ],
        dtype=np.complex128,
    )
    got = linalg.hermitian_eigenvalues(m)
    # near-repeated roots limit the closed-form route to ~sqrt(eps) * scale
    np.testing.assert_allclose(got, charpoly_eigen_3x3(m), atol=5e-7)


def test_eigenvalues_sorted_ascending():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    m = a @ a.conj().T
    ev = linalg.hermitian_eigenvalues(m)
    assert np.all(np.diff(ev) >= 0)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(NotHermitianError):
        linalg.hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128))
    with pytest.raises(NotHermitianError):
        linalg.hermitian_eigenvalues(np.zeros((2, 3), dtype=np.complex128))


def test_eigensystem_reconstructs_matrix():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m = a @ a.conj().T
    m = 0.5 * (m + m.conj().T)
    ev, vec = linalg.hermitian_eigensystem(m)
    np.testing.assert_allclose(vec @ np.diag(ev) @ vec.conj().T, m, atol=1e-10)


def test_gram_is_exactly_hermitian():
    rng = np.random.default_rng(2)
    g = rng.standard_normal((3, 7)) + 1j * rng.standard_normal((3, 7))
    gm = linalg.gram(g)
    assert np.array_equal(gm, gm.conj().T)
    np.testing.assert_allclose(gm, g @ g.conj().T, atol=1e-12)


def test_singular_values_square_to_gram_eigenvalues():
    # dual route: SVD of G vs eigendecomposition of G G^H
    rng = np.random.default_rng(3)
    g = rng.standard_normal((4, 9)) + 1j * rng.standard_normal((4, 9))
    s = linalg.singular_values(g)
    assert np.all(np.diff(s) >= 0)
    ev = linalg.hermitian_eigenvalues(linalg.gram(g))
    np.testing.assert_allclose(s * s, ev, atol=1e-9)


def test_pseudo_inverse_is_left_inverse():
    rng = np.random.default_rng(4)
    g = rng.standard_normal((3, 8)) + 1j * rng.standard_normal((3, 8))
    b = linalg.left_pseudo_inverse(g)
    np.testing.assert_allclose(b @ g.conj().T, np.eye(3), atol=1e-10)


def test_pseudo_inverse_unitary_rows_is_generator():
    f = np.exp(-2j * np.pi * np.outer(np.arange(2), np.arange(4)) / 4) / 2.0
    np.testing.assert_allclose(linalg.left_pseudo_inverse(f), f, atol=1e-12)


def test_pseudo_inverse_rejects_rank_deficiency():
    g = np.array([[1.0, 2.0, 0.0], [2.0, 4.0, 0.0]], dtype=np.complex128)
    with pytest.raises(RankDeficientError):
        linalg.left_pseudo_inverse(g)
    with pytest.raises(RankDeficientError):
        linalg.left_pseudo_inverse(np.eye(3, 2, dtype=np.complex128))


def test_matmul_and_hermitian_transpose():
    a = np.array([[1.0 + 1j, 2.0], [0.0, 1.0 - 1j]], dtype=np.complex128)
    b = np.array([[1.0], [2.0 + 0.5j]], dtype=np.complex128)
    np.testing.assert_allclose(linalg.matmul(a, b), a @ b, atol=0)
    assert np.array_equal(linalg.hermitian_transpose(a), a.conj().T)
    with pytest.raises(ValueError):
        linalg.matmul(a, np.ones((3, 1)))
