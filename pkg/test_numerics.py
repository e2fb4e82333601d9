"""Tests for the dense matrix kernels and tolerances."""

import numpy as np
import pytest

from src.numerics.linalg import (
    as_cmatrix,
    determinant,
    eig_hermitian,
    eigh_hermitian,
    pfaffian_skew,
    unitary_exp,
)
from src.numerics.tolerance import Tolerance
from src.utils.errors import (
    NotAntiHermitian,
    NotHermitian,
    NotSkewSymmetric,
    NotSquare,
    OddDimension,
)


def hermitian(rng, n):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (M + M.conj().T)


def skew(rng, n):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return M - M.T


@pytest.mark.parametrize("n", [1, 2, 5, 16, 32])
def test_eig_hermitian_matches_numpy(rng, n):
    M = hermitian(rng, n)
    values = eig_hermitian(M)
    np.testing.assert_allclose(values, np.linalg.eigvalsh(M), atol=1e-10)
    assert values == sorted(values)


def test_eigh_hermitian_vectors_are_unitary(rng):
    M = hermitian(rng, 12)
    values, vectors = eigh_hermitian(M)
    np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(12), atol=1e-10)
    np.testing.assert_allclose(vectors @ np.diag(values) @ vectors.conj().T, M, atol=1e-10)


def test_eig_hermitian_degenerate_spectrum():
    M = np.kron(np.eye(3), np.array([[0, 1], [1, 0]]))
    np.testing.assert_allclose(eig_hermitian(M), [-1, -1, -1, 1, 1, 1], atol=1e-12)


def test_eig_hermitian_is_unitarily_invariant(rng):
    M = hermitian(rng, 10)
    U = unitary_exp(1j * hermitian(rng, 10))
    np.testing.assert_allclose(eig_hermitian(U @ M @ U.conj().T), eig_hermitian(M), atol=1e-10)


def test_eig_hermitian_rejects_non_hermitian(rng):
    with pytest.raises(NotHermitian):
        eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_not_square():
    with pytest.raises(NotSquare):
        determinant(np.zeros((2, 3)))


def test_as_cmatrix_rejects_non_finite():
    with pytest.raises(ValueError):
        as_cmatrix([[np.nan]])


@pytest.mark.parametrize("n", [1, 3, 6, 10])
def test_determinant_matches_numpy(rng, n):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    expected = np.linalg.det(M)
    assert abs(determinant(M) - expected) <= 1e-10 * max(1.0, abs(expected))


def test_determinant_is_multiplicative(rng):
    A = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    B = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    expected = determinant(A) * determinant(B)
    assert abs(determinant(A @ B) - expected) <= 1e-10 * abs(expected)


def test_determinant_of_singular_matrix():
    assert determinant(np.zeros((4, 4))) == 0
    assert determinant(np.array([[1, 2], [2, 4]], dtype=complex)) == pytest.approx(0, abs=1e-14)


def test_pfaffian_two_by_two():
    assert pfaffian_skew(np.array([[0, 3 + 1j], [-3 - 1j, 0]])) == pytest.approx(3 + 1j)


def test_pfaffian_four_by_four_formula(rng):
    A = skew(rng, 4)
    expected = A[0, 1] * A[2, 3] - A[0, 2] * A[1, 3] + A[0, 3] * A[1, 2]
    assert pfaffian_skew(A) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("n", [2, 6, 8, 12])
def test_pfaffian_squares_to_determinant(rng, n):
    A = skew(rng, n)
    pf = pfaffian_skew(A)
    det = np.linalg.det(A)
    assert abs(pf ** 2 - det) <= 1e-9 * abs(det)


def matching_pfaffian(A):
    """Pfaffian as the signed sum over perfect matchings, expanding along the first row."""
    n = A.shape[0]
    if n == 0:
        return 1.0
    total = 0.0
    for j in range(1, n):
        rest = [k for k in range(1, n) if k != j]
        total += (-1) ** (j + 1) * A[0, j] * matching_pfaffian(A[np.ix_(rest, rest)])
    return total


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_pfaffian_matches_perfect_matching_sum(rng, n):
    A = skew(rng, n)
    expected = matching_pfaffian(A)
    assert abs(pfaffian_skew(A) - expected) <= 1e-10 * max(1.0, abs(expected))


def test_pfaffian_sign_survives_pivoting(rng):
    A = skew(rng, 8)
    A[0, 1] = A[1, 0] = 0.0
    A[2, 3], A[3, 2] = 1e-3, -1e-3
    expected = matching_pfaffian(A)
    assert abs(pfaffian_skew(A) - expected) <= 1e-10 * max(1.0, abs(expected))


def test_pfaffian_congruence(rng):
    M = skew(rng, 6)
    Q = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    expected = np.linalg.det(Q) * pfaffian_skew(M)
    assert abs(pfaffian_skew(Q.T @ M @ Q) - expected) <= 1e-9 * abs(expected)


def test_pfaffian_preconditions(rng):
    with pytest.raises(OddDimension):
        pfaffian_skew(np.zeros((3, 3)))
    with pytest.raises(NotSkewSymmetric):
        pfaffian_skew(np.eye(2))


def test_pfaffian_of_zero():
    assert pfaffian_skew(np.zeros((6, 6))) == 0


def test_unitary_exp_matches_eigendecomposition(rng):
    H = hermitian(rng, 6) * 3.0
    values, vectors = np.linalg.eigh(H)
    expected = vectors @ np.diag(np.exp(1j * values)) @ vectors.conj().T
    U = unitary_exp(1j * H)
    np.testing.assert_allclose(U, expected, atol=1e-12)
    np.testing.assert_allclose(U @ U.conj().T, np.eye(6), atol=1e-12)


@pytest.mark.parametrize("t", [0.3, 2.0, 10.0])
def test_unitary_exp_of_rotation_generator(t):
    U = unitary_exp(np.array([[0, t], [-t, 0]], dtype=complex))
    np.testing.assert_allclose(U, [[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]], atol=1e-12)


def test_unitary_exp_rejects_hermitian(rng):
    with pytest.raises(NotAntiHermitian):
        unitary_exp(hermitian(rng, 3) + np.eye(3))


def test_tolerance_bound():
    tol = Tolerance(abs_eps=1e-10, rel_eps=1e-8)
    assert tol.bound(0.0) == 1e-10
    assert tol.bound(1.0) == 1e-10
    assert tol.bound(11.0) == pytest.approx(1e-10 + 1e-7)
    assert tol.allows(5e-11)
    assert not tol.allows(1e-9)


def test_tolerance_rejects_negative():
    with pytest.raises(ValueError):
        Tolerance(abs_eps=-1.0)
