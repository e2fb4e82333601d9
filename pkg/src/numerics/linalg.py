"""
Dense complex matrix kernels

All routines operate on 2-D complex128 numpy arrays and are implemented here
rather than delegated to LAPACK so that the sign and phase conventions of the
determinant and Pfaffian are fully controlled.
"""
import math
from typing import List, Tuple

import numpy as np

from src.config.settings import settings
from src.numerics.tolerance import Tolerance, DEFAULT_TOLERANCE
from src.utils.errors import (
    NotSquare,
    NotHermitian,
    NotAntiHermitian,
    NotSkewSymmetric,
    OddDimension,
    NumericalFailure,
)
from src.utils.logger import logger

CMatrix = np.ndarray

_EPS = np.finfo(float).eps

def as_cmatrix(M) -> CMatrix:
    """
    Coerce input to a finite 2-D complex matrix

    Args:
        M: Array-like matrix

    Returns:
        complex128 ndarray (a copy)
    """
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"Expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("Matrix has non-finite entries")
    return A

def max_abs(M: CMatrix) -> float:
    return float(np.max(np.abs(M))) if M.size else 0.0

def _require_square(M: CMatrix) -> None:
    if M.shape[0] != M.shape[1]:
        raise NotSquare(f"Matrix of shape {M.shape} is not square")

def hermiticity_residual(M: CMatrix) -> float:
    return max_abs(M - M.conj().T)

def anti_hermiticity_residual(M: CMatrix) -> float:
    return max_abs(M + M.conj().T)

def skew_residual(M: CMatrix) -> float:
    return max_abs(M + M.T)

def unitarity_residual(M: CMatrix) -> float:
    return max_abs(M @ M.conj().T - np.eye(M.shape[0]))

def _tridiagonalize(A: CMatrix) -> Tuple[np.ndarray, np.ndarray, CMatrix]:
    """
    Householder reduction of a Hermitian matrix to real symmetric tridiagonal form

    Returns:
        Tuple of (diagonal, subdiagonal padded with a trailing zero, Q) with A = Q T Q*
    """
    A = A.copy()
    n = A.shape[0]
    Q = np.eye(n, dtype=np.complex128)

    for k in range(n - 2):
        x = A[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha <= _EPS * (abs(A[k, k]) + alpha) or alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if abs(x[0]) > 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        A[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ A[k + 1:, :])
        A[:, k + 1:] -= 2.0 * np.outer(A[:, k + 1:] @ v, v.conj())
        Q[:, k + 1:] -= 2.0 * np.outer(Q[:, k + 1:] @ v, v.conj())

    # Rotate the complex subdiagonal onto the positive reals with a diagonal unitary
    d = np.real(np.diag(A)).copy()
    e = np.zeros(n)
    phase = 1.0 + 0.0j
    for k in range(n - 1):
        sub = A[k + 1, k]
        e[k] = abs(sub)
        if e[k] > 0:
            phase = phase * sub / e[k]
        Q[:, k + 1] *= phase
    return d, e, Q

def _implicit_ql(d: np.ndarray, e: np.ndarray, Q: CMatrix) -> None:
    """Implicit QL with Wilkinson-type shifts on (d, e), accumulating rotations into Q in place"""
    n = len(d)
    max_iter = settings.MAX_QL_ITERATIONS
    for l in range(n):
        iterations = 0
        while True:
            for m in range(l, n - 1):
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
            else:
                m = n - 1
            if m == l:
                break
            iterations += 1
            if iterations > max_iter:
                raise NumericalFailure(f"QL iteration did not converge for eigenvalue {l}")

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = Q[:, i + 1].copy()
                Q[:, i + 1] = s * Q[:, i] + c * col
                Q[:, i] = c * Q[:, i] - s * col
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

def eigh_hermitian(M: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[np.ndarray, CMatrix]:
    """
    Eigen-decomposition of a Hermitian matrix

    Args:
        M: Square Hermitian matrix
        tol: Tolerance for the Hermiticity precondition

    Returns:
        Tuple of (ascending real eigenvalues, unitary matrix of eigenvectors as columns)
    """
    M = np.asarray(M, dtype=np.complex128)
    _require_square(M)
    scale = max_abs(M)
    residual = hermiticity_residual(M)
    if not tol.allows(residual, scale):
        raise NotHermitian(f"Hermiticity deviation {residual:.3e} exceeds tolerance")
    H = 0.5 * (M + M.conj().T)

    d, e, Q = _tridiagonalize(H)
    _implicit_ql(d, e, Q)
    order = np.argsort(d, kind="stable")
    values = d[order]
    vectors = Q[:, order]

    reconstruction = max_abs(H - (vectors * values) @ vectors.conj().T)
    if reconstruction > 10.0 * tol.bound(scale):
        raise NumericalFailure(f"Eigen-decomposition reconstruction error {reconstruction:.3e}")
    logger.debug(f"eigh_hermitian: dim={M.shape[0]}, reconstruction={reconstruction:.2e}")
    return values, vectors

def eig_hermitian(M: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> List[float]:
    """
    Real eigenvalues of a Hermitian matrix, sorted ascending

    Args:
        M: Square Hermitian matrix
        tol: Tolerance for the Hermiticity precondition

    Returns:
        List of eigenvalues
    """
    values, _ = eigh_hermitian(M, tol)
    return [float(v) for v in values]

def determinant(M: CMatrix) -> complex:
    """
    Determinant via LU factorization with partial pivoting

    Args:
        M: Square matrix

    Returns:
        det(M)
    """
    A = np.array(M, dtype=np.complex128)
    _require_square(A)
    n = A.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if A[p, k] == 0:
            return 0.0 + 0.0j
        if p != k:
            A[[k, p], :] = A[[p, k], :]
            det = -det
        pivot = A[k, k]
        det *= pivot
        if k + 1 < n:
            A[k + 1:, k] /= pivot
            A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:])
    return complex(det)

def pfaffian_skew(M: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> complex:
    """
    Pfaffian of a complex skew-symmetric matrix

    Uses Parlett-Reid style tridiagonalization with partial pivoting. Every
    row/column interchange flips the sign of the result.

    Args:
        M: Even-dimensional matrix with M^T = -M (no conjugation)
        tol: Tolerance for the skew-symmetry precondition

    Returns:
        Pf(M)
    """
    A = np.array(M, dtype=np.complex128)
    _require_square(A)
    n = A.shape[0]
    if n % 2:
        raise OddDimension(f"Pfaffian needs even dimension, got {n}")
    residual = skew_residual(A)
    if not tol.allows(residual, max_abs(A)):
        raise NotSkewSymmetric(f"Skew-symmetry deviation {residual:.3e} exceeds tolerance")
    A = 0.5 * (A - A.T)

    pf = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            pf = -pf
        if A[k + 1, k] == 0:
            return 0.0 + 0.0j
        pf *= A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2:] / A[k, k + 1]
            A[k + 2:, k + 2:] += np.outer(tau, A[k + 2:, k + 1]) - np.outer(A[k + 2:, k + 1], tau)
    if not np.isfinite(pf):
        raise NumericalFailure("Pfaffian overflowed")
    return complex(pf)

def unitary_exp(A: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> CMatrix:
    """
    Exponential of an anti-Hermitian matrix by scaling and squaring

    Args:
        A: Square anti-Hermitian matrix
        tol: Tolerance for the anti-Hermiticity precondition

    Returns:
        exp(A), a unitary matrix
    """
    A = np.asarray(A, dtype=np.complex128)
    _require_square(A)
    residual = anti_hermiticity_residual(A)
    if not tol.allows(residual, max_abs(A)):
        raise NotAntiHermitian(f"Anti-Hermiticity deviation {residual:.3e} exceeds tolerance")
    A = 0.5 * (A - A.conj().T)

    n = A.shape[0]
    norm = float(np.max(np.sum(np.abs(A), axis=1)))
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    B = A / (2.0 ** squarings)

    result = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, 30):
        term = term @ B / k
        result = result + term
        if max_abs(term) < _EPS:
            break
    for _ in range(squarings):
        result = result @ result
    return result
