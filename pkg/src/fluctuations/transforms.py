"""
Gauge transformations and the chiral rotation of fluctuated Dirac operators
"""
import numpy as np

from src.geometry.matrix_geometry import membership_residual
from src.numerics.linalg import CMatrix, as_cmatrix, hermiticity_residual, max_abs
from src.numerics.tolerance import Tolerance, DEFAULT_TOLERANCE
from src.fluctuations.one_forms import (
    FluctuatedDirac,
    coefficient_distance,
    extract_coefficients,
    make_fluctuated,
)
from src.product.product_triple import (
    AlgebraElement,
    ProductTriple,
    adjoint_lie,
    gauge_operator,
)
from src.utils.errors import (
    DimensionMismatch,
    NotHermitian,
    NotInAlgebra,
    NumericalFailure,
)
from src.utils.logger import logger

def unitary_transform(t: ProductTriple, u: CMatrix, D: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> CMatrix:
    """
    Conjugate an operator by the gauge action of u

    Args:
        t: Product triple
        u: n x n unitary
        D: Operator on H
        tol: Tolerance for the unitarity check

    Returns:
        U D U^-1 with U = gauge_operator(u)
    """
    U = gauge_operator(t, u, tol)
    return U @ D @ U.conj().T

def real_gauge_transform(t: ProductTriple, fd: FluctuatedDirac, u: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> FluctuatedDirac:
    """
    Action of a real unitary u in O(n) or Sp(n/2) on the coefficients

    Every coefficient is conjugated, C -> u C u*, and no term changes type.

    Args:
        t: Product triple
        fd: Fluctuated operator
        u: Unitary in U(A_M)
        tol: Tolerance

    Returns:
        Transformed FluctuatedDirac
    """
    u = as_cmatrix(u)
    residual = membership_residual(t.kind, u)
    if not tol.allows(residual):
        raise NotInAlgebra('u', 0, residual)
    ud = u.conj().T

    def conj(group):
        return [u @ C @ ud for C in group]

    result = make_fluctuated(t, conj(fd.Lprime), conj(fd.Hprime), conj(fd.theta), conj(fd.ygrav))
    dense = unitary_transform(t, u, fd.assembled, tol)
    mismatch = max_abs(result.assembled - dense)
    if mismatch > tol.bound(max_abs(dense)):
        raise NumericalFailure(f"Coefficient gauge action disagrees with the dense conjugation ({mismatch:.3e})")
    return result

def infinitesimal_gauge(t: ProductTriple, y: CMatrix, fd: FluctuatedDirac, tol: Tolerance = DEFAULT_TOLERANCE) -> FluctuatedDirac:
    """
    First-order variation of fd under the imaginary gauge generator i*y

    Commutator coefficients become charged anticommutator coefficients and
    vice versa:

        theta_j -> [y, L'_j]     y_t -> [y, H'_t]
        L'_j    -> -[y, theta_j] H'_t -> -[y, y_t]

    The result is cross-checked against [adjoint_lie(i y), D].

    Args:
        t: Product triple
        y: Hermitian element of A_M
        fd: Fluctuated operator
        tol: Tolerance

    Returns:
        FluctuatedDirac holding the variation
    """
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != (t.kind.n, t.kind.n):
        raise DimensionMismatch(f"Expected {t.kind.n}x{t.kind.n} generator, got {y.shape}")
    residual = membership_residual(t.kind, y)
    if not tol.allows(residual, max_abs(y)):
        raise NotInAlgebra('y', 0, residual)
    residual = hermiticity_residual(y)
    if not tol.allows(residual, max_abs(y)):
        raise NotHermitian(f"Gauge generator is not Hermitian (residual {residual:.3e})")

    def bracket(C: CMatrix) -> CMatrix:
        return y @ C - C @ y

    delta = make_fluctuated(
        t,
        [-bracket(C) for C in fd.theta],
        [-bracket(C) for C in fd.ygrav],
        [bracket(C) for C in fd.Lprime],
        [bracket(C) for C in fd.Hprime],
    )

    zero = np.zeros_like(y)
    A = adjoint_lie(t, AlgebraElement(value=1j * y, x=zero, y=y), tol)
    dense = A @ fd.assembled - fd.assembled @ A
    mismatch = max_abs(delta.assembled - dense)
    if mismatch > tol.bound(max_abs(dense)):
        raise NumericalFailure(f"Infinitesimal gauge map disagrees with [ad(iy), D] ({mismatch:.3e})")
    logger.debug(f"Infinitesimal gauge variation: max |dD| = {max_abs(dense):.3e}")
    return delta

def rotation_operator(t: ProductTriple) -> CMatrix:
    """R = exp(i pi Gamma / 4) = (1 + i Gamma) / sqrt(2)"""
    return (np.eye(t.hilbert_dim) + 1j * t.Gamma) / np.sqrt(2.0)

def rotated_coefficients(t: ProductTriple, fd: FluctuatedDirac) -> FluctuatedDirac:
    """
    Coefficients of R D R^-1 predicted from the trigamma duality

    With gamma^j gamma^k gamma^l = eta gamma5 gamma^m the families exchange as
    L'_m -> y_t = eta L'_m, H'_t -> theta_m = eta H'_t,
    theta_m -> H'_t = -eta theta_m and y_t -> L'_m = -eta y_t.
    """
    n = t.kind.n
    zero = np.zeros((n, n), dtype=np.complex128)
    Lprime, Hprime, theta, ygrav = ([zero] * 4 for _ in range(4))
    for t_index, (m, eta) in enumerate(t.base.space.trigamma.dual_index):
        j = m - 1
        ygrav[t_index] = eta * fd.Lprime[j]
        theta[j] = eta * fd.Hprime[t_index]
        Hprime[t_index] = -eta * fd.theta[j]
        Lprime[j] = -eta * fd.ygrav[t_index]
    return make_fluctuated(t, Lprime, Hprime, theta, ygrav)

def chiral_rotate(t: ProductTriple, fd: FluctuatedDirac, tol: Tolerance = DEFAULT_TOLERANCE) -> FluctuatedDirac:
    """
    Conjugate by R = exp(i pi Gamma / 4)

    For an operator anticommuting with Gamma, R D R^-1 = i Gamma D. The
    rotated operator is re-extracted and compared against the predicted
    exchange of the (Sigma, X) and (Theta, Y) families.

    Args:
        t: Product triple
        fd: Fluctuated operator
        tol: Tolerance

    Returns:
        Re-extracted FluctuatedDirac of the rotated operator
    """
    R = rotation_operator(t)
    rotated = R @ fd.assembled @ R.conj().T
    result = extract_coefficients(t, rotated, tol)
    predicted = rotated_coefficients(t, fd)
    mismatch = coefficient_distance(result, predicted)
    if mismatch > tol.bound(max_abs(fd.assembled)):
        raise NumericalFailure(f"Chiral rotation does not exchange the fluctuation families ({mismatch:.3e})")
    logger.debug(f"Chiral rotation: extraction residual {result.residual:.2e}, mapping mismatch {mismatch:.2e}")
    return result
