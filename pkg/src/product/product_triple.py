"""
Product of a (0,4) matrix geometry with the U(1) internal space

Dense operators on H = C^4 (x) M_n(C) (x) C^2 store the internal C^2 index
as the outer block index, so operators of the form X (x) diag(a, b) appear
as blockdiag(a X, b X) and a fermion field is the concatenation (chi, xi).
"""
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from src.geometry.axioms import AxiomReport, check_axioms, conjugate_antilinear
from src.geometry.clifford import ko_sign_table
from src.geometry.matrix_geometry import (
    AlgebraKind,
    AlgebraTag,
    MatrixGeometry,
    algebra_basis,
    assemble_dirac,
    membership_residual,
    quaternionic_conjugate,
)
from src.numerics.linalg import (
    CMatrix,
    anti_hermiticity_residual,
    hermiticity_residual,
    max_abs,
    unitarity_residual,
)
from src.numerics.tolerance import Tolerance, DEFAULT_TOLERANCE
from src.utils.errors import (
    DimensionMismatch,
    NotLieAlgebraElement,
    NotUnitary,
    StructureError,
    UnsupportedAlgebra,
)
from src.utils.logger import logger

def blockdiag(A: CMatrix, B: CMatrix) -> CMatrix:
    """Two-block operator on the internal grading"""
    n, m = A.shape[0], B.shape[0]
    out = np.zeros((n + m, n + m), dtype=np.complex128)
    out[:n, :n] = A
    out[n:, n:] = B
    return out

def blocks(D: CMatrix) -> Tuple[CMatrix, CMatrix, CMatrix, CMatrix]:
    """Split an operator on H into its internal blocks (11, 12, 21, 22)"""
    h = D.shape[0] // 2
    return D[:h, :h], D[:h, h:], D[h:, :h], D[h:, h:]

@dataclass(frozen=True)
class InternalTriple:
    """The s=6 spectral triple (C, C^2, 0) with J_F(e, p) = (conj p, conj e)"""
    K_F: CMatrix = field(default_factory=lambda: np.array([[0, 1], [1, 0]], dtype=np.complex128), repr=False)
    Gamma_F: CMatrix = field(default_factory=lambda: np.diag([1.0, -1.0]).astype(np.complex128), repr=False)
    D_F: CMatrix = field(default_factory=lambda: np.zeros((2, 2), dtype=np.complex128), repr=False)
    s_F: int = 6
    hilbert_dim: int = 2

    @staticmethod
    def rep(kappa: complex) -> CMatrix:
        return np.diag([kappa, np.conj(kappa)]).astype(np.complex128)

    @staticmethod
    def right_rep(kappa: complex) -> CMatrix:
        return np.diag([np.conj(kappa), kappa]).astype(np.complex128)

def verify_internal_triple(internal: InternalTriple = None, tol: Tolerance = DEFAULT_TOLERANCE) -> AxiomReport:
    """Run the shared axiom engine on the internal triple over the real basis {1, i}"""
    internal = internal or InternalTriple()
    basis = [1.0, 1j]
    return check_axioms(
        internal.D_F,
        internal.K_F,
        ko_sign_table(internal.s_F)[1],
        [internal.rep(k) for k in basis],
        [internal.right_rep(k) for k in basis],
        Gamma=internal.Gamma_F,
        tol=tol,
    )

@dataclass(frozen=True)
class AlgebraElement:
    """Element a = x + i y of A_M (x) C with x, y in A_M"""
    value: CMatrix = field(repr=False)
    x: CMatrix = field(repr=False)
    y: CMatrix = field(repr=False)

    @property
    def bar(self) -> CMatrix:
        return self.x - 1j * self.y

@dataclass(frozen=True)
class ProductTriple:
    """KO-dimension 2 product triple with vacuum Dirac operator D_M (x) 1_F"""
    base: MatrixGeometry
    internal: InternalTriple
    K: CMatrix = field(repr=False)
    Gamma: CMatrix = field(repr=False)
    D0: CMatrix = field(repr=False)
    D_M: CMatrix = field(repr=False)
    s: int = 2
    eps_prime: int = 1

    @property
    def kind(self) -> AlgebraKind:
        return self.base.space.algebra

    @property
    def hilbert_dim(self) -> int:
        return 2 * self.base.space.hilbert_dim

    def apply_J(self, psi: np.ndarray) -> np.ndarray:
        return self.K @ np.conj(psi)

    def conjugate_by_J(self, A: CMatrix) -> CMatrix:
        return conjugate_antilinear(self.K, A)

def build_product_triple(geom: MatrixGeometry, tol: Tolerance = DEFAULT_TOLERANCE) -> ProductTriple:
    """
    Take the product of a matrix geometry with the U(1) internal space

    Args:
        geom: Base geometry over M_n(R) or M_{n/2}(H)
        tol: Tolerance for the structure checks

    Returns:
        ProductTriple
    """
    space = geom.space
    if space.algebra.tag is AlgebraTag.ComplexMat:
        raise UnsupportedAlgebra("The product with the U(1) internal space needs a RealMat or QuatMat base")

    internal = InternalTriple()
    D_M = assemble_dirac(geom)
    K = np.kron(internal.K_F, space.real_structure)
    Gamma = np.kron(internal.Gamma_F, space.chirality)
    D0 = np.kron(np.eye(2), D_M)
    s = (space.clifford.s + internal.s_F) % 8
    eps, eps_prime, _ = ko_sign_table(s)

    dim = D0.shape[0]
    identity = np.eye(dim)
    checks = {
        'Gamma^2 = I': max_abs(Gamma @ Gamma - identity),
        'Gamma Hermitian': hermiticity_residual(Gamma),
        'J^2 = eps': max_abs(K @ K.conj() - eps * identity),
        'D0 Gamma + Gamma D0 = 0': max_abs(D0 @ Gamma + Gamma @ D0),
        'D0 = eps\' J D0 J^-1': max_abs(D0 - eps_prime * conjugate_antilinear(K, D0)),
    }
    bound = tol.bound(max_abs(D0))
    for name, residual in checks.items():
        if residual > bound:
            raise StructureError(f"Product triple invariant '{name}' fails (residual {residual:.3e})")
    if s != 2 or eps != -1:
        raise StructureError(f"Product KO-dimension is {s}, expected 2")

    logger.info(f"Built product triple: n={space.n}, algebra={space.algebra.code}, dim={dim}, s={s}")
    return ProductTriple(base=geom, internal=internal, K=K, Gamma=Gamma, D0=D0, D_M=D_M, s=s, eps_prime=eps_prime)

def split_element(a: CMatrix, kind: AlgebraKind, tol: Tolerance = DEFAULT_TOLERANCE) -> AlgebraElement:
    """
    Write a in M_n(C) as x + i y with x, y in A_M

    Args:
        a: n x n complex matrix
        kind: RealMat or QuatMat
        tol: Tolerance for the reconstruction check

    Returns:
        AlgebraElement
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (kind.n, kind.n):
        raise DimensionMismatch(f"Expected {kind.n}x{kind.n} element, got {a.shape}")
    if kind.tag is AlgebraTag.RealMat:
        x = a.real.astype(np.complex128)
        y = a.imag.astype(np.complex128)
    elif kind.tag is AlgebraTag.QuatMat:
        qc = quaternionic_conjugate(a)
        x = 0.5 * (a + qc)
        y = (a - qc) / 2j
    else:
        raise UnsupportedAlgebra("M_n(C) (x) C has no real/imaginary splitting over A_M")
    residual = max_abs(x + 1j * y - a)
    if not tol.allows(residual, max_abs(a)):
        raise StructureError(f"Split reconstruction residual {residual:.3e}")
    return AlgebraElement(value=a, x=x, y=y)

def represent_element(t: ProductTriple, a: AlgebraElement) -> Tuple[CMatrix, CMatrix]:
    """
    Left and right representations on the product Hilbert space

    Returns:
        Tuple (blockdiag(l_M(a), l_M(a_bar)), blockdiag(r_M(a_bar), r_M(a)))
    """
    space = t.base.space
    left = blockdiag(space.left_rep(a.value), space.left_rep(a.bar))
    right = blockdiag(space.right_rep(a.bar), space.right_rep(a.value))
    return left, right

def gauge_operator(t: ProductTriple, u: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> CMatrix:
    """
    Adjoint action l(u) r(u^-1) of a unitary u in U(n)

    Args:
        t: Product triple
        u: n x n unitary matrix
        tol: Tolerance for the unitarity check

    Returns:
        Dense unitary operator on H
    """
    u = np.asarray(u, dtype=np.complex128)
    residual = unitarity_residual(u)
    if not tol.allows(residual):
        raise NotUnitary(f"Gauge element is not unitary (residual {residual:.3e})")
    left, _ = represent_element(t, split_element(u, t.kind, tol))
    _, right_inverse = represent_element(t, split_element(u.conj().T, t.kind, tol))
    return left @ right_inverse

def adjoint_lie(t: ProductTriple, a: AlgebraElement, tol: Tolerance = DEFAULT_TOLERANCE) -> CMatrix:
    """
    Lie-algebra adjoint action l(a) + r(a*) for a = x + i y, x* = -x, y* = y

    Args:
        t: Product triple
        a: Lie-algebra element
        tol: Tolerance

    Returns:
        blockdiag([x, .] + i{y, .}, [x, .] - i{y, .}) as a dense operator
    """
    x_res = anti_hermiticity_residual(a.x)
    y_res = hermiticity_residual(a.y)
    if not tol.allows(x_res, max_abs(a.x)) or not tol.allows(y_res, max_abs(a.y)):
        raise NotLieAlgebraElement(f"Not in the unitary Lie algebra (x residual {x_res:.3e}, y residual {y_res:.3e})")
    left, _ = represent_element(t, a)
    _, right_adjoint = represent_element(t, split_element(a.value.conj().T, t.kind, tol))
    return left + right_adjoint

def charge_operator(t: ProductTriple, kappa: complex) -> CMatrix:
    """Gauge action of the internal U(1) element 1 (x) kappa, diag(kappa^2, kappa^-2) on the blocks"""
    return gauge_operator(t, kappa * np.eye(t.kind.n))

def is_real_unitary(kind: AlgebraKind, u: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """True if u lies in U(A_M), i.e. O(n) or Sp(n/2)"""
    return membership_residual(kind, np.asarray(u, dtype=np.complex128)) <= tol.abs_eps

def lie_bracket_residual(kind: AlgebraKind, y1: CMatrix, y2: CMatrix) -> float:
    """Membership residual of [i y1, i y2]; two imaginary elements bracket to a real one"""
    a, b = 1j * np.asarray(y1), 1j * np.asarray(y2)
    return membership_residual(kind, a @ b - b @ a)

GAUGE_GROUPS = {
    AlgebraTag.RealMat: ('O(n)', 'PO(n)'),
    AlgebraTag.QuatMat: ('Sp(n/2)', 'PSp(n/2)'),
    AlgebraTag.ComplexMat: ('U(n)', 'PU(n)'),
}

def gauge_group_summary(kind: AlgebraKind) -> Dict[str, str]:
    unitaries, geometry_group = GAUGE_GROUPS[kind.tag]
    return {
        'unitaries_of_A_M': unitaries,
        'matrix_geometry_gauge_group': geometry_group,
        'product_gauge_group': 'U(n)/Z2' if kind.tag is not AlgebraTag.ComplexMat else 'unsupported',
        'n': str(kind.n),
    }

def real_algebra_elements(t: ProductTriple) -> list:
    """Real spanning set of A_M (x) C as split elements"""
    basis = algebra_basis(t.kind)
    zero = np.zeros((t.kind.n, t.kind.n), dtype=np.complex128)
    elements = [AlgebraElement(value=b, x=b, y=zero) for b in basis]
    elements += [AlgebraElement(value=1j * b, x=zero, y=b) for b in basis]
    return elements

def verify_product_axioms(t: ProductTriple, D: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> AxiomReport:
    """
    Full product-triple axiom suite for an operator on H

    Args:
        t: Product triple
        D: Candidate Dirac operator
        tol: Tolerance

    Returns:
        AxiomReport
    """
    reps = [represent_element(t, a) for a in real_algebra_elements(t)]
    return check_axioms(
        D,
        t.K,
        t.eps_prime,
        [left for left, _ in reps],
        [right for _, right in reps],
        Gamma=t.Gamma,
        tol=tol,
    )
