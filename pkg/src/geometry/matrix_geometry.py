"""
Matrix geometries of type (0,4) over real matrix algebras

Vectorization convention: M_n(C) is flattened row-major, so left
multiplication by A is kron(A, I) and right multiplication by B is
kron(I, B^T). The Hilbert space V (x) M_n(C) uses index alpha*n^2 + i*n + j.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from src.geometry.clifford import (
    CliffordModule,
    TrigammaBasis,
    build_clifford_module,
    trigamma_products,
)
from src.numerics.linalg import (
    CMatrix,
    anti_hermiticity_residual,
    as_cmatrix,
    hermiticity_residual,
    max_abs,
)
from src.numerics.tolerance import Tolerance, DEFAULT_TOLERANCE
from src.utils.errors import (
    DimensionMismatch,
    InvalidConfig,
    NonAntiHermitianCoefficient,
    NonHermitianCoefficient,
    NotInAlgebra,
)
from src.utils.logger import logger

class AlgebraTag(Enum):
    """Real matrix algebra families, valued by their file codes"""
    RealMat = 'R'
    QuatMat = 'H'
    ComplexMat = 'C'

@dataclass(frozen=True)
class AlgebraKind:
    """M_n(R), M_{n/2}(H) or M_n(C), all as real algebras inside M_n(C)"""
    tag: AlgebraTag
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidConfig(f"Matrix size must be positive, got n={self.n}")
        if self.tag is AlgebraTag.QuatMat and self.n % 2:
            raise InvalidConfig(f"QuatMat requires even n, got n={self.n}")

    @classmethod
    def from_code(cls, code: str, n: int) -> 'AlgebraKind':
        try:
            tag = AlgebraTag(code)
        except ValueError:
            raise InvalidConfig(f"Unknown algebra code '{code}' (expected R, H or C)")
        return cls(tag, n)

    @property
    def code(self) -> str:
        return self.tag.value

# Symplectic structure for the quaternionic embedding

def symplectic_form(n: int) -> CMatrix:
    """Block-diagonal Omega with 2x2 blocks [[0, 1], [-1, 0]]"""
    block = np.array([[0, 1], [-1, 0]], dtype=np.complex128)
    return np.kron(np.eye(n // 2), block)

def quaternionic_conjugate(M: CMatrix) -> CMatrix:
    """Omega conj(M) Omega^-1, whose fixed points form M_{n/2}(H)"""
    omega = symplectic_form(M.shape[0])
    return omega @ M.conj() @ omega.T

def membership_residual(kind: AlgebraKind, M: CMatrix) -> float:
    if M.shape != (kind.n, kind.n):
        raise DimensionMismatch(f"Expected {kind.n}x{kind.n} matrix, got {M.shape}")
    if kind.tag is AlgebraTag.RealMat:
        return max_abs(M.imag)
    if kind.tag is AlgebraTag.QuatMat:
        return max_abs(quaternionic_conjugate(M) - M)
    return 0.0

def algebra_membership(kind: AlgebraKind, M: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """
    Test whether a complex matrix lies in the real algebra A_M

    Args:
        kind: Algebra kind
        M: n x n matrix
        tol: Tolerance (absolute part is used)

    Returns:
        True if M is a member within tolerance
    """
    return membership_residual(kind, np.asarray(M, dtype=np.complex128)) <= tol.abs_eps

def project_to_algebra(kind: AlgebraKind, M: CMatrix) -> CMatrix:
    """Real-linear projection of M_n(C) onto A_M"""
    if kind.tag is AlgebraTag.RealMat:
        return M.real.astype(np.complex128)
    if kind.tag is AlgebraTag.QuatMat:
        return 0.5 * (M + quaternionic_conjugate(M))
    return np.array(M, dtype=np.complex128)

def project_anti_hermitian(kind: AlgebraKind, M: CMatrix) -> CMatrix:
    A = project_to_algebra(kind, M)
    return 0.5 * (A - A.conj().T)

def project_hermitian(kind: AlgebraKind, M: CMatrix) -> CMatrix:
    A = project_to_algebra(kind, M)
    return 0.5 * (A + A.conj().T)

def algebra_basis(kind: AlgebraKind) -> List[CMatrix]:
    """
    Canonical real basis of A_M as complex n x n matrices

    RealMat: matrix units E_ij. QuatMat: the quaternion units 1, i, j, k
    placed in each 2x2 block. ComplexMat: E_ij and i*E_ij.
    """
    n = kind.n
    basis = []
    if kind.tag is AlgebraTag.QuatMat:
        units = [
            np.eye(2, dtype=np.complex128),
            np.array([[1j, 0], [0, -1j]]),
            np.array([[0, 1], [-1, 0]], dtype=np.complex128),
            np.array([[0, 1j], [1j, 0]]),
        ]
        for r in range(n // 2):
            for c in range(n // 2):
                for unit in units:
                    M = np.zeros((n, n), dtype=np.complex128)
                    M[2 * r:2 * r + 2, 2 * c:2 * c + 2] = unit
                    basis.append(M)
        return basis
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n), dtype=np.complex128)
            E[i, j] = 1.0
            basis.append(E)
    if kind.tag is AlgebraTag.ComplexMat:
        basis += [1j * E for E in basis]
    return basis

# Operators on vectorized M_n(C)

def left_mult(A: CMatrix) -> CMatrix:
    return np.kron(A, np.eye(A.shape[0]))

def right_mult(A: CMatrix) -> CMatrix:
    return np.kron(np.eye(A.shape[0]), A.T)

def commutator_op(A: CMatrix) -> CMatrix:
    """[A, .] = A (x) I - I (x) A^T"""
    return left_mult(A) - right_mult(A)

def anticommutator_op(A: CMatrix) -> CMatrix:
    """{A, .} = A (x) I + I (x) A^T"""
    return left_mult(A) + right_mult(A)

def transpose_permutation(n: int) -> CMatrix:
    """Permutation P with P vec(m) = vec(m^T)"""
    index = np.arange(n * n).reshape(n, n).T.reshape(-1)
    return np.eye(n * n, dtype=np.complex128)[index]

@dataclass(frozen=True)
class FermionSpace:
    """Matrix-geometry data without the Dirac operator"""
    clifford: CliffordModule
    algebra: AlgebraKind
    trigamma: TrigammaBasis = field(repr=False)

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def hilbert_dim(self) -> int:
        return self.clifford.dimV * self.n ** 2

    @property
    def real_structure(self) -> CMatrix:
        """Unitary part K of J(v (x) m) = Cv (x) m*"""
        return np.kron(self.clifford.conjC, transpose_permutation(self.n))

    @property
    def chirality(self) -> CMatrix:
        return np.kron(self.clifford.gamma5, np.eye(self.n ** 2))

    def left_rep(self, a: CMatrix) -> CMatrix:
        return np.kron(np.eye(self.clifford.dimV), left_mult(a))

    def right_rep(self, a: CMatrix) -> CMatrix:
        return np.kron(np.eye(self.clifford.dimV), right_mult(a))

def build_fermion_space(kind: AlgebraKind, p: int = 0, q: int = 4) -> FermionSpace:
    """
    Fermion space V (x) M_n(C) for a four-generator Clifford module

    Args:
        kind: Algebra kind
        p, q: Clifford signature, (0, 4) by default

    Returns:
        FermionSpace
    """
    clifford = build_clifford_module(p, q)
    return FermionSpace(clifford=clifford, algebra=kind, trigamma=trigamma_products(clifford))

@dataclass(frozen=True)
class DiracData:
    """Coefficients L_j (anti-Hermitian) and H_jkl (Hermitian) in A_M"""
    L: Tuple[CMatrix, ...] = field(repr=False)
    H: Tuple[CMatrix, ...] = field(repr=False)

@dataclass(frozen=True)
class MatrixGeometry:
    space: FermionSpace
    dirac: DiracData

def check_coefficients(
    kind: AlgebraKind,
    groups: Sequence[Tuple[str, Sequence[CMatrix], bool]],
    tol: Tolerance = DEFAULT_TOLERANCE
) -> None:
    """
    Validate named coefficient families against A_M and their Hermiticity class

    Membership is checked for every matrix before any class check.

    Args:
        kind: Algebra kind
        groups: (name, matrices, hermitian) triples; hermitian=False asks for anti-Hermitian
        tol: Tolerance
    """
    for which, group, _ in groups:
        for index, M in enumerate(group):
            residual = membership_residual(kind, M)
            if not tol.allows(residual, max_abs(M)):
                raise NotInAlgebra(which, index, residual)

    for which, group, hermitian in groups:
        for index, M in enumerate(group):
            if hermitian:
                residual = hermiticity_residual(M)
                if not tol.allows(residual, max_abs(M)):
                    raise NonHermitianCoefficient(which, index, residual)
            else:
                residual = anti_hermiticity_residual(M)
                if not tol.allows(residual, max_abs(M)):
                    raise NonAntiHermitianCoefficient(which, index, residual)

def build_dirac_data(
    L: Sequence[CMatrix],
    H: Sequence[CMatrix],
    space: FermionSpace,
    tol: Tolerance = DEFAULT_TOLERANCE
) -> DiracData:
    """
    Validate and package the coefficient matrices of a Dirac operator

    Membership in A_M is checked for all eight matrices before the
    Hermiticity classes.

    Args:
        L: Four anti-Hermitian matrices
        H: Four Hermitian matrices, in trigamma triple order
        space: Fermion space
        tol: Tolerance

    Returns:
        Validated DiracData
    """
    n = space.n
    if len(L) != 4 or len(H) != 4:
        raise DimensionMismatch(f"Expected 4 L and 4 H matrices, got {len(L)} and {len(H)}")
    L = tuple(as_cmatrix(M) for M in L)
    H = tuple(as_cmatrix(M) for M in H)
    for which, group in (('L', L), ('H', H)):
        for index, M in enumerate(group):
            if M.shape != (n, n):
                raise DimensionMismatch(f"{which}[{index}] has shape {M.shape}, expected ({n}, {n})")

    check_coefficients(space.algebra, [('L', L, False), ('H', H, True)], tol)
    return DiracData(L=L, H=H)

def assemble_operator(
    space: FermionSpace,
    commutator_coeffs: Sequence[CMatrix],
    anticommutator_coeffs: Sequence[CMatrix],
    swap: bool = False
) -> CMatrix:
    """
    Dense operator sum_j gamma^j (x) [A_j, .] + sum_t trigamma_t (x) {B_t, .}

    With swap=True the bracket types are exchanged, giving
    sum_j gamma^j (x) {A_j, .} + sum_t trigamma_t (x) [B_t, .].
    """
    vector_bracket, triple_bracket = (anticommutator_op, commutator_op) if swap else (commutator_op, anticommutator_op)
    dim = space.hilbert_dim
    D = np.zeros((dim, dim), dtype=np.complex128)
    for gamma, A in zip(space.clifford.gammas, commutator_coeffs):
        D += np.kron(gamma, vector_bracket(A))
    for product, B in zip(space.trigamma.products, anticommutator_coeffs):
        D += np.kron(product, triple_bracket(B))
    return D

def assemble_dirac(geom: MatrixGeometry) -> CMatrix:
    """
    Dense Dirac operator of a (0,4) matrix geometry

    Args:
        geom: Matrix geometry

    Returns:
        (4n^2) x (4n^2) Hermitian matrix
    """
    return assemble_operator(geom.space, geom.dirac.L, geom.dirac.H)

def sample_random_geometry(
    kind: AlgebraKind,
    scale: float,
    seed: int,
    space: FermionSpace = None
) -> MatrixGeometry:
    """
    Draw a random geometry with Gaussian coefficients

    Entries are complex Gaussian with standard deviation `scale` in both the
    real and imaginary parts, then projected onto the anti-Hermitian (L) or
    Hermitian (H) members of A_M. Deterministic in `seed`.

    Args:
        kind: Algebra kind
        scale: Standard deviation of the entries
        seed: Seed for numpy's default_rng
        space: Optional prebuilt fermion space

    Returns:
        MatrixGeometry
    """
    if scale < 0:
        raise InvalidConfig(f"Scale must be nonnegative, got {scale}")
    space = space or build_fermion_space(kind)
    rng = np.random.default_rng(seed)
    n = kind.n

    def draw() -> CMatrix:
        return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))

    L = [project_anti_hermitian(kind, draw()) for _ in range(4)]
    H = [project_hermitian(kind, draw()) for _ in range(4)]
    logger.debug(f"Sampled {kind.code} geometry: n={n}, scale={scale}, seed={seed}")
    return MatrixGeometry(space=space, dirac=DiracData(L=tuple(L), H=tuple(H)))
