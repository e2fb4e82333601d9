"""
Euclidean fermion action and the exact fermionic integral

The bilinear form B(psi, phi) = <J psi, D phi> = psi^T K* D phi is
antisymmetric in KO-dimension 2, so in a basis of the form
(e_1, J e_1, e_2, J e_2, ...) the integral is the Pfaffian of the matrix
of B. Its magnitude equals sqrt(det D).
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from src.numerics.linalg import (
    CMatrix,
    determinant,
    eig_hermitian,
    max_abs,
    pfaffian_skew,
    skew_residual,
)
from src.numerics.tolerance import Tolerance, DEFAULT_TOLERANCE
from src.product.product_triple import ProductTriple, blocks
from src.utils.errors import (
    DimensionMismatch,
    NegativeDeterminant,
    NotSkew,
    StructureError,
)
from src.utils.logger import logger

SKEW_TOLERANCE = 1e-9
DEGENERACY_TOLERANCE = 1e-8
CONDITION_THRESHOLD = 1e-12

@dataclass(frozen=True)
class FermionField:
    """Coordinates of Psi = (chi, xi) in the product basis"""
    psi: np.ndarray = field(repr=False)

    @property
    def chi(self) -> np.ndarray:
        return self.psi[:len(self.psi) // 2]

    @property
    def xi(self) -> np.ndarray:
        return self.psi[len(self.psi) // 2:]

    @classmethod
    def from_components(cls, chi: np.ndarray, xi: np.ndarray) -> 'FermionField':
        return cls(psi=np.concatenate([np.asarray(chi, dtype=np.complex128), np.asarray(xi, dtype=np.complex128)]))

@dataclass(frozen=True)
class CanonicalBasis:
    """Orthonormal columns e_1, J e_1, e_2, J e_2, ..."""
    vectors: CMatrix = field(repr=False)

    @property
    def size(self) -> int:
        return self.vectors.shape[1]

    def pair(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        return self.vectors[:, 2 * k], self.vectors[:, 2 * k + 1]

@dataclass(frozen=True)
class FermionIntegral:
    Z: float
    pfaffian: complex
    sqrt_det: float
    det: complex
    condition_flag: bool
    spectrum: Tuple[float, ...] = ()

def _check_field(t: ProductTriple, psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if psi.shape[0] != t.hilbert_dim:
        raise DimensionMismatch(f"Fermion field has {psi.shape[0]} components, expected {t.hilbert_dim}")
    return psi

def fermion_bilinear(t: ProductTriple, psi: np.ndarray, phi: np.ndarray, D: CMatrix) -> complex:
    """B(psi, phi) = <J psi, D phi>"""
    psi, phi = _check_field(t, psi), _check_field(t, phi)
    return complex(psi @ (t.K.conj().T @ (D @ phi)))

def fermion_action(t: ProductTriple, psi: FermionField, D: CMatrix) -> complex:
    """
    Euclidean action S = 1/2 <J Psi, D Psi>

    Args:
        t: Product triple
        psi: Fermion field
        D: Operator on H

    Returns:
        Complex action value
    """
    D = np.asarray(D, dtype=np.complex128)
    if D.shape != (t.hilbert_dim, t.hilbert_dim):
        raise DimensionMismatch(f"Operator has shape {D.shape}, expected ({t.hilbert_dim}, {t.hilbert_dim})")
    return 0.5 * fermion_bilinear(t, psi.psi, psi.psi, D)

def block_action(t: ProductTriple, psi: FermionField, D: CMatrix) -> complex:
    """Action of a block-diagonal D as 1/2 <J_M xi, D_11 chi> + 1/2 <J_M chi, D_22 xi>"""
    K_M = t.base.space.real_structure
    D11, _, _, D22 = blocks(np.asarray(D, dtype=np.complex128))
    chi, xi = psi.chi, psi.xi
    first = xi @ (K_M.conj().T @ (D11 @ chi))
    second = chi @ (K_M.conj().T @ (D22 @ xi))
    return complex(0.5 * (first + second))

def canonical_basis(t: ProductTriple, seed: Optional[int] = None) -> CanonicalBasis:
    """
    Orthonormal basis of J-pairs (v, J v)

    Candidates are the coordinate directions, or seeded Gaussian vectors when
    a seed is given. Each candidate is orthogonalized against the span built
    so far; nearly dependent candidates are skipped.

    Args:
        t: Product triple with J^2 = -1
        seed: Optional seed for random candidate vectors

    Returns:
        CanonicalBasis with hilbert_dim columns
    """
    K = t.K
    dim = t.hilbert_dim
    residual = max_abs(K @ K.conj() + np.eye(dim))
    if residual > DEGENERACY_TOLERANCE:
        raise StructureError(f"Real structure does not square to -1 (residual {residual:.3e})")

    rng = np.random.default_rng(seed) if seed is not None else None
    fallback = np.random.default_rng(0)

    def candidates():
        if rng is None:
            for k in range(dim):
                e = np.zeros(dim, dtype=np.complex128)
                e[k] = 1.0
                yield e
        while True:
            source = rng if rng is not None else fallback
            yield source.standard_normal(dim) + 1j * source.standard_normal(dim)

    basis = np.zeros((dim, dim), dtype=np.complex128)
    filled = 0
    for c in candidates():
        if filled >= dim:
            break
        span = basis[:, :filled]
        v = c - span @ (span.conj().T @ c)
        v = v - span @ (span.conj().T @ v)
        norm = np.linalg.norm(v)
        if norm <= DEGENERACY_TOLERANCE * np.linalg.norm(c):
            continue
        v = v / norm
        basis[:, filled] = v
        basis[:, filled + 1] = K @ v.conj()
        filled += 2

    logger.debug(f"Canonical basis: {dim} vectors, seed={seed}")
    return CanonicalBasis(vectors=basis)

def bilinear_matrix(t: ProductTriple, D: CMatrix, basis: CanonicalBasis) -> CMatrix:
    """A_ab = <J e_a, D e_b>"""
    E = basis.vectors
    return E.T @ t.K.conj().T @ D @ E

def fermion_integral(
    t: ProductTriple,
    D: CMatrix,
    tol: Tolerance = DEFAULT_TOLERANCE,
    seed: Optional[int] = None
) -> FermionIntegral:
    """
    Exact fermionic integral of a Dirac operator on the product triple

    Args:
        t: Product triple
        D: Hermitian operator with D = J D J^-1
        tol: Tolerance
        seed: Optional seed for the canonical basis

    Returns:
        FermionIntegral with Z = |Pf(A)|, the raw Pfaffian and sqrt(det D)
    """
    D = np.asarray(D, dtype=np.complex128)
    if D.shape != (t.hilbert_dim, t.hilbert_dim):
        raise DimensionMismatch(f"Operator has shape {D.shape}, expected ({t.hilbert_dim}, {t.hilbert_dim})")

    A = bilinear_matrix(t, D, canonical_basis(t, seed))
    residual = skew_residual(A)
    if residual > SKEW_TOLERANCE * max(1.0, max_abs(A)):
        raise NotSkew(f"Fermion bilinear is not antisymmetric (residual {residual:.3e})")
    pf = pfaffian_skew(0.5 * (A - A.T), tol)

    spectrum = eig_hermitian(D, tol)
    moduli = np.abs(np.asarray(spectrum, dtype=float))
    radius = float(moduli.max(initial=0.0))
    smallest = float(moduli.min(initial=0.0))
    det = determinant(D)
    # compared in log space, since radius ** dim overflows long before det does
    if det.real < 0 and np.log(-det.real) > np.log(tol.rel_eps) + t.hilbert_dim * np.log(max(1.0, radius)):
        raise NegativeDeterminant(f"det D = {det.real:.6e} is negative")

    sqrt_det = float(np.sqrt(max(det.real, 0.0)))
    condition_flag = smallest <= CONDITION_THRESHOLD * max(1.0, radius)
    if condition_flag:
        logger.warning(f"Near-singular Dirac operator: smallest |eigenvalue| {smallest:.3e}, spectral radius {radius:.3e}")

    logger.info(f"Fermion integral: Z={abs(pf):.6e}, sqrt(det D)={sqrt_det:.6e}")
    return FermionIntegral(
        Z=float(abs(pf)),
        pfaffian=complex(pf),
        sqrt_det=sqrt_det,
        det=complex(det),
        condition_flag=bool(condition_flag),
        spectrum=tuple(spectrum),
    )
