"""
Connes one-forms and the fluctuated Dirac operator of the product triple

A fluctuation of D0 = D_M (x) 1_F has the block form

    blockdiag(D'_M + T, D'_M - T),  T = Theta + Y

where D'_M carries the real coefficients (L' = L + sigma, H' = H + x) and the
charged part is Theta = gamma^j (x) {i theta_j, .} and Y = trigamma_t (x) [i y_t, .].
"""
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from src.geometry.matrix_geometry import (
    FermionSpace,
    assemble_operator,
    left_mult,
)
from src.numerics.linalg import (
    CMatrix,
    anti_hermiticity_residual,
    hermiticity_residual,
    max_abs,
)
from src.numerics.tolerance import Tolerance, DEFAULT_TOLERANCE
from src.product.product_triple import (
    AlgebraElement,
    ProductTriple,
    blockdiag,
    blocks,
    represent_element,
    split_element,
)
from src.utils.errors import (
    DimensionMismatch,
    InvalidConfig,
    NonHermitianOneForm,
    NotInSpan,
    NumericalFailure,
)
from src.utils.logger import logger

@dataclass(frozen=True)
class OneFormGenerators:
    """Pairs (a_m, b_m) defining omega = sum_m l(a_m) [D0, l(b_m)]"""
    pairs: Tuple[Tuple[AlgebraElement, AlgebraElement], ...]

@dataclass(frozen=True)
class FluctuationCoefficients:
    """Lambda_j = sigma_j + i theta_j and Lambda_t = x_t + i y_t"""
    Lambda_j: Tuple[CMatrix, ...] = field(repr=False)
    Lambda_t: Tuple[CMatrix, ...] = field(repr=False)
    sigma: Tuple[CMatrix, ...] = field(repr=False)
    theta: Tuple[CMatrix, ...] = field(repr=False)
    x: Tuple[CMatrix, ...] = field(repr=False)
    y: Tuple[CMatrix, ...] = field(repr=False)

@dataclass(frozen=True)
class FluctuatedDirac:
    """Coefficients of a fluctuated product Dirac operator and its dense form"""
    Lprime: Tuple[CMatrix, ...] = field(repr=False)
    Hprime: Tuple[CMatrix, ...] = field(repr=False)
    theta: Tuple[CMatrix, ...] = field(repr=False)
    ygrav: Tuple[CMatrix, ...] = field(repr=False)
    assembled: CMatrix = field(repr=False)
    residual: float = 0.0

def build_generators(t: ProductTriple, pairs: Sequence[Tuple[CMatrix, CMatrix]], tol: Tolerance = DEFAULT_TOLERANCE) -> OneFormGenerators:
    """
    Validate raw (a, b) matrix pairs and split them over A_M

    Args:
        t: Product triple
        pairs: Non-empty list of n x n complex matrix pairs
        tol: Tolerance

    Returns:
        OneFormGenerators
    """
    if not pairs:
        raise InvalidConfig("A one-form needs at least one (a, b) pair")
    split = []
    for index, (a, b) in enumerate(pairs):
        try:
            split.append((split_element(a, t.kind, tol), split_element(b, t.kind, tol)))
        except DimensionMismatch as e:
            raise DimensionMismatch(f"pairs[{index}]: {e}")
    return OneFormGenerators(pairs=tuple(split))

def unitary_one_form(t: ProductTriple, u: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> OneFormGenerators:
    """Generator list [(u, u*)] whose fluctuation of D0 equals conjugation by the gauge operator of u"""
    u = np.asarray(u, dtype=np.complex128)
    return build_generators(t, [(u, u.conj().T)], tol)

def manifold_operator(space: FermionSpace, Lprime: Sequence[CMatrix], Hprime: Sequence[CMatrix]) -> CMatrix:
    return assemble_operator(space, Lprime, Hprime)

def charged_operator(space: FermionSpace, theta: Sequence[CMatrix], ygrav: Sequence[CMatrix]) -> CMatrix:
    """T = gamma^j (x) {i theta_j, .} + trigamma_t (x) [i y_t, .]"""
    return assemble_operator(space, [1j * m for m in theta], [1j * m for m in ygrav], swap=True)

def assemble_fluctuated(
    space: FermionSpace,
    Lprime: Sequence[CMatrix],
    Hprime: Sequence[CMatrix],
    theta: Sequence[CMatrix],
    ygrav: Sequence[CMatrix]
) -> CMatrix:
    D_prime = manifold_operator(space, Lprime, Hprime)
    T = charged_operator(space, theta, ygrav)
    return blockdiag(D_prime + T, D_prime - T)

def make_fluctuated(t: ProductTriple, Lprime, Hprime, theta, ygrav, residual: float = 0.0) -> FluctuatedDirac:
    parts = [tuple(np.asarray(m, dtype=np.complex128) for m in group) for group in (Lprime, Hprime, theta, ygrav)]
    return FluctuatedDirac(*parts, assembled=assemble_fluctuated(t.base.space, *parts), residual=residual)

def vacuum(t: ProductTriple) -> FluctuatedDirac:
    """Unfluctuated D0 in coefficient form"""
    zeros = [np.zeros((t.kind.n, t.kind.n), dtype=np.complex128)] * 4
    return make_fluctuated(t, t.base.dirac.L, t.base.dirac.H, zeros, zeros)

def connes_one_form(
    t: ProductTriple,
    gen: OneFormGenerators,
    symmetrize: bool = True,
    tol: Tolerance = DEFAULT_TOLERANCE
) -> FluctuationCoefficients:
    """
    Coefficients of the one-form omega = sum_m l(a_m) [D0, l(b_m)]

    Since the base coefficients lie in A_M, omega is gamma^j (x) l(Lambda_j) +
    trigamma_t (x) l(Lambda_t) on the first internal block, with
    Lambda = sum_m a_m [coefficient, b_m].

    Args:
        t: Product triple
        gen: One-form generators
        symmetrize: Replace omega by (omega + omega*)/2; when False a
            non-Hermitian omega raises NonHermitianOneForm
        tol: Tolerance

    Returns:
        FluctuationCoefficients
    """
    Lambda_j, Lambda_t = [], []
    for group, target in ((t.base.dirac.L, Lambda_j), (t.base.dirac.H, Lambda_t)):
        for C in group:
            total = np.zeros_like(C)
            for a, b in gen.pairs:
                total = total + a.value @ (C @ b.value - b.value @ C)
            target.append(total)

    if symmetrize:
        Lambda_j = [0.5 * (M - M.conj().T) for M in Lambda_j]
        Lambda_t = [0.5 * (M + M.conj().T) for M in Lambda_t]
    else:
        for index, M in enumerate(Lambda_j):
            residual = anti_hermiticity_residual(M)
            if not tol.allows(residual, max_abs(M)):
                raise NonHermitianOneForm(f"Lambda_j[{index}] is not anti-Hermitian (residual {residual:.3e})")
        for index, M in enumerate(Lambda_t):
            residual = hermiticity_residual(M)
            if not tol.allows(residual, max_abs(M)):
                raise NonHermitianOneForm(f"Lambda_t[{index}] is not Hermitian (residual {residual:.3e})")

    sigma, theta = zip(*[(e.x, e.y) for e in (split_element(M, t.kind, tol) for M in Lambda_j)])
    x, y = zip(*[(e.x, e.y) for e in (split_element(M, t.kind, tol) for M in Lambda_t)])

    logger.debug(f"One-form from {len(gen.pairs)} pairs: max |Lambda| = {max(max_abs(M) for M in Lambda_j + Lambda_t):.3e}")
    return FluctuationCoefficients(
        Lambda_j=tuple(Lambda_j), Lambda_t=tuple(Lambda_t),
        sigma=sigma, theta=theta, x=x, y=y,
    )

def one_form_operator(t: ProductTriple, gen: OneFormGenerators, symmetrize: bool = True) -> CMatrix:
    """Dense omega = sum_m l(a_m) [D0, l(b_m)] on H, Hermitian part if symmetrize"""
    omega = np.zeros_like(t.D0)
    for a, b in gen.pairs:
        left_a, _ = represent_element(t, a)
        left_b, _ = represent_element(t, b)
        omega += left_a @ (t.D0 @ left_b - left_b @ t.D0)
    if symmetrize:
        omega = 0.5 * (omega + omega.conj().T)
    return omega

def _coefficient_one_form(t: ProductTriple, coeffs: FluctuationCoefficients) -> CMatrix:
    """Dense omega rebuilt from Lambda; the second block carries the barred coefficients"""
    space = t.base.space
    clifford = space.clifford
    first = np.zeros((space.hilbert_dim, space.hilbert_dim), dtype=np.complex128)
    second = np.zeros_like(first)
    terms = list(zip(clifford.gammas, coeffs.Lambda_j)) + list(zip(space.trigamma.products, coeffs.Lambda_t))
    for gamma, Lam in terms:
        element = split_element(Lam, t.kind)
        first += np.kron(gamma, left_mult(element.value))
        second += np.kron(gamma, left_mult(element.bar))
    return blockdiag(first, second)

def total_fluctuation(
    t: ProductTriple,
    coeffs: FluctuationCoefficients,
    tol: Tolerance = DEFAULT_TOLERANCE
) -> FluctuatedDirac:
    """
    Fluctuated operator D0 + omega + J omega J^-1 in coefficient form

    Args:
        t: Product triple
        coeffs: One-form coefficients
        tol: Tolerance for the dense cross-check

    Returns:
        FluctuatedDirac with L' = L + sigma and H' = H + x
    """
    dirac = t.base.dirac
    Lprime = [L + s for L, s in zip(dirac.L, coeffs.sigma)]
    Hprime = [H + x for H, x in zip(dirac.H, coeffs.x)]
    fd = make_fluctuated(t, Lprime, Hprime, coeffs.theta, coeffs.y)

    omega = _coefficient_one_form(t, coeffs)
    dense = t.D0 + omega + t.eps_prime * t.conjugate_by_J(omega)
    residual = max_abs(fd.assembled - dense)
    if residual > tol.bound(max_abs(dense)):
        raise NumericalFailure(f"Fluctuated operator disagrees with D0 + omega + J omega J^-1 (residual {residual:.3e})")
    logger.debug(f"Total fluctuation assembled, dense residual {residual:.2e}")
    return fd

def _gamma_component(X: CMatrix, B: CMatrix, dimV: int) -> CMatrix:
    """Tr_V((B* (x) 1) X) / dimV, the coefficient of B in X = sum_B B (x) M_B"""
    m = X.shape[0] // dimV
    X4 = X.reshape(dimV, m, dimV, m)
    return np.einsum('ab,aibk->ik', B.conj(), X4) / dimV

def _partial_trace(M: CMatrix, n: int) -> CMatrix:
    return np.einsum('ijkj->ik', M.reshape(n, n, n, n))

def _commutator_coefficient(M: CMatrix, n: int) -> CMatrix:
    """Traceless A with [A, .] = M"""
    return _partial_trace(M, n) / n

def _anticommutator_coefficient(M: CMatrix, n: int) -> CMatrix:
    """B with {B, .} = M"""
    P = _partial_trace(M, n)
    return (P - (np.trace(P) / (2 * n)) * np.eye(n)) / n

def extract_coefficients(t: ProductTriple, D: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> FluctuatedDirac:
    """
    Project an operator on H onto the fluctuation family

    The block average carries the universal part (gamma^j [L', .] and
    trigamma {H', .}); the block half-difference carries the charged part.
    Components are read off with the trace pairing of gamma products.

    Args:
        t: Product triple
        D: Operator on H
        tol: Tolerance on the reassembly residual

    Returns:
        FluctuatedDirac with the reassembly residual
    """
    D = np.asarray(D, dtype=np.complex128)
    if D.shape != (t.hilbert_dim, t.hilbert_dim):
        raise DimensionMismatch(f"Expected a {t.hilbert_dim}x{t.hilbert_dim} operator, got {D.shape}")
    space = t.base.space
    n, dimV = space.n, space.clifford.dimV
    D11, _, _, D22 = blocks(D)
    universal = 0.5 * (D11 + D22)
    charged = 0.5 * (D11 - D22)

    gammas = space.clifford.gammas
    products = space.trigamma.products
    Lprime = [_commutator_coefficient(_gamma_component(universal, g, dimV), n) for g in gammas]
    Hprime = [_anticommutator_coefficient(_gamma_component(universal, p, dimV), n) for p in products]
    theta = [-1j * _anticommutator_coefficient(_gamma_component(charged, g, dimV), n) for g in gammas]
    ygrav = [-1j * _commutator_coefficient(_gamma_component(charged, p, dimV), n) for p in products]

    rebuilt = assemble_fluctuated(space, Lprime, Hprime, theta, ygrav)
    residual = max_abs(D - rebuilt)
    bound = tol.bound(max_abs(D))
    if residual > bound:
        logger.warning(f"Operator outside the fluctuation span: residual {residual:.3e} > {bound:.3e}")
        raise NotInSpan(residual, bound)
    return FluctuatedDirac(
        Lprime=tuple(Lprime), Hprime=tuple(Hprime),
        theta=tuple(theta), ygrav=tuple(ygrav),
        assembled=D, residual=residual,
    )

def _traceless(M: CMatrix) -> CMatrix:
    return M - (np.trace(M) / M.shape[0]) * np.eye(M.shape[0])

def coefficient_distance(first: FluctuatedDirac, second: FluctuatedDirac) -> float:
    """
    Max-abs distance between the four coefficient families

    Commutator coefficients (L' and y) are compared modulo the identity,
    which drops out of [C, .].
    """
    pairs: List[Tuple[CMatrix, CMatrix]] = []
    for name in ('Lprime', 'ygrav'):
        pairs += [(_traceless(a), _traceless(b)) for a, b in zip(getattr(first, name), getattr(second, name))]
    for name in ('Hprime', 'theta'):
        pairs += list(zip(getattr(first, name), getattr(second, name)))
    return max(max_abs(a - b) for a, b in pairs)
