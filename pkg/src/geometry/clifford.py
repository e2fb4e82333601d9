"""
Clifford modules of type (p, q)

Gamma matrices are built from iterated 2x2 Pauli tensor blocks. The first p
generators are Hermitian and square to +1; the remaining q are multiplied by
the imaginary unit, so they are anti-Hermitian and square to -1.
"""
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.numerics.linalg import CMatrix, max_abs
from src.utils.errors import UnsupportedSignature, WrongSignature
from src.utils.logger import logger

MAX_GENERATORS = 5

PAULI = {
    'I': np.eye(2, dtype=np.complex128),
    'X': np.array([[0, 1], [1, 0]], dtype=np.complex128),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    'Z': np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# (epsilon, epsilon', epsilon'') for KO-dimension s; epsilon'' is undefined for odd s and reported as +1
KO_SIGNS: Dict[int, Tuple[int, int, int]] = {
    0: (1, 1, 1),
    1: (1, -1, 1),
    2: (-1, 1, -1),
    3: (-1, 1, 1),
    4: (-1, 1, 1),
    5: (-1, -1, 1),
    6: (1, 1, -1),
    7: (1, 1, 1),
}

def ko_sign_table(s: int) -> Tuple[int, int, int]:
    """
    Real-structure signs for KO-dimension s

    Args:
        s: KO-dimension (reduced mod 8)

    Returns:
        Tuple (epsilon, epsilon', epsilon'')
    """
    return KO_SIGNS[s % 8]

def _kron_all(factors: List[CMatrix]) -> CMatrix:
    return reduce(np.kron, factors, np.eye(1, dtype=np.complex128))

def _hermitian_generators(count: int) -> List[CMatrix]:
    """Pairwise anticommuting Hermitian involutions on C^(2^(count // 2))"""
    k = count // 2
    generators = []
    for i in range(k):
        head = [PAULI['Z']] * i
        tail = [PAULI['I']] * (k - i - 1)
        generators.append(_kron_all(head + [PAULI['X']] + tail))
        generators.append(_kron_all(head + [PAULI['Y']] + tail))
    if count % 2:
        generators.append(_kron_all([PAULI['Z']] * k))
    return generators

def _real_or_imaginary_phase(M: CMatrix) -> Optional[complex]:
    """Phase c with c*M real, if M is purely real or purely imaginary"""
    if max_abs(M.imag) == 0.0:
        return 1.0
    if max_abs(M.real) == 0.0:
        return -1j
    return None

@dataclass(frozen=True)
class CliffordModule:
    """Irreducible complex Clifford module with chirality and charge conjugation"""
    p: int
    q: int
    s: int
    dimV: int
    gammas: Tuple[CMatrix, ...] = field(repr=False)
    gamma5: Optional[CMatrix] = field(repr=False)
    conjC: CMatrix = field(repr=False)
    signs: Tuple[int, int, int] = (1, 1, 1)

    @property
    def even(self) -> bool:
        return (self.p + self.q) % 2 == 0

    def apply_C(self, v: np.ndarray) -> np.ndarray:
        """Antilinear charge conjugation v -> K conj(v)"""
        return self.conjC @ np.conj(v)

@dataclass(frozen=True)
class TrigammaBasis:
    """Ordered triple products of gamma matrices with their chirality duals"""
    triples: Tuple[Tuple[int, int, int], ...]
    products: Tuple[CMatrix, ...] = field(repr=False)
    dual_index: Tuple[Tuple[int, int], ...] = ()

def _find_charge_conjugation(gammas: List[CMatrix], eps: int, eps_prime: int) -> Optional[CMatrix]:
    """Search gamma-products for K with K conj(g) K^-1 = eps' g and K conj(K) = eps"""
    dim = gammas[0].shape[0] if gammas else 1
    identity = np.eye(dim, dtype=np.complex128)
    for size in range(len(gammas) + 1):
        for subset in combinations(range(len(gammas)), size):
            P = reduce(np.matmul, [gammas[i] for i in subset], identity)
            phase = _real_or_imaginary_phase(P)
            if phase is None:
                continue
            K = phase * P
            if max_abs(K @ K.conj() - eps * identity) > 1e-12:
                continue
            if all(max_abs(K @ g.conj() - eps_prime * g @ K) <= 1e-12 for g in gammas):
                return K
    return None

def build_clifford_module(p: int, q: int) -> CliffordModule:
    """
    Construct the Clifford module of type (p, q)

    Args:
        p: Number of generators squaring to +1
        q: Number of generators squaring to -1

    Returns:
        CliffordModule with gammas, chirality, charge conjugation and KO signs
    """
    if p < 0 or q < 0:
        raise UnsupportedSignature(f"Signature ({p},{q}) must be nonnegative")
    count = p + q
    if count > MAX_GENERATORS:
        raise UnsupportedSignature(f"Signature ({p},{q}) has p+q > {MAX_GENERATORS}")

    hermitian = _hermitian_generators(count)
    gammas = hermitian[:p] + [1j * g for g in hermitian[p:]]
    dimV = 2 ** (count // 2)
    identity = np.eye(dimV, dtype=np.complex128)

    gamma5 = None
    if count % 2 == 0:
        P = reduce(np.matmul, gammas, identity)
        gamma5 = P if max_abs(P @ P - identity) <= 1e-12 else 1j * P

    s = (q - p) % 8
    signs = ko_sign_table(s)
    eps, eps_prime, eps_pp = signs
    K = _find_charge_conjugation(gammas, eps, eps_prime)
    if K is None:
        raise UnsupportedSignature(f"No charge conjugation with KO-dimension {s} signs for ({p},{q})")
    if gamma5 is not None and max_abs(K @ gamma5.conj() - eps_pp * gamma5 @ K) > 1e-12:
        raise UnsupportedSignature(f"Chirality sign epsilon''={eps_pp} not realised for ({p},{q})")

    logger.debug(f"Built Clifford module ({p},{q}): dimV={dimV}, s={s}, signs={signs}")
    return CliffordModule(
        p=p, q=q, s=s, dimV=dimV,
        gammas=tuple(gammas), gamma5=gamma5, conjC=K, signs=signs,
    )

def trigamma_products(mod: CliffordModule) -> TrigammaBasis:
    """
    Triple products of gammas for a four-generator module

    Triples are 1-based and listed lexicographically. Each product equals
    eta * gamma5 * gamma^m for the complementary index m.

    Args:
        mod: Clifford module with p + q = 4

    Returns:
        TrigammaBasis
    """
    if mod.p + mod.q != 4:
        raise WrongSignature(f"Triple products need p+q = 4, got ({mod.p},{mod.q})")

    triples, products, duals = [], [], []
    for triple in combinations(range(1, 5), 3):
        j, k, l = triple
        m = ({1, 2, 3, 4} - set(triple)).pop()
        product = mod.gammas[j - 1] @ mod.gammas[k - 1] @ mod.gammas[l - 1]
        dual = mod.gamma5 @ mod.gammas[m - 1]
        eta = int(round(np.real(np.trace(dual.conj().T @ product)) / mod.dimV))
        if eta not in (1, -1) or max_abs(product - eta * dual) > 1e-12:
            raise WrongSignature(f"Triple {triple} is not dual to gamma^{m}")
        triples.append(triple)
        products.append(product)
        duals.append((m, eta))
    return TrigammaBasis(triples=tuple(triples), products=tuple(products), dual_index=tuple(duals))

def gamma_product_basis(mod: CliffordModule) -> List[Tuple[Tuple[int, ...], CMatrix]]:
    """All ordered products of distinct gammas, including the empty product"""
    identity = np.eye(mod.dimV, dtype=np.complex128)
    basis = []
    for size in range(len(mod.gammas) + 1):
        for subset in combinations(range(len(mod.gammas)), size):
            product = reduce(np.matmul, [mod.gammas[i] for i in subset], identity)
            basis.append((tuple(i + 1 for i in subset), product))
    return basis
