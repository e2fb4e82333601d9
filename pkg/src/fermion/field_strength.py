"""
Field strength of the charged fluctuation and the determinant identity

On a single charge block, (D'_M + T)(D'_M - T) = D'_M^2 - F with
F = [D'_M, T] + T^2, so det(D) = det(D'_M^2 - F).
"""
from dataclasses import dataclass, field

from src.fluctuations.one_forms import FluctuatedDirac, charged_operator, manifold_operator
from src.numerics.linalg import CMatrix, determinant
from src.product.product_triple import ProductTriple

@dataclass(frozen=True)
class FieldStrength:
    F: CMatrix = field(repr=False)
    F_theta: CMatrix = field(repr=False)
    F_y: CMatrix = field(repr=False)
    mixing: CMatrix = field(repr=False)

def _commutator(A: CMatrix, B: CMatrix) -> CMatrix:
    return A @ B - B @ A

def field_strength(t: ProductTriple, fd: FluctuatedDirac) -> FieldStrength:
    """
    F = [D'_M, Theta + Y] + (Theta + Y)^2 with its Theta / Y decomposition

    Args:
        t: Product triple
        fd: Fluctuated operator

    Returns:
        FieldStrength on the 4n^2-dimensional charge block
    """
    space = t.base.space
    zeros = [0.0 * C for C in fd.theta]
    D_prime = manifold_operator(space, fd.Lprime, fd.Hprime)
    Theta = charged_operator(space, fd.theta, zeros)
    Y = charged_operator(space, zeros, fd.ygrav)
    T = Theta + Y
    return FieldStrength(
        F=_commutator(D_prime, T) + T @ T,
        F_theta=_commutator(D_prime, Theta) + Theta @ Theta,
        F_y=_commutator(D_prime, Y) + Y @ Y,
        mixing=Theta @ Y + Y @ Theta,
    )

def det_identity_residual(t: ProductTriple, fd: FluctuatedDirac) -> float:
    """Relative gap |det(D) - det(D'_M^2 - F)| / max(1, |det(D)|)"""
    D_prime = manifold_operator(t.base.space, fd.Lprime, fd.Hprime)
    F = field_strength(t, fd).F
    full = determinant(fd.assembled)
    block = determinant(D_prime @ D_prime - F)
    return float(abs(full - block) / max(1.0, abs(full)))
