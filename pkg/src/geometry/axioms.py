"""
Axiom engine for finite real spectral triples

The same checks run for matrix geometries, the U(1) internal triple and the
product triple.
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from src.geometry.matrix_geometry import (
    FermionSpace,
    MatrixGeometry,
    algebra_basis,
    assemble_dirac,
)
from src.numerics.linalg import CMatrix, hermiticity_residual, max_abs
from src.numerics.tolerance import Tolerance, DEFAULT_TOLERANCE
from src.utils.logger import logger

@dataclass(frozen=True)
class CheckResult:
    passed: bool
    residual: float

@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom pass flags and maximal residuals"""
    hermitian: CheckResult
    reality: CheckResult
    first_order: CheckResult
    chirality: Optional[CheckResult] = None
    errors: Dict[str, str] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        checks = [self.hermitian, self.reality, self.first_order]
        if self.chirality is not None:
            checks.append(self.chirality)
        return all(c.passed for c in checks) and not self.errors

    @property
    def max_residual(self) -> float:
        checks = [self.hermitian, self.reality, self.first_order, self.chirality]
        return max(c.residual for c in checks if c is not None)

    def to_dict(self) -> Dict:
        report = {'all_pass': self.all_pass}
        for name in ('hermitian', 'reality', 'first_order', 'chirality'):
            check = getattr(self, name)
            if check is not None:
                report[name] = {'passed': check.passed, 'residual': check.residual}
        if self.errors:
            report['errors'] = dict(self.errors)
        return report

def conjugate_antilinear(K: CMatrix, A: CMatrix) -> CMatrix:
    """Matrix of J A J^-1 for the antilinear J = K conj(.)"""
    return K @ A.conj() @ K.conj().T

def check_axioms(
    D: CMatrix,
    K: CMatrix,
    eps_prime: int,
    left_ops: Sequence[CMatrix],
    right_ops: Sequence[CMatrix],
    Gamma: Optional[CMatrix] = None,
    tol: Tolerance = DEFAULT_TOLERANCE
) -> AxiomReport:
    """
    Check the real spectral triple axioms on a dense operator

    Args:
        D: Candidate Dirac operator
        K: Unitary part of the real structure J
        eps_prime: Sign in D = eps' J D J^-1
        left_ops: Left representation of a spanning set of the algebra
        right_ops: Right representation of a spanning set of the algebra
        Gamma: Chirality (even case) or None
        tol: Tolerance

    Returns:
        AxiomReport
    """
    scale = max_abs(D)
    bound = tol.bound(scale)

    hermitian = hermiticity_residual(D)
    reality = max_abs(D - eps_prime * conjugate_antilinear(K, D))

    first_order = 0.0
    for la in left_ops:
        C = D @ la - la @ D
        if max_abs(C) == 0.0:
            continue
        for rb in right_ops:
            first_order = max(first_order, max_abs(C @ rb - rb @ C))

    chirality = None
    if Gamma is not None:
        residual = max_abs(D @ Gamma + Gamma @ D)
        chirality = CheckResult(residual <= bound, residual)

    report = AxiomReport(
        hermitian=CheckResult(hermitian <= bound, hermitian),
        reality=CheckResult(reality <= bound, reality),
        first_order=CheckResult(first_order <= bound, first_order),
        chirality=chirality,
    )
    logger.debug(f"Axiom residuals: max={report.max_residual:.2e}, pass={report.all_pass}")
    return report

def verify_dirac_operator(space: FermionSpace, D: CMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> AxiomReport:
    """Axiom suite for an arbitrary operator on a matrix-geometry fermion space"""
    basis = algebra_basis(space.algebra)
    gamma = space.chirality if space.clifford.even else None
    return check_axioms(
        D,
        space.real_structure,
        space.clifford.signs[1],
        [space.left_rep(a) for a in basis],
        [space.right_rep(b) for b in basis],
        Gamma=gamma,
        tol=tol,
    )

def verify_axioms(geom: MatrixGeometry, tol: Tolerance = DEFAULT_TOLERANCE) -> AxiomReport:
    """
    Verify Hermiticity, reality, first-order condition and chirality

    Args:
        geom: Matrix geometry
        tol: Tolerance

    Returns:
        AxiomReport
    """
    return verify_dirac_operator(geom.space, assemble_dirac(geom), tol)
