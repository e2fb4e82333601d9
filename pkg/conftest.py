"""Shared fixtures for the NCG test suites."""

import numpy as np
import pytest

from src.geometry.matrix_geometry import (
    AlgebraKind,
    AlgebraTag,
    project_anti_hermitian,
    project_hermitian,
    sample_random_geometry,
)
from src.numerics.linalg import unitary_exp
from src.product.product_triple import build_product_triple


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def real2():
    return AlgebraKind(AlgebraTag.RealMat, 2)


@pytest.fixture
def quat2():
    return AlgebraKind(AlgebraTag.QuatMat, 2)


@pytest.fixture
def product_real(real2):
    return build_product_triple(sample_random_geometry(real2, 1.0, 7))


# (algebra, n, seed) of the triples shared by the product, fluctuation and fermion suites
PRODUCT_CASES = {
    "R2": (AlgebraTag.RealMat, 2, 7),
    "R3": (AlgebraTag.RealMat, 3, 13),
    "H2": (AlgebraTag.QuatMat, 2, 11),
    "H4": (AlgebraTag.QuatMat, 4, 19),
}


@pytest.fixture(params=sorted(PRODUCT_CASES))
def product(request):
    tag, n, seed = PRODUCT_CASES[request.param]
    return build_product_triple(sample_random_geometry(AlgebraKind(tag, n), 1.0, seed))


@pytest.fixture
def complex_matrix(rng):
    def draw(n):
        return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return draw


@pytest.fixture
def random_unitary(complex_matrix):
    """Haar-ish unitary from the exponential of a random anti-Hermitian matrix."""
    def draw(n):
        M = complex_matrix(n)
        return unitary_exp(0.5 * (M - M.conj().T))
    return draw


@pytest.fixture
def algebra_hermitian(complex_matrix):
    def draw(kind):
        return project_hermitian(kind, complex_matrix(kind.n))
    return draw


@pytest.fixture
def algebra_anti_hermitian(complex_matrix):
    def draw(kind):
        return project_anti_hermitian(kind, complex_matrix(kind.n))
    return draw
