"""Tests for one-forms, fluctuated Dirac operators and their transformations."""

import numpy as np
import pytest

from src.fluctuations.one_forms import (
    build_generators,
    coefficient_distance,
    connes_one_form,
    extract_coefficients,
    make_fluctuated,
    one_form_operator,
    total_fluctuation,
    unitary_one_form,
    vacuum,
)
from src.fluctuations.transforms import (
    chiral_rotate,
    infinitesimal_gauge,
    real_gauge_transform,
    rotated_coefficients,
    unitary_transform,
)
from src.geometry.matrix_geometry import (
    build_dirac_data,
    MatrixGeometry,
    sample_random_geometry,
)
from src.product.product_triple import (
    build_product_triple,
    gauge_operator,
    verify_product_axioms,
)
from src.numerics.linalg import unitary_exp
from src.utils.errors import (
    DimensionMismatch,
    InvalidConfig,
    NonHermitianOneForm,
    NotHermitian,
    NotInAlgebra,
    NotInSpan,
)


@pytest.fixture
def random_pairs(complex_matrix):
    def draw(n, count=3):
        return [(complex_matrix(n), complex_matrix(n)) for _ in range(count)]
    return draw


@pytest.fixture
def fluctuated(product, random_pairs):
    gen = build_generators(product, random_pairs(product.kind.n))
    return total_fluctuation(product, connes_one_form(product, gen))


def orthogonal(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def test_identity_pair_gives_no_fluctuation(product):
    n = product.kind.n
    gen = build_generators(product, [(np.eye(n), np.eye(n))])
    coeffs = connes_one_form(product, gen)
    assert all(not M.any() for M in coeffs.Lambda_j + coeffs.Lambda_t)
    np.testing.assert_allclose(total_fluctuation(product, coeffs).assembled, product.D0, atol=1e-14)


def test_empty_generator_list_is_rejected(product):
    with pytest.raises(InvalidConfig):
        build_generators(product, [])


def test_generator_shape_is_checked(product):
    n = product.kind.n + 1
    with pytest.raises(DimensionMismatch):
        build_generators(product, [(np.eye(n), np.eye(n))])


def test_vacuum_reproduces_product_operator(product):
    fd = vacuum(product)
    np.testing.assert_allclose(fd.assembled, product.D0, atol=1e-14)
    assert all(not M.any() for M in fd.theta + fd.ygrav)


def test_unitary_one_form_matches_gauge_conjugation(product, random_unitary):
    u = random_unitary(product.kind.n)
    coeffs = connes_one_form(product, unitary_one_form(product, u))
    fd = total_fluctuation(product, coeffs)
    np.testing.assert_allclose(fd.assembled, unitary_transform(product, u, product.D0), atol=1e-10)


def test_unitary_fluctuation_is_isospectral(product, random_unitary):
    expected = np.linalg.eigvalsh(product.D0)
    for _ in range(13):
        u = random_unitary(product.kind.n)
        fd = total_fluctuation(product, connes_one_form(product, unitary_one_form(product, u)))
        np.testing.assert_allclose(np.linalg.eigvalsh(fd.assembled), expected, atol=1e-9)


def test_dense_one_form_agrees_with_coefficients(product, random_pairs):
    gen = build_generators(product, random_pairs(product.kind.n))
    fd = total_fluctuation(product, connes_one_form(product, gen))
    omega = one_form_operator(product, gen)
    np.testing.assert_allclose(omega, omega.conj().T, atol=1e-12)
    dense = product.D0 + omega + product.conjugate_by_J(omega)
    np.testing.assert_allclose(fd.assembled, dense, atol=1e-10)


def test_coefficient_classes(product, random_pairs):
    gen = build_generators(product, random_pairs(product.kind.n))
    coeffs = connes_one_form(product, gen)
    for sigma, theta in zip(coeffs.sigma, coeffs.theta):
        np.testing.assert_allclose(sigma, -sigma.conj().T, atol=1e-12)
        np.testing.assert_allclose(theta, theta.conj().T, atol=1e-12)
    for x, y in zip(coeffs.x, coeffs.y):
        np.testing.assert_allclose(x, x.conj().T, atol=1e-12)
        np.testing.assert_allclose(y, -y.conj().T, atol=1e-12)


def test_strict_mode_rejects_non_hermitian_one_form(product, random_pairs):
    gen = build_generators(product, random_pairs(product.kind.n))
    with pytest.raises(NonHermitianOneForm):
        connes_one_form(product, gen, symmetrize=False)


def test_real_generators_leave_charge_blocks_equal(product_real, rng):
    pairs = [(rng.standard_normal((2, 2)), rng.standard_normal((2, 2))) for _ in range(2)]
    fd = total_fluctuation(product_real, connes_one_form(product_real, build_generators(product_real, pairs)))
    assert all(np.abs(M).max() <= 1e-14 for M in fd.theta + fd.ygrav)
    h = product_real.hilbert_dim // 2
    np.testing.assert_allclose(fd.assembled[:h, :h], fd.assembled[h:, h:], atol=1e-14)
    recovered = extract_coefficients(product_real, fd.assembled)
    assert all(np.abs(M).max() <= 1e-10 for M in recovered.theta + recovered.ygrav)


def test_imaginary_unit_generator_gives_pure_charged_part(product_real, rng):
    b = rng.standard_normal((2, 2))
    b = b + b.T
    gen = build_generators(product_real, [(1j * np.eye(2), b)])
    coeffs = connes_one_form(product_real, gen)
    dirac = product_real.base.dirac
    for sigma, theta, L in zip(coeffs.sigma, coeffs.theta, dirac.L):
        np.testing.assert_allclose(sigma, 0, atol=1e-14)
        np.testing.assert_allclose(theta, L @ b - b @ L, atol=1e-12)
    for x, y, H in zip(coeffs.x, coeffs.y, dirac.H):
        np.testing.assert_allclose(x, 0, atol=1e-14)
        np.testing.assert_allclose(y, H @ b - b @ H, atol=1e-12)

    omega = total_fluctuation(product_real, coeffs).assembled - product_real.D0
    h = product_real.hilbert_dim // 2
    assert np.abs(omega[:h, :h]).max() > 0.1
    np.testing.assert_allclose(omega[:h, :h], -omega[h:, h:], atol=1e-10)


def test_extraction_recovers_coefficients(fluctuated, product):
    recovered = extract_coefficients(product, fluctuated.assembled)
    assert recovered.residual <= 1e-10
    assert coefficient_distance(recovered, fluctuated) <= 1e-10


def test_extraction_of_hand_built_coefficients(product, algebra_hermitian, algebra_anti_hermitian):
    kind = product.kind
    fd = make_fluctuated(
        product,
        [algebra_anti_hermitian(kind) for _ in range(4)],
        [algebra_hermitian(kind) for _ in range(4)],
        [algebra_hermitian(kind) for _ in range(4)],
        [algebra_anti_hermitian(kind) for _ in range(4)],
    )
    recovered = extract_coefficients(product, fd.assembled)
    assert coefficient_distance(recovered, fd) <= 1e-10


def test_two_gamma_term_is_outside_the_span(product):
    space = product.base.space
    gammas = space.clifford.gammas
    injected = np.kron(1j * gammas[0] @ gammas[1], np.eye(space.n ** 2))
    D = product.D0 + np.kron(np.eye(2), injected)
    with pytest.raises(NotInSpan) as info:
        extract_coefficients(product, D)
    assert info.value.residual > info.value.bound


def test_extraction_checks_shape(product):
    with pytest.raises(DimensionMismatch):
        extract_coefficients(product, np.eye(4))


def test_vanishing_vector_coefficients_stay_zero(real2, random_pairs):
    geom = sample_random_geometry(real2, 1.0, 5)
    zero = np.zeros((2, 2))
    data = build_dirac_data([zero] * 4, geom.dirac.H, geom.space)
    t = build_product_triple(MatrixGeometry(space=geom.space, dirac=data))
    fd = total_fluctuation(t, connes_one_form(t, build_generators(t, random_pairs(2))))
    assert all(np.abs(M).max() <= 1e-14 for M in fd.Lprime + fd.theta)


def test_fluctuation_preserves_axioms(fluctuated, product):
    report = verify_product_axioms(product, fluctuated.assembled)
    assert report.all_pass, report.to_dict()


def test_real_gauge_transform(product_real, random_pairs):
    gen = build_generators(product_real, random_pairs(2))
    fd = total_fluctuation(product_real, connes_one_form(product_real, gen))
    u = orthogonal(0.4)
    result = real_gauge_transform(product_real, fd, u)
    for name in ('Lprime', 'Hprime', 'theta', 'ygrav'):
        for before, after in zip(getattr(fd, name), getattr(result, name)):
            np.testing.assert_allclose(after, u @ before @ u.T, atol=1e-12)
    np.testing.assert_allclose(result.assembled, unitary_transform(product_real, u, fd.assembled), atol=1e-10)


def test_real_gauge_transform_rejects_complex_unitary(product_real):
    with pytest.raises(NotInAlgebra):
        real_gauge_transform(product_real, vacuum(product_real), np.exp(0.2j) * np.eye(2))


def test_infinitesimal_gauge_of_zero_generator(fluctuated, product):
    n = product.kind.n
    delta = infinitesimal_gauge(product, np.zeros((n, n)), fluctuated)
    assert not delta.assembled.any()


def test_infinitesimal_gauge_moves_vacuum_into_charged_part(product, algebra_hermitian):
    y = algebra_hermitian(product.kind)
    delta = infinitesimal_gauge(product, y, vacuum(product))
    dirac = product.base.dirac
    for theta, L in zip(delta.theta, dirac.L):
        np.testing.assert_allclose(theta, y @ L - L @ y, atol=1e-12)
    for ygrav, H in zip(delta.ygrav, dirac.H):
        np.testing.assert_allclose(ygrav, y @ H - H @ y, atol=1e-12)
    assert all(not M.any() for M in delta.Lprime + delta.Hprime)


def test_infinitesimal_gauge_is_derivative(fluctuated, product, algebra_hermitian):
    D = fluctuated.assembled
    for _ in range(5):
        y = algebra_hermitian(product.kind)
        delta = infinitesimal_gauge(product, y, fluctuated).assembled

        def error(eps):
            U = gauge_operator(product, unitary_exp(1j * eps * y))
            return np.abs((U @ D @ U.conj().T - D) / eps - delta).max()

        ratio = error(1e-3) / error(1e-4)
        assert 8 <= ratio <= 12


def test_infinitesimal_gauge_validation(product_real):
    fd = vacuum(product_real)
    with pytest.raises(DimensionMismatch):
        infinitesimal_gauge(product_real, np.eye(3), fd)
    with pytest.raises(NotInAlgebra):
        infinitesimal_gauge(product_real, np.array([[0, 1j], [-1j, 0]]), fd)
    with pytest.raises(NotHermitian):
        infinitesimal_gauge(product_real, np.array([[0, 1.0], [-1.0, 0]]), fd)


def test_chiral_rotation_of_zero_operator(real2):
    t = build_product_triple(sample_random_geometry(real2, 0.0, 0))
    result = chiral_rotate(t, vacuum(t))
    assert np.abs(result.assembled).max() == 0.0


def test_chiral_rotation_is_i_gamma_d(fluctuated, product):
    result = chiral_rotate(product, fluctuated)
    np.testing.assert_allclose(result.assembled, 1j * product.Gamma @ fluctuated.assembled, atol=1e-10)


def test_chiral_rotation_exchanges_families(product, algebra_hermitian, algebra_anti_hermitian):
    kind = product.kind
    zeros = [np.zeros((kind.n, kind.n))] * 4
    dual = product.base.space.trigamma.dual_index
    for _ in range(5):
        Hprime = [algebra_hermitian(kind) for _ in range(4)]
        result = chiral_rotate(product, make_fluctuated(product, zeros, Hprime, zeros, zeros))
        for t_index, (m, eta) in enumerate(dual):
            np.testing.assert_allclose(result.theta[m - 1], eta * Hprime[t_index], atol=1e-10)
        assert all(np.abs(M).max() <= 1e-10 for M in result.Hprime + result.Lprime + result.ygrav)

        ygrav = [algebra_anti_hermitian(kind) for _ in range(4)]
        fd = make_fluctuated(product, zeros, zeros, zeros, ygrav)
        result = chiral_rotate(product, fd)
        assert coefficient_distance(result, rotated_coefficients(product, fd)) <= 1e-10
        assert all(np.abs(M).max() <= 1e-10 for M in result.Hprime + result.theta)


def test_chiral_rotation_of_vector_terms(product_real, rng):
    L = [rng.standard_normal((2, 2)) for _ in range(4)]
    L = [M - M.T for M in L]
    zeros = [np.zeros((2, 2))] * 4
    fd = make_fluctuated(product_real, L, zeros, zeros, zeros)
    predicted = rotated_coefficients(product_real, fd)
    result = chiral_rotate(product_real, fd)
    assert coefficient_distance(result, predicted) <= 1e-10
    assert any(np.abs(M).max() > 0.1 for M in result.ygrav)


def test_double_chiral_rotation_negates(fluctuated, product):
    twice = chiral_rotate(product, chiral_rotate(product, fluctuated))
    np.testing.assert_allclose(twice.assembled, -fluctuated.assembled, atol=1e-10)
