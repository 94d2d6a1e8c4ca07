import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gurlab import matlin
from gurlab.errors import DimMismatch, DomainError, NonHermitian, NotNormalized

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]])
SIGMA3 = np.diag([1.0, -1.0]).astype(complex)

seeds = st.integers(min_value=0, max_value=2**63 - 1)


# -- eigensolver ---------------------------------------------------------------

def test_identity_eig():
    d = matlin.hermitian_eig(np.eye(3))
    np.testing.assert_allclose(d.eigenvalues, [1, 1, 1], atol=1e-15)
    np.testing.assert_allclose(np.abs(d.basis), np.eye(3), atol=1e-15)


def test_diagonal_eig_is_permutation():
    d = matlin.hermitian_eig(np.diag([2.0, -1.0]))
    np.testing.assert_allclose(d.eigenvalues, [-1, 2], atol=1e-15)
    np.testing.assert_allclose(np.abs(d.basis), [[0, 1], [1, 0]], atol=1e-15)


def test_sigma1_eigenvalues():
    d = matlin.hermitian_eig(SIGMA1)
    np.testing.assert_allclose(d.eigenvalues, [-1, 1], atol=1e-14)
    np.testing.assert_allclose(d.reconstruct(), SIGMA1, atol=1e-14)


def test_ties_keep_original_order():
    d = matlin.hermitian_eig(np.diag([3.0, 1.0, 3.0, 1.0]))
    np.testing.assert_allclose(np.abs(d.basis[:, 0]), [0, 1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(np.abs(d.basis[:, 1]), [0, 0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(np.abs(d.basis[:, 2]), [1, 0, 0, 0], atol=1e-15)


def test_non_hermitian_rejected():
    with pytest.raises(NonHermitian):
        matlin.hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_non_square_rejected():
    with pytest.raises(DimMismatch):
        matlin.hermitian_eig(np.zeros((2, 3)))


@pytest.mark.parametrize("dim", [2, 4, 8, 16, 32])
def test_eig_invariants_campaign(dim):
    n = 100 if dim <= 16 else 25
    for k in range(n):
        h = matlin.random_hermitian(dim, matlin.derive_seed(11, dim, k), scale=3.0)
        d = matlin.hermitian_eig(h)
        v = d.basis
        assert matlin.frobenius(matlin.adjoint(v) @ v - np.eye(dim)) <= 1e-12 * dim
        assert matlin.frobenius(d.reconstruct() - h) <= 1e-10 * matlin.frobenius(h)
        assert np.all(np.diff(d.eigenvalues) >= 0)


def test_eig_agrees_with_lapack():
    h = matlin.random_hermitian(12, 5)
    np.testing.assert_allclose(matlin.hermitian_eig(h).eigenvalues, np.linalg.eigvalsh(h), atol=1e-12)


# -- matrix functions ------------------------------------------------------------

def test_matrix_function_identity_map():
    h = matlin.random_hermitian(5, 3)
    np.testing.assert_allclose(matlin.matrix_function(matlin.hermitian_eig(h), lambda x: x), h,
                               atol=1e-12)


def test_matrix_function_sqrt():
    out = matlin.matrix_function(matlin.hermitian_eig(np.diag([4.0, 9.0])), math.sqrt)
    np.testing.assert_allclose(out, np.diag([2.0, 3.0]), atol=1e-15)


def test_matrix_function_domain_error():
    with pytest.raises(DomainError):
        matlin.matrix_function(matlin.hermitian_eig(np.diag([-1.0, 1.0])), math.sqrt)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, s=st.floats(-10, 10))
def test_exponential_is_unitary(seed, s):
    d = matlin.hermitian_eig(matlin.random_hermitian(6, seed, scale=2.0))
    u = matlin.unitary_group(d, s)
    assert matlin.frobenius(matlin.adjoint(u) @ u - np.eye(6)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=seeds, s=st.floats(-1, 1), t=st.floats(-1, 1))
def test_group_law(seed, s, t):
    d = matlin.hermitian_eig(matlin.random_hermitian(5, seed, scale=2.0))
    lhs = matlin.unitary_group(d, s + t)
    rhs = matlin.unitary_group(d, s) @ matlin.unitary_group(d, t)
    assert matlin.frobenius(lhs - rhs) <= 1e-9


def test_exponential_matches_scipy():
    from scipy.linalg import expm
    x = matlin.random_hermitian(7, 9)
    np.testing.assert_allclose(matlin.unitary_group(matlin.hermitian_eig(x), 0.7), expm(-0.7j * x),
                               atol=1e-12)


# -- normality ----------------------------------------------------------------------

def test_unitary_is_normal():
    assert matlin.is_normal(matlin.haar_unitary(6, 1))


def test_nilpotent_is_not_normal():
    assert not matlin.is_normal(np.array([[0, 1], [0, 0]], dtype=complex))


def test_commuting_hermitian_parts_normal():
    v = matlin.haar_unitary(5, 4)
    h1 = (v * np.arange(5.0)) @ matlin.adjoint(v)
    h2 = (v * np.array([2.0, -1.0, 0.5, 3.0, 1.0])) @ matlin.adjoint(v)
    assert matlin.is_normal(h1 + 1j * h2)


# -- random ensembles ------------------------------------------------------------------

def test_random_normal_dim1_is_drawn_value():
    rng = matlin.rng_from_seed(42)
    z = rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
    out = matlin.random_normal_operator(1, 42)
    assert out.shape == (1, 1)
    assert out[0, 0] == z


def test_random_normal_deterministic():
    np.testing.assert_array_equal(matlin.random_normal_operator(5, 17), matlin.random_normal_operator(5, 17))


def test_random_normal_dim8_is_normal():
    assert matlin.is_normal(matlin.random_normal_operator(8, 3), 1e-10)


def test_spectrum_box_respected():
    a = matlin.random_normal_operator(6, 2, ((2.0, 3.0), (-0.5, -0.25)))
    z = np.linalg.eigvals(a)
    assert np.all((z.real > 2.0 - 1e-12) & (z.real < 3.0 + 1e-12))
    assert np.all((z.imag > -0.5 - 1e-12) & (z.imag < -0.25 + 1e-12))


def test_random_state_dim1_unit_phase():
    psi = matlin.random_state(1, 5)
    assert abs(abs(psi[0]) - 1.0) < 1e-15


def test_random_state_deterministic():
    np.testing.assert_array_equal(matlin.random_state(4, 8), matlin.random_state(4, 8))


def test_random_state_norm_dim16():
    assert abs(np.linalg.norm(matlin.random_state(16, 99)) - 1.0) <= 1e-14


def test_derive_seed_distinct_and_stable():
    a = matlin.derive_seed(1, 2, 3)
    assert a == matlin.derive_seed(1, 2, 3)
    assert a != matlin.derive_seed(1, 3, 2)
    assert 0 <= a < 2**64


def test_as_state_rejects_unnormalised():
    with pytest.raises(NotNormalized):
        matlin.as_state(np.array([1.0, 1.0]))


@settings(max_examples=30, deadline=None)
@given(seed=seeds, dim=st.integers(2, 12))
def test_haar_unitary_is_unitary(seed, dim):
    assert matlin.is_unitary(matlin.haar_unitary(dim, seed), 1e-12)


# -- companion roots ---------------------------------------------------------------------

def test_companion_roots_quintic():
    roots = [0.1, 0.4, 0.9, -2.0, 3.0]
    coeffs = np.polynomial.polynomial.polyfromroots(roots)
    found = np.sort(matlin.companion_roots(coeffs).real)
    np.testing.assert_allclose(found, np.sort(roots), atol=1e-10)


def test_companion_roots_trims_leading_zeros():
    found = matlin.companion_roots([-2.0, 1.0, 0.0, 1e-18])
    np.testing.assert_allclose(found, [2.0], atol=1e-14)
