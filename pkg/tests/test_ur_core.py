import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gurlab import matlin
from gurlab.errors import DimMismatch, NotNormal, NotUnitary, RangeError
from gurlab.harness.experiments import gur_instance
from gurlab.model_systems import clock_shift, spin_system, transformed
from gurlab.ur_core import (Method, deviation, gur_bound, is_degenerate, lambda_form,
                            lambda_grid_minimum, mean, moments, objective_F, oracle_infimum,
                            pair_moments, robertson, stationary_lambdas, stationary_polynomial,
                            unitary_spread, weak_commutator)

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]])
SIGMA3 = np.diag([1.0, -1.0]).astype(complex)
PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)
UP = np.array([1.0, 0.0])

seeds = st.integers(min_value=0, max_value=2**63 - 1)
dims = st.integers(min_value=2, max_value=8)


def instance(dim, seed):
    a, b, phi, chi, _ = gur_instance(dim, seed)
    return a, b, phi, chi


# -- moments -------------------------------------------------------------------

def test_mean_examples():
    assert mean(np.eye(3), matlin.random_state(3, 1)) == pytest.approx(1.0, abs=1e-15)
    assert mean(np.diag([0.0, 1.0]), UP) == 0
    assert mean(SIGMA1, PLUS) == pytest.approx(1.0, abs=1e-15)


def test_mean_dim_mismatch():
    with pytest.raises(DimMismatch):
        mean(np.eye(3), UP)


def test_deviation_examples():
    assert deviation(SIGMA3, UP) == 0.0
    assert deviation(SIGMA3, PLUS) == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(seed=seeds, dim=dims)
def test_unitary_moment_identity(seed, dim):
    v = matlin.random_unitary_operator(dim, seed)
    psi = matlin.random_state(dim, seed + 1)
    rep = moments(v, psi)
    assert rep.deviation**2 + abs(rep.mean) ** 2 == pytest.approx(1.0, abs=1e-10)
    assert rep.deviation == pytest.approx(np.linalg.norm((v - rep.mean * np.eye(dim)) @ psi), abs=1e-12)


def test_unitary_spread_examples():
    v = np.diag([1.0, 1j])
    assert unitary_spread(v, UP).value == 0.0
    assert unitary_spread(v, PLUS).value == pytest.approx(1.0, abs=1e-15)
    sp = unitary_spread(SIGMA1, UP)
    assert sp.infinite and sp.value is None


def test_unitary_spread_matches_definition():
    v = matlin.random_unitary_operator(5, 3)
    psi = matlin.random_state(5, 4)
    dv = deviation(v, psi)
    assert unitary_spread(v, psi).value == pytest.approx(dv / math.sqrt(1 - dv**2), rel=1e-12)


def test_unitary_spread_small_regime():
    x = matlin.random_hermitian(4, 8)
    psi = matlin.random_state(4, 9)
    decomp = matlin.hermitian_eig(x)
    ratios = []
    for s in (1e-2, 5e-3, 2.5e-3):
        v = matlin.unitary_group(decomp, s)
        dv, sp = deviation(v, psi), unitary_spread(v, psi).value
        ratios.append((sp - dv) / dv**3)
    # delta - Delta = Delta^3 / 2 + O(Delta^5)
    np.testing.assert_allclose(ratios, 0.5, rtol=1e-3)


def test_unitary_spread_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        unitary_spread(2 * np.eye(2), UP)


# -- weak commutator -----------------------------------------------------------------

def test_weak_commutator_examples():
    a = matlin.random_normal_operator(4, 1)
    phi, chi = matlin.random_state(4, 2), matlin.random_state(4, 3)
    assert abs(weak_commutator(a, a, phi, chi)) <= 1e-15
    d1, d2 = np.diag([1.0, 2.0, 3.0, 4.0]), np.diag([1j, -1.0, 0.5, 2.0])
    assert abs(weak_commutator(d1, d2, phi, chi)) <= 1e-15
    assert weak_commutator(SIGMA1, SIGMA2, UP, UP) == pytest.approx(2j, abs=1e-15)


def test_weak_commutator_rejects_non_normal():
    with pytest.raises(NotNormal):
        weak_commutator(np.array([[0, 1], [0, 0]], dtype=complex), SIGMA1, UP, UP)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, dim=dims)
def test_weak_commutator_finite_dim_consistency(seed, dim):
    a, b, phi, chi = instance(dim, seed)
    q = weak_commutator(a, b, phi, chi)
    direct = np.vdot(phi, (a @ b - b @ a) @ chi)
    assert abs(q - direct) <= 1e-10 * np.linalg.norm(a, 2) * np.linalg.norm(b, 2)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, dim=dims,
       ar=st.floats(-3, 3), ai=st.floats(-3, 3), br=st.floats(-3, 3), bi=st.floats(-3, 3))
def test_weak_commutator_shift_invariance(seed, dim, ar, ai, br, bi):
    a, b, phi, chi = instance(dim, seed)
    eye = np.eye(dim)
    q0 = weak_commutator(a, b, phi, chi)
    q1 = weak_commutator(a - complex(ar, ai) * eye, b - complex(br, bi) * eye, phi, chi)
    assert abs(q0 - q1) <= 1e-10 * (1 + abs(q0))


# -- objective and lambda form ------------------------------------------------------------

def test_objective_collapses_for_single_state():
    a, b = matlin.random_hermitian(5, 1), matlin.random_hermitian(5, 2)
    psi = matlin.random_state(5, 3)
    f = objective_F(a, b, psi, psi, mean(a, psi), mean(b, psi))
    assert f == pytest.approx(2 * deviation(a, psi) * deviation(b, psi), rel=1e-13)


def test_objective_grows_with_shift():
    a, b, phi, chi = instance(4, 5)
    values = [objective_F(a, b, phi, chi, r, r * 1j) for r in (10.0, 100.0, 1000.0)]
    assert values[0] < values[1] < values[2]
    assert values[2] > 1e5


@settings(max_examples=60, deadline=None)
@given(seed=seeds, dim=dims, ar=st.floats(-5, 5), ai=st.floats(-5, 5),
       br=st.floats(-5, 5), bi=st.floats(-5, 5))
def test_objective_dominates_weak_commutator(seed, dim, ar, ai, br, bi):
    a, b, phi, chi = instance(dim, seed)
    f = objective_F(a, b, phi, chi, complex(ar, ai), complex(br, bi))
    assert f >= abs(weak_commutator(a, b, phi, chi)) - 1e-9


@settings(max_examples=40, deadline=None)
@given(seed=seeds, dim=dims)
def test_parametrization_link(seed, dim):
    a, b, phi, chi = instance(dim, seed)
    m = pair_moments(a, b, phi, chi)
    for lam in np.random.default_rng(seed % 2**32).uniform(0, 1, 100):
        sa, sb = m.shifts(lam)
        assert lambda_form(lam, m) == pytest.approx(objective_F(a, b, phi, chi, sa, sb), abs=1e-10)


def test_lambda_form_constant_when_means_agree():
    a, b = matlin.random_hermitian(3, 1), matlin.random_hermitian(3, 2)
    psi = matlin.random_state(3, 3)
    m = pair_moments(a, b, psi, psi)
    target = 2 * deviation(a, psi) * deviation(b, psi)
    for lam in (0.0, 0.3, 0.7, 1.0):
        assert lambda_form(lam, m) == pytest.approx(target, rel=1e-13)


def test_lambda_form_range():
    m = pair_moments(*instance(3, 1))
    with pytest.raises(RangeError):
        lambda_form(1.5, m)
    with pytest.raises(RangeError):
        lambda_form(-0.1, m)


# -- stationary candidates -----------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(seed=seeds, dim=dims)
def test_stationary_polynomial_degree_and_candidates(seed, dim):
    m = pair_moments(*instance(dim, seed))
    assert stationary_polynomial(m).degree() <= 5
    cands = stationary_lambdas(m)
    assert 0.0 in cands and 1.0 in cands
    assert all(0.0 <= c <= 1.0 for c in cands)
    assert list(cands) == sorted(cands)


def test_stationary_roots_are_critical_points():
    m = pair_moments(*instance(5, 77))
    poly = stationary_polynomial(m)
    for c in stationary_lambdas(m):
        if 0.0 < c < 1.0:
            assert abs(poly(c)) <= 1e-10 * max(1.0, np.max(np.abs(poly.coef)))


def test_weyl_instance_has_half():
    pair = clock_shift(5)
    psi = matlin.random_state(5, 12)
    m = pair_moments(pair.W, pair.U, pair.U @ psi, matlin.adjoint(pair.W) @ psi)
    assert any(abs(c - 0.5) <= 1e-10 for c in stationary_lambdas(m))
    rep = gur_bound(pair.W, pair.U, pair.U @ psi, matlin.adjoint(pair.W) @ psi)
    assert rep.lambda_star == pytest.approx(0.5, abs=1e-8)


def test_degenerate_returns_half():
    a, b = matlin.random_hermitian(3, 4), matlin.random_hermitian(3, 5)
    psi = matlin.random_state(3, 6)
    m = pair_moments(a, b, psi, psi)
    assert is_degenerate(m)
    assert stationary_lambdas(m) == (0.5,)


def test_unitary_transform_weight():
    a = matlin.random_hermitian(6, 21)
    u = matlin.random_unitary_operator(6, 22)
    chi = matlin.random_state(6, 23)
    d_au, d_a = deviation(transformed(a, u), chi), deviation(a, chi)
    rep = gur_bound(a, u, u @ chi, chi)
    assert rep.lambda_star == pytest.approx(d_au / (d_au + d_a), abs=1e-8)


# -- engine --------------------------------------------------------------------------

def test_single_state_engine_is_robertson():
    a, b = matlin.random_hermitian(4, 31), matlin.random_hermitian(4, 32)
    psi = matlin.random_state(4, 33)
    rep = gur_bound(a, b, psi, psi)
    assert rep.rhs == pytest.approx(2 * deviation(a, psi) * deviation(b, psi), rel=1e-12)


def test_equal_operators_give_zero_lhs():
    a, _, phi, chi = instance(5, 8)
    rep = gur_bound(a, a, phi, chi)
    assert rep.lhs <= 1e-15 and rep.holds()


@settings(max_examples=100, deadline=None)
@given(seed=seeds, dim=st.integers(2, 16))
def test_core_inequality(seed, dim):
    rep = gur_bound(*instance(dim, seed))
    assert rep.slack >= -1e-9 * (1 + rep.rhs)
    assert rep.method is Method.QUINTIC


def test_report_shifts_follow_weight():
    a, b, phi, chi = instance(4, 9)
    rep = gur_bound(a, b, phi, chi)
    m = pair_moments(a, b, phi, chi)
    sa, sb = m.shifts(rep.lambda_star)
    assert rep.a_star == sa and rep.b_star == sb
    assert objective_F(a, b, phi, chi, sa, sb) == pytest.approx(rep.rhs, rel=1e-12)


# oracle values below were produced once by oracle_infimum / lambda_grid_minimum and frozen
FROZEN = [
    # dim, seed, oracle infimum, lambda-grid minimiser
    (3, 101, 0.39508141077555126, 0.527755004855594),
    (4, 202, 0.6289631562046358, 0.44828599589932294),
    (6, 303, 0.5152998600922187, 0.5045191385151194),
]


@pytest.mark.parametrize("dim,seed,value,lam", FROZEN)
def test_engine_against_frozen_oracle(dim, seed, value, lam):
    rep = gur_bound(*instance(dim, seed))
    assert rep.rhs == pytest.approx(value, rel=1e-6)
    assert rep.lambda_star == pytest.approx(lam, abs=1e-6)


@pytest.mark.parametrize("dim,seed", [(2, 1), (4, 2), (8, 3), (12, 4), (16, 5)])
def test_oracle_agreement(dim, seed):
    a, b, phi, chi = instance(dim, seed)
    rep = gur_bound(a, b, phi, chi)
    orc = oracle_infimum(a, b, phi, chi)
    assert abs(rep.rhs - orc.value) <= 1e-6 * orc.value
    lam, _ = lambda_grid_minimum(pair_moments(a, b, phi, chi))
    assert min(abs(lam - c) for c in rep.candidates) <= 1e-6


def test_oracle_recovers_means_for_single_state():
    a, b = matlin.random_hermitian(3, 41), matlin.random_hermitian(3, 42)
    psi = matlin.random_state(3, 43)
    orc = oracle_infimum(a, b, psi, psi)
    assert orc.value == pytest.approx(2 * deviation(a, psi) * deviation(b, psi), rel=1e-8)
    assert abs(orc.a - mean(a, psi)) <= 1e-3
    assert abs(orc.b - mean(b, psi)) <= 1e-3


def test_oracle_plateau_matches_constant_form():
    a, b = np.diag([1.0, -1.0, 0.5]).astype(complex), matlin.random_hermitian(3, 2)
    psi = matlin.random_state(3, 3)
    m = pair_moments(a, b, psi, psi)
    assert oracle_infimum(a, b, psi, psi).value == pytest.approx(lambda_form(0.4, m), rel=1e-8)


# -- single-state reduction ---------------------------------------------------------------

def test_robertson_spin_half():
    s = spin_system(0.5)
    psi = matlin.random_state(2, 51)
    rep = robertson(s.J1, s.J2, psi)
    assert rep.lhs == pytest.approx(abs(mean(s.J3, psi)), abs=1e-14)
    assert 0.5 * rep.lhs <= deviation(s.J1, psi) * deviation(s.J2, psi) + 1e-14
    assert "1/2 |q|" in rep.render()


def test_robertson_eigenstate():
    rep = robertson(SIGMA3, SIGMA1, UP)
    assert rep.lhs == 0.0 and rep.rhs == 0.0


def test_robertson_random_dim8():
    a, b = matlin.random_hermitian(8, 61), matlin.random_hermitian(8, 62)
    rep = robertson(a, b, matlin.random_state(8, 63))
    assert rep.slack >= -1e-10
