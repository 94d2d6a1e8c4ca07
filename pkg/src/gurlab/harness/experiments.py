"""Registry of seeded experiments.

Every runner has the signature ``runner(dim, seed, tol) -> ExperimentRecord``
and draws all of its randomness from ``seed``, so a record can be replayed
from the seed it carries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .. import matlin
from ..model_systems import (PositionGrid, RotorModel, angmom_two_state_bound, bounded_norm_bound,
                             canonical_limit_check, clock_shift, derivative_bound_check, prop4_bound,
                             rotor_bound_check, spin_system, spread_identity_check,
                             spread_limit_check, time_evolution_bound, unitary_transform_bound,
                             weyl_bound_check)
from ..records import ExperimentRecord, make_record
from ..rotor_continuum import GridFunction, kraus_check, pathology_demo
from ..ur_core import (gur_bound, is_degenerate, lambda_grid_minimum, oracle_infimum,
                       pair_moments, robertson)

OPERATOR_KINDS = ("hermitian", "unitary", "normal")
ORACLE_REL_TOL = 1e-6
LAMBDA_TOL = 1e-6


def random_operator(kind, dim, rng):
    if kind == "hermitian":
        return matlin.random_hermitian(dim, rng)
    if kind == "unitary":
        return matlin.random_unitary_operator(dim, rng)
    return matlin.random_normal_operator(dim, rng)


def gur_instance(dim, seed):
    """``(A, B, phi, chi, kind codes)`` with operator kinds drawn uniformly."""
    rng = matlin.rng_from_seed(seed)
    ka, kb = (int(k) for k in rng.integers(0, len(OPERATOR_KINDS), 2))
    a = random_operator(OPERATOR_KINDS[ka], dim, rng)
    b = random_operator(OPERATOR_KINDS[kb], dim, rng)
    return a, b, matlin.random_state(dim, rng), matlin.random_state(dim, rng), (ka, kb)


def engine_record(model, a, b, phi, chi, tol, extra=None) -> ExperimentRecord:
    rep = gur_bound(a, b, phi, chi)
    ex = {"lambda_star": rep.lambda_star, "n_candidates": len(rep.candidates)}
    ex.update(extra or {})
    return make_record(model, a.shape[0], rep.lhs, rep.rhs, tol * (1.0 + rep.rhs), extra=ex)


def oracle_record(model, a, b, phi, chi, tol=ORACLE_REL_TOL, extra=None) -> ExperimentRecord:
    """Engine against both brute-force oracles.

    ``lhs`` is the engine's bound and ``rhs`` the grid-plus-descent infimum,
    so a negative slack means the search found a lower value than the
    stationary-point candidates.
    """
    rep = gur_bound(a, b, phi, chi)
    orc = oracle_infimum(a, b, phi, chi)
    m = pair_moments(a, b, phi, chi)
    lam_grid, _ = lambda_grid_minimum(m)
    rel = abs(rep.rhs - orc.value) / max(abs(orc.value), 1e-300)
    # on a flat form every weight is a minimiser
    miss = 0.0 if is_degenerate(m) else min(abs(lam_grid - c) for c in rep.candidates)
    failures = []
    if rel > tol:
        failures.append("OracleMismatch")
    if miss > LAMBDA_TOL:
        failures.append("LambdaGridMiss")
    ex = {"engine_rhs": rep.rhs, "oracle_value": orc.value, "relative_error": rel,
          "lambda_star": rep.lambda_star, "lambda_grid": lam_grid, "lambda_miss": miss,
          "gur_lhs": rep.lhs}
    ex.update(extra or {})
    return make_record(model, a.shape[0], rep.rhs, orc.value, tol * max(abs(orc.value), 1.0),
                       extra=ex, failures=failures)


# -- runners -----------------------------------------------------------------

def run_gur(dim, seed, tol):
    a, b, phi, chi, (ka, kb) = gur_instance(dim, seed)
    return engine_record("gur", a, b, phi, chi, tol, {"kind_A": ka, "kind_B": kb})


def oracle_gur(dim, seed, tol):
    a, b, phi, chi, (ka, kb) = gur_instance(dim, seed)
    return oracle_record("oracle", a, b, phi, chi, tol, {"kind_A": ka, "kind_B": kb})


def _weyl_instance(dim, seed):
    pair = clock_shift(dim)
    psi = matlin.random_state(dim, seed)
    return pair, psi


def run_weyl(dim, seed, tol):
    pair, psi = _weyl_instance(dim, seed)
    return weyl_bound_check(pair, psi, tol)


def oracle_weyl(dim, seed, tol):
    pair, psi = _weyl_instance(dim, seed)
    return oracle_record("weyl_oracle", pair.W, pair.U, pair.U @ psi,
                         matlin.adjoint(pair.W) @ psi, tol)


def _robertson_instance(dim, seed):
    rng = matlin.rng_from_seed(seed)
    return (matlin.random_hermitian(dim, rng), matlin.random_hermitian(dim, rng),
            matlin.random_state(dim, rng))


def run_robertson(dim, seed, tol):
    a, b, psi = _robertson_instance(dim, seed)
    rep = robertson(a, b, psi)
    # moments from the raw vector, independent of the core helpers
    def dev(x):
        v = x @ psi
        return math.sqrt(max(np.vdot(v, v).real - abs(np.vdot(psi, v)) ** 2, 0.0))
    independent = 2.0 * dev(a) * dev(b)
    err = abs(rep.rhs - independent)
    failures = ["RobertsonMismatch"] if err > 1e-12 else []
    return make_record("robertson", dim, rep.lhs, rep.rhs, tol * (1.0 + rep.rhs),
                       extra={"independent_rhs": independent, "rhs_error": err}, failures=failures)


def oracle_robertson(dim, seed, tol):
    a, b, psi = _robertson_instance(dim, seed)
    return oracle_record("robertson_oracle", a, b, psi, psi, tol)


def run_rotor(dim, seed, tol):
    """``dim`` is the cutoff ``M``; the state lives on ``|m| <= M - |n| - 2``."""
    rng = matlin.rng_from_seed(seed)
    n = int(rng.integers(1, 4)) * int(rng.choice([-1, 1]))
    beta = float(rng.uniform(0.1, 2.0 * math.pi - 0.1))
    model = RotorModel(dim)
    psi = model.random_edge_safe_state(rng, abs(n) + 2)
    rec = rotor_bound_check(model, n, beta, psi, tol)
    rec.extra.update(n=n, beta=beta)
    return rec


def run_canonical(dim, seed, tol):
    rng = matlin.rng_from_seed(seed)
    grid = PositionGrid(dim)
    # keep the Gaussian tail (width 1/sqrt 2) below 1e-8 outside the edge-safe window
    safe = abs(grid.x[0]) - (5 + 8) * grid.dx
    half = max(0.0, safe - 6.5 / math.sqrt(2.0))
    return canonical_limit_check(dim, "gaussian", tol=tol, center=float(rng.uniform(-half, half)),
                                 kick=float(rng.uniform(-1.0, 1.0)))


def run_spread_identity(dim, seed, tol):
    rng = matlin.rng_from_seed(seed)
    x = matlin.random_hermitian(dim, rng, scale=float(rng.uniform(0.5, 5.0)))
    return spread_identity_check(x, matlin.random_state(dim, rng), float(rng.uniform(0.01, 3.0)), tol)


def run_spread_limit(dim, seed, tol):
    rng = matlin.rng_from_seed(seed)
    x = matlin.random_hermitian(dim, rng, scale=float(rng.uniform(0.5, 5.0)))
    return spread_limit_check(x, matlin.random_state(dim, rng), final_tol=tol)


def _transform_instance(dim, seed):
    rng = matlin.rng_from_seed(seed)
    a = random_operator(OPERATOR_KINDS[int(rng.integers(0, 3))], dim, rng)
    return a, matlin.random_unitary_operator(dim, rng), matlin.random_state(dim, rng)


def run_unitary_transform(dim, seed, tol):
    a, u, chi = _transform_instance(dim, seed)
    return unitary_transform_bound(a, u, chi, tol)


def oracle_unitary_transform(dim, seed, tol):
    a, u, chi = _transform_instance(dim, seed)
    return oracle_record("unitary_transform_oracle", a, u, u @ chi, chi, tol)


def _evolution_instance(dim, seed):
    rng = matlin.rng_from_seed(seed)
    return (matlin.random_hermitian(dim, rng), matlin.random_hermitian(dim, rng),
            matlin.random_state(dim, rng), rng)


def run_time_evolution(dim, seed, tol):
    a, h, chi, rng = _evolution_instance(dim, seed)
    t1, t2 = (float(t) for t in rng.uniform(-2.0, 2.0, 2))
    return time_evolution_bound(a, h, chi, t1, t2, tol)


def run_derivative(dim, seed, tol):
    a, h, chi, rng = _evolution_instance(dim, seed)
    rec = derivative_bound_check(a, h, chi, float(rng.uniform(-2.0, 2.0)), tol=tol)
    fd = complex(rec.extra["derivative_re"], rec.extra["derivative_im"])
    exact = complex(rec.extra["exact_re"], rec.extra["exact_im"])
    if abs(fd - exact) > tol:
        rec = make_record("derivative", dim, rec.lhs, rec.rhs, tol, extra=rec.extra,
                          failures=["DerivativeMismatch"])
    return rec


def _spin_for_dim(dim):
    return spin_system((dim - 1) / 2)


def run_angmom(dim, seed, tol):
    rng = matlin.rng_from_seed(seed)
    sys = _spin_for_dim(dim)
    j1, j2 = (float(x) for x in rng.uniform(-sys.j, sys.j, 2))
    return angmom_two_state_bound(sys, matlin.random_state(dim, rng),
                                  matlin.random_state(dim, rng), j1, j2, tol)


def run_bounded_norm(dim, seed, tol):
    return bounded_norm_bound(_spin_for_dim(dim), matlin.random_state(dim, seed), tol)


def run_prop4(dim, seed, tol):
    return prop4_bound(_spin_for_dim(dim), matlin.random_state(dim, seed), tol)


def random_periodic_state(n, rng, max_mode=4, vanish_at_ends=False):
    """Random trigonometric polynomial on ``n`` nodes, optionally times ``sin^2(phi/2)``."""
    k = np.arange(-max_mode, max_mode + 1)
    c = (rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)) / (1.0 + np.abs(k))

    def f(p):
        v = np.exp(1j * np.outer(p, k)) @ c
        return v * np.sin(0.5 * p) ** 2 if vanish_at_ends else v

    return GridFunction.from_callable(f, n).normalized()


def run_kraus(dim, seed, tol):
    rng = matlin.rng_from_seed(seed)
    vanish = bool(rng.random() < 0.5)
    rec = kraus_check(random_periodic_state(dim, rng, vanish_at_ends=vanish), tol=tol)
    rec.extra["vanishing_ends"] = float(vanish)
    return rec


def run_pathology(dim, seed, tol):
    rng = matlin.rng_from_seed(seed)
    return pathology_demo(int(rng.integers(-5, 6)), dim)


# -- registry ----------------------------------------------------------------

@dataclass(frozen=True)
class Experiment:
    name: str
    runner: Callable
    dims: tuple
    tolerance: float
    min_dim: int
    description: str
    oracle: Optional[Callable] = None


EXPERIMENTS = {e.name: e for e in (
    Experiment("gur", run_gur, tuple(range(2, 33)), 1e-9, 1,
               "two-state bound on random Hermitian/unitary/normal pairs", oracle_gur),
    Experiment("oracle", oracle_gur, tuple(range(2, 9)), ORACLE_REL_TOL, 1,
               "engine minimum against grid-plus-descent and lambda-grid oracles"),
    Experiment("weyl", run_weyl, tuple(range(2, 13)), 1e-10, 2,
               "clock/shift pair: |omega-1|/2 <= delta(W) delta(U)", oracle_weyl),
    Experiment("robertson", run_robertson, tuple(range(2, 17)), 1e-9, 1,
               "phi = chi reduction to 2 Delta(A) Delta(B)", oracle_robertson),
    Experiment("rotor", run_rotor, (64,), 1e-10, 8,
               "truncated rotor: |n|/2 <= delta(W(n)) Delta(L); dim is the cutoff M"),
    Experiment("canonical", run_canonical, (64, 128, 256), 1e-10, 32,
               "periodic position grid approaching the canonical pair"),
    Experiment("spread_identity", run_spread_identity, tuple(range(2, 17)), 1e-10, 1,
               "Delta^2(exp(-isX)) against the spectral sin^2 double sum"),
    Experiment("spread_limit", run_spread_limit, tuple(range(2, 17)), 1e-6, 1,
               "Delta^2(V(s))/s^2 -> Delta^2(X) at second order"),
    Experiment("unitary_transform", run_unitary_transform, tuple(range(2, 9)), 1e-9, 1,
               "mean shift under a unitary and the closed-form optimal weight",
               oracle_unitary_transform),
    Experiment("time_evolution", run_time_evolution, (2, 4, 8), 1e-9, 1,
               "Heisenberg mean drift between two times"),
    Experiment("derivative", run_derivative, (2, 4, 8), 1e-7, 1,
               "rate of change of a mean against Delta(H) Delta(A_t)"),
    Experiment("angmom", run_angmom, tuple(range(2, 7)), 1e-10, 2,
               "two-state bound for J1, J2 with shifts"),
    Experiment("bounded_norm", run_bounded_norm, tuple(range(2, 7)), 1e-12, 2,
               "||J3 psi|| <= 2j (Delta(J1) + Delta(J2))"),
    Experiment("prop4", run_prop4, tuple(range(2, 7)), 1e-10, 2,
               "<|J3|> bound with the two-level projector"),
    Experiment("kraus", run_kraus, (256,), 1e-10, 16,
               "angle/angular-momentum relation with boundary term; dim is the grid size N"),
    Experiment("pathology", run_pathology, (512,), 1e-10, 16,
               "L eigenstates against the naive and corrected angle relations; dim is N"),
)}


def get_experiment(name) -> Experiment:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise KeyError(f"unknown experiment {name!r}; known: {', '.join(EXPERIMENTS)}") from None


def experiment_index(name):
    return list(EXPERIMENTS).index(name)
