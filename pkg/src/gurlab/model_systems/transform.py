"""Mean shift under a unitary transformation and under Heisenberg evolution."""

from __future__ import annotations

import math

import numpy as np

from .. import matlin
from ..records import ExperimentRecord, make_record
from ..ur_core import (deviation, gur_bound, lambda_grid_minimum, mean, moments,
                       pair_moments, unitary_spread, weak_commutator)


def transformed(a, u):
    """``U* A U``."""
    return matlin.adjoint(u) @ a @ u


def transform_lambdas(a, u, chi):
    """Optimal weight of the two-state bound with ``B = U``, ``phi = U chi``.

    Returns the two closed-form candidates (denominator ``Delta(A_U) + Delta(U)``
    as printed, and ``Delta(A_U) + Delta(A)`` as re-derived), the weight found
    by the engine, the dense-grid oracle weight, and the closed-form minimum
    value ``Delta(U) sqrt((Delta(A_U) + Delta(A))^2 + |dA|^2)``.  Weights are
    NaN when the form is flat in the weight and no minimiser is defined.
    """
    chi = matlin.as_state(chi)
    a_u = transformed(a, u)
    d_au, d_a, d_u = deviation(a_u, chi), deviation(a, chi), deviation(u, chi)
    d_mean = abs(mean(a_u, chi) - mean(a, chi))
    m = pair_moments(a, u, u @ chi, chi)
    rep = gur_bound(a, u, u @ chi, chi)
    out = {
        "closed_form_rhs": d_u * math.hypot(d_au + d_a, d_mean),
        "engine_rhs": rep.rhs,
        "lambda_engine": rep.lambda_star,
    }
    flat = d_u * d_mean <= 1e-9 or d_au + d_a <= 1e-12
    if flat:
        nan = math.nan
        out.update(lambda_printed=nan, lambda_rederived=nan, lambda_oracle=nan)
        return out
    out["lambda_printed"] = d_au / (d_au + d_u) if d_au + d_u > 0 else math.nan
    out["lambda_rederived"] = d_au / (d_au + d_a)
    out["lambda_oracle"] = lambda_grid_minimum(m)[0]
    return out


def unitary_transform_bound(a, u, chi, tol=1e-9) -> ExperimentRecord:
    """``|<A_U> - <A>| <= delta(U) (Delta(A_U) + Delta(A))`` with an engine cross-check."""
    a = matlin.as_matrix(a, "A")
    u = matlin.as_matrix(u, "U")
    chi = matlin.as_state(chi)
    a_u = transformed(a, u)
    lhs = abs(mean(a_u, chi) - mean(a, chi))
    du = unitary_spread(u, chi)
    dev_sum = deviation(a_u, chi) + deviation(a, chi)
    flags, failures = set(), []
    if du.infinite:
        flags.add("InfiniteSpread")
        rhs = math.inf
    else:
        rhs = du.value * dev_sum
    q = abs(weak_commutator(a, u, u @ chi, chi))
    if abs(q - lhs) > 1e-10 * (1.0 + np.linalg.norm(a, 2)):
        failures.append("EngineLhsMismatch")
    extra = {"weak_commutator": q, "delta_U": math.inf if du.infinite else du.value}
    lam = transform_lambdas(a, u, chi)
    extra.update(lam)
    if not math.isnan(lam["lambda_oracle"]):
        extra["printed_error"] = abs(lam["lambda_printed"] - lam["lambda_oracle"])
        extra["rederived_error"] = abs(lam["lambda_rederived"] - lam["lambda_oracle"])
    tol_abs = tol * (1.0 + (0.0 if math.isinf(rhs) else rhs))
    return make_record("unitary_transform", a.shape[0], lhs, rhs, tol_abs,
                       flags=flags, extra=extra, failures=failures)


class Evolution:
    """Heisenberg picture for a fixed Hamiltonian: ``A_t = U(t)* A U(t)``, ``U(t) = exp(-itH)``."""

    def __init__(self, h):
        self.h = matlin.as_matrix(h, "H")
        self.decomp = matlin.hermitian_eig(self.h)

    def U(self, t):
        return matlin.unitary_group(self.decomp, t)

    def heisenberg(self, a, t):
        return transformed(a, self.U(t))


def time_evolution_bound(a, h, chi, t1, t2, tol=1e-9) -> ExperimentRecord:
    """Mean drift of a Heisenberg observable between ``t1`` and ``t2``."""
    chi = matlin.as_state(chi)
    evo = Evolution(h)
    a1, a2 = evo.heisenberg(a, t1), evo.heisenberg(a, t2)
    m1, m2 = moments(a1, chi), moments(a2, chi)
    lhs = abs(m2.mean - m1.mean)
    du = unitary_spread(evo.U(t2 - t1), chi)
    flags = set()
    if du.infinite:
        flags.add("InfiniteSpread")
        rhs = math.inf
    else:
        rhs = du.value * (m1.deviation + m2.deviation)
    extra = {
        "t1": t1, "t2": t2,
        "mean_t1_re": m1.mean.real, "mean_t1_im": m1.mean.imag,
        "mean_t2_re": m2.mean.real, "mean_t2_im": m2.mean.imag,
        "Delta_t1": m1.deviation, "Delta_t2": m2.deviation,
        "delta_U": math.inf if du.infinite else du.value,
    }
    tol_abs = tol * (1.0 + (0.0 if math.isinf(rhs) else rhs))
    return make_record("time_evolution", evo.h.shape[0], lhs, rhs, tol_abs, flags=flags, extra=extra)


def richardson(values, ratio=2.0, power=2):
    """Richardson table for a central difference with step ratio ``ratio``; returns the last diagonal."""
    table = [list(values)]
    for j in range(1, len(values)):
        prev = table[-1]
        f = ratio ** (power * j)
        table.append([prev[k + 1] + (prev[k + 1] - prev[k]) / (f - 1.0) for k in range(len(prev) - 1)])
    return [row[-1] for row in table]


def derivative_bound_check(a, h, chi, t, h_sequence=(0.1, 0.05, 0.025, 0.0125, 0.00625),
                           tol=1e-7) -> ExperimentRecord:
    """``|d<A_t>/dt| / 2 <= Delta(H) Delta(A_t)`` with a Richardson-extrapolated derivative.

    ``h_sequence`` must halve at every step.  The exact derivative
    ``i <[H, A_t]>`` is stored alongside for comparison.
    """
    chi = matlin.as_state(chi)
    hs = [float(x) for x in h_sequence]
    if any(abs(hs[k] / hs[k + 1] - 2.0) > 1e-12 for k in range(len(hs) - 1)):
        raise ValueError("h_sequence must halve at each step")
    evo = Evolution(h)
    central = []
    for step in hs:
        up = mean(evo.heisenberg(a, t + step), chi)
        down = mean(evo.heisenberg(a, t - step), chi)
        central.append((up - down) / (2.0 * step))
    diag = richardson(central)
    deriv = diag[-1]
    a_t = evo.heisenberg(a, t)
    exact = complex(1j * np.vdot(chi, matlin.commutator(evo.h, a_t) @ chi))
    lhs = 0.5 * abs(deriv)
    rhs = deviation(evo.h, chi) * deviation(a_t, chi)
    extra = {
        "t": t,
        "derivative_re": deriv.real, "derivative_im": deriv.imag,
        "exact_re": exact.real, "exact_im": exact.imag,
        "richardson_change": abs(diag[-1] - diag[-2]) if len(diag) > 1 else math.nan,
    }
    return make_record("derivative", evo.h.shape[0], lhs, rhs, tol, extra=extra)
