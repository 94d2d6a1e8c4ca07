"""Spread of a one-parameter unitary group ``V(s) = exp(-i s X)``."""

from __future__ import annotations

import math

import numpy as np

from .. import matlin
from ..records import ExperimentRecord, make_record
from ..ur_core import deviation

DEFAULT_S = tuple(2.0**-k for k in range(4, 11))


def sin2_double_sum(decomp: matlin.SpectralDecomposition, psi, s):
    """``2 sum_ij sin^2(s (x_i - x_j) / 2) w_i w_j`` over the spectral measure of ``psi``."""
    w = decomp.weights(psi)
    x = decomp.eigenvalues
    diff = x[:, None] - x[None, :]
    return float(2.0 * np.sum(np.sin(0.5 * s * diff) ** 2 * w[:, None] * w[None, :]))


def spread_identity_check(x_op, psi, s, tol=1e-10) -> ExperimentRecord:
    """Compare ``Delta^2(V(s))`` computed from the vector with the spectral double sum."""
    psi = matlin.as_state(psi)
    decomp = matlin.hermitian_eig(x_op)
    v = matlin.unitary_group(decomp, s)
    direct = deviation(v, psi) ** 2
    spectral = sin2_double_sum(decomp, psi, s)
    failures = [] if abs(direct - spectral) <= tol else ["IdentityMismatch"]
    return make_record("spread_identity", decomp.dim, direct, spectral, tol,
                       extra={"s": s, "abs_error": abs(direct - spectral)}, failures=failures)


def spread_limit_check(x_op, psi, s_sequence=DEFAULT_S, final_tol=1e-6,
                       order_range=(1.8, 2.2)) -> ExperimentRecord:
    """Convergence of ``Delta^2(V(s)) / s^2`` to ``Delta^2(X)``.

    ``s_sequence`` is given in units of ``1/||X||`` (operator norm) and must
    decrease.  Errors are measured relative to ``||X||^2``; the empirical
    order is the least-squares slope of ``log error`` against ``log s``.
    The record's ``lhs`` is the error at the last ``s`` and ``rhs`` is
    ``final_tol``.
    """
    psi = matlin.as_state(psi)
    s_seq = np.asarray(s_sequence, dtype=float)
    if s_seq.size < 2 or np.any(np.diff(s_seq) >= 0):
        raise ValueError("s_sequence must be strictly decreasing with at least two entries")
    decomp = matlin.hermitian_eig(x_op)
    norm = float(np.max(np.abs(decomp.eigenvalues)))
    var_x = deviation(x_op, psi) ** 2
    flags, failures = set(), []
    extra = {"Delta2_X": var_x, "norm_X": norm}
    if norm == 0.0:
        flags.add("Trivial")
        return make_record("spread_limit", decomp.dim, 0.0, final_tol, 0.0, flags=flags, extra=extra)
    errors = []
    for s_red in s_seq:
        s = s_red / norm
        ratio = deviation(matlin.unitary_group(decomp, s), psi) ** 2 / s**2
        errors.append(abs(ratio - var_x) / norm**2)
    for s_red, err in zip(s_seq, errors):
        extra[f"error_s{s_red:.6g}"] = err
    err = np.asarray(errors)
    if np.all(err < 1e-13):
        # eigenstates: the quotient is exact for every s
        flags.add("Exact")
        order = math.nan
    else:
        order = float(np.polyfit(np.log(s_seq), np.log(np.maximum(err, 1e-300)), 1)[0])
        if not order_range[0] <= order <= order_range[1]:
            failures.append("OrderOutOfRange")
    extra["order"] = order
    return make_record("spread_limit", decomp.dim, float(err[-1]), final_tol, 0.0,
                       flags=flags, extra=extra, failures=failures)
