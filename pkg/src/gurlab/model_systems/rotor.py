"""Truncated rotor: angular momentum ``L = diag(m)``, ``m = -M..M``."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .. import matlin
from ..errors import EdgeSupport
from ..records import ExperimentRecord, make_record
from ..ur_core import deviation, unitary_spread

EDGE_MASS = 1e-8


@dataclass(frozen=True)
class RotorModel:
    M: int

    @property
    def dim(self):
        return 2 * self.M + 1

    @property
    def m(self):
        return np.arange(-self.M, self.M + 1)

    def L(self):
        return np.diag(self.m.astype(np.complex128))

    def U(self, beta):
        """``exp(-i beta L)``, diagonal."""
        return np.diag(np.exp(-1j * beta * self.m))

    def W(self, n):
        """``exp(-i n Phi)``: sends ``|m>`` to ``|m - n>``, closed cyclically at the cutoff.

        The wrap-around entries only act on the outer ``|n|`` levels, which
        edge-safe states do not populate.
        """
        return np.roll(np.eye(self.dim, dtype=np.complex128), -n, axis=0)

    def basis_state(self, m):
        v = np.zeros(self.dim, dtype=np.complex128)
        v[m + self.M] = 1.0
        return v

    def edge_mass(self, psi, margin):
        w = np.abs(np.asarray(psi)) ** 2
        outer = np.abs(self.m) > self.M - margin
        return float(w[outer].sum())

    def is_edge_safe(self, psi, margin):
        return self.edge_mass(psi, margin) < EDGE_MASS

    def random_edge_safe_state(self, seed, margin):
        """Random state on ``|m| <= M - margin``: a Gaussian envelope or flat random amplitudes."""
        rng = matlin.rng_from_seed(seed)
        inner = self.M - margin
        m = self.m
        amp = (rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim))
        if rng.random() < 0.5:
            center = rng.uniform(-inner / 2, inner / 2)
            width = rng.uniform(0.5, inner / 6)
            kick = rng.uniform(-math.pi, math.pi)
            amp = np.exp(-((m - center) ** 2) / (4 * width**2) + 1j * kick * m)
        else:
            lo = int(rng.integers(-inner, inner))
            hi = int(rng.integers(lo, inner + 1))
            amp = np.where((m >= lo) & (m <= hi), amp, 0.0)
        amp = np.where(np.abs(m) <= inner, amp, 0.0)
        return matlin.normalize(amp)


def rotor_relation_residual(model: RotorModel, n, beta, psi):
    """``||W(n) U(beta) psi - exp(-i n beta) U(beta) W(n) psi||``."""
    w, u = model.W(n), model.U(beta)
    return float(np.linalg.norm(w @ (u @ psi) - cmath.exp(-1j * n * beta) * (u @ (w @ psi))))


def rotor_bound_check(model: RotorModel, n, beta, psi, tol=1e-10) -> ExperimentRecord:
    """Rotor form of the Weyl bound and its small-``beta`` limit.

    Checks ``|sin(n beta/2)|/|beta| <= delta(W(n)) delta(U(beta))/|beta|``
    and records ``|n|/2 <= delta(W(n)) Delta(L)`` as the main inequality.
    """
    psi = matlin.as_state(psi)
    if not 0.0 < beta < 2.0 * math.pi:
        raise ValueError("beta must lie in (0, 2 pi)")
    if not model.is_edge_safe(psi, abs(n)):
        raise EdgeSupport(f"state has weight >= {EDGE_MASS} within {abs(n)} levels of the cutoff")
    w = model.W(n)
    dw = unitary_spread(w, psi)
    du = unitary_spread(model.U(beta), psi)
    dev_l = deviation(model.L(), psi)
    flags, failures = set(), []
    extra = {
        "n": n, "beta": beta, "Delta_L": dev_l, "Delta_W": deviation(w, psi),
        "delta_W": math.inf if dw.infinite else dw.value,
        "delta_U": math.inf if du.infinite else du.value,
    }
    if rotor_relation_residual(model, n, beta, psi) > 1e-12:
        failures.append("RotorRelation")
    if n == 0:
        flags.add("Trivial")
    weyl_lhs = abs(math.sin(0.5 * n * beta)) / beta
    extra["weyl_lhs"] = weyl_lhs
    if dw.infinite or du.infinite:
        flags.add("WeylFormTrivial")
    else:
        weyl_rhs = dw.value * du.value / beta
        extra["weyl_rhs"] = weyl_rhs
        if weyl_rhs < weyl_lhs - tol:
            failures.append("WeylFormViolated")
    if dw.infinite:
        flags.add("InfiniteSpread")
        rhs = math.inf
    else:
        rhs = dw.value * dev_l
    return make_record("rotor", model.dim, 0.5 * abs(n), rhs, tol,
                       flags=flags, extra=extra, failures=failures)
