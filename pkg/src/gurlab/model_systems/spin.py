"""Spin-j angular momentum and the bounds built on ``[J1, J2] = i J3``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .. import matlin
from ..errors import MixedParity
from ..records import ExperimentRecord, make_record
from ..ur_core import deviation, moments

IDENTITY_TOL = 1e-10


def _as_half_integer(j):
    f = Fraction(j).limit_denominator(2)
    if f < 0 or f.denominator not in (1, 2) or abs(float(f) - float(j)) > 1e-12:
        raise ValueError(f"j must be a nonnegative half-integer, got {j!r}")
    return f


@dataclass(frozen=True)
class SpinSystem:
    """Angular momentum operators on a direct sum of irreducible spins.

    Basis vectors are ordered block by block and, inside each block, by
    ``m = j, j-1, ..., -j``.
    """

    spins: tuple
    J1: np.ndarray
    J2: np.ndarray
    J3: np.ndarray
    Jplus: np.ndarray
    Jminus: np.ndarray
    Jsq: np.ndarray

    @property
    def j(self):
        """Largest spin present; bounds the norm of every ``J_i``."""
        return float(max(self.spins))

    @property
    def dim(self):
        return self.J3.shape[0]

    @property
    def parity(self):
        kinds = {"bosonic" if s.denominator == 1 else "fermionic" for s in self.spins}
        if len(kinds) != 1:
            raise MixedParity("direct sum mixes integer and half-integer spins")
        return kinds.pop()

    @property
    def delta(self):
        return 0 if self.parity == "bosonic" else 1

    @property
    def m_values(self):
        return np.diag(self.J3).real.copy()

    def residuals(self):
        """Largest Frobenius residual of the defining algebraic identities."""
        c = matlin.commutator
        eye = np.eye(self.dim)
        casimir = self.J1 @ self.J1 + self.J2 @ self.J2 + self.J3 @ self.J3
        return max(
            matlin.frobenius(c(self.J1, self.J2) - 1j * self.J3),
            matlin.frobenius(c(self.J2, self.J3) - 1j * self.J1),
            matlin.frobenius(c(self.J3, self.J1) - 1j * self.J2),
            matlin.frobenius(casimir - self.Jsq),
            matlin.frobenius(self.Jplus - (self.J1 + 1j * self.J2)),
            matlin.frobenius(self.Jminus - (self.J1 - 1j * self.J2)),
            matlin.frobenius(c(self.J3, self.Jplus) - self.Jplus),
            matlin.frobenius(c(self.J3, self.Jminus) + self.Jminus),
            matlin.frobenius(self.Jsq - self.Jsq[0, 0] * eye) if len(self.spins) == 1 else 0.0,
        )


def spin_system(j) -> SpinSystem:
    """Irreducible spin ``j`` built from the raising operator in the ``J3`` eigenbasis."""
    jf = _as_half_integer(j)
    jv = float(jf)
    m = np.arange(jv, -jv - 1.0, -1.0)
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1)); rows are ordered by decreasing m
    jplus = np.diag(np.sqrt(jv * (jv + 1.0) - m[1:] * (m[1:] + 1.0)), 1).astype(np.complex128)
    jminus = matlin.adjoint(jplus)
    return SpinSystem(
        spins=(jf,),
        J1=0.5 * (jplus + jminus),
        J2=-0.5j * (jplus - jminus),
        J3=np.diag(m).astype(np.complex128),
        Jplus=jplus,
        Jminus=jminus,
        Jsq=jv * (jv + 1.0) * np.eye(m.size, dtype=np.complex128),
    )


def direct_sum(*systems: SpinSystem) -> SpinSystem:
    """Block-diagonal sum; all summands must share parity."""
    if not systems:
        raise ValueError("need at least one summand")
    spins = tuple(s for sys in systems for s in sys.spins)
    out = SpinSystem(
        spins=spins,
        **{name: scipy.linalg.block_diag(*(getattr(s, name) for s in systems)).astype(np.complex128)
           for name in ("J1", "J2", "J3", "Jplus", "Jminus", "Jsq")},
    )
    out.parity  # raises MixedParity
    return out


def angmom_two_state_bound(sys: SpinSystem, phi, psi, j1, j2, tol=1e-10) -> ExperimentRecord:
    """``|(phi, J3 psi)| <= ||(J1-j1)phi|| ||(J2-j2)psi|| + ||(J2-j2)phi|| ||(J1-j1)psi||``."""
    phi = matlin.as_state(phi, name="phi")
    psi = matlin.as_state(psi, name="psi")
    eye = np.eye(sys.dim)
    s1, s2 = sys.J1 - j1 * eye, sys.J2 - j2 * eye
    n = np.linalg.norm
    lhs = abs(np.vdot(phi, sys.J3 @ psi))
    rhs = n(s1 @ phi) * n(s2 @ psi) + n(s2 @ phi) * n(s1 @ psi)
    return make_record("angmom", sys.dim, lhs, rhs, tol, extra={"j1": j1, "j2": j2})


def bounded_norm_bound(sys: SpinSystem, psi, tol=1e-12) -> ExperimentRecord:
    """``||J3 psi|| <= 2j (Delta(J1) + Delta(J2))``; checks the ``J3 psi = 0`` branch too."""
    psi = matlin.as_state(psi)
    d1, d2 = deviation(sys.J1, psi), deviation(sys.J2, psi)
    lhs = float(np.linalg.norm(sys.J3 @ psi))
    rhs = 2.0 * sys.j * (d1 + d2)
    failures, extra = [], {"Delta_J1": d1, "Delta_J2": d2, "j": sys.j}
    if lhs <= 1e-12:
        half_casimir = 0.5 * np.vdot(psi, sys.Jsq @ psi).real
        extra["zero_branch"] = 1.0
        if abs(d1**2 - half_casimir) > IDENTITY_TOL or abs(d2**2 - half_casimir) > IDENTITY_TOL:
            failures.append("ZeroBranchMismatch")
    return make_record("bounded_norm", sys.dim, lhs, rhs, tol, extra=extra, failures=failures)


@dataclass(frozen=True)
class Prop4Operators:
    """Sign operator ``E``, two-level projector ``P`` and derived operators for one choice of ``mu``."""

    mu: float
    E: np.ndarray
    P: np.ndarray
    absJ3: np.ndarray
    root: np.ndarray  # [J^2 + delta/4]^{1/2}


def prop4_operators(sys: SpinSystem, mu) -> Prop4Operators:
    m = sys.m_values
    two_levels = np.isclose(m, mu, atol=1e-9) | np.isclose(m, mu - 1.0, atol=1e-9)
    p = np.diag(two_levels.astype(np.complex128))
    e = np.diag(np.where(m >= mu - 1e-9, 1.0, -1.0).astype(np.complex128))
    root = matlin.matrix_function(matlin.hermitian_eig(sys.Jsq + 0.25 * sys.delta * np.eye(sys.dim)),
                                  math.sqrt)
    return Prop4Operators(float(mu), e, p, e @ sys.J3, root)


def prop4_identity_residuals(sys: SpinSystem, ops: Prop4Operators):
    """Residuals of the operator identities the bound is built from."""
    eye = np.eye(sys.dim)
    f = matlin.frobenius
    res = {
        "E2": f(ops.E @ ops.E - eye),
        "P2": f(ops.P @ ops.P - ops.P),
        "J3_sign": f(sys.J3 - ops.E @ ops.absJ3),
    }
    for i, ji in (("1", sys.J1), ("2", sys.J2)):
        w = ops.E @ ji @ ops.E - ji
        res[f"W{i}"] = f(w + 2.0 * ops.P @ ji @ ops.P)
        abs_w = matlin.matrix_function(matlin.hermitian_eig(w), abs)
        res[f"absW{i}"] = f(abs_w - ops.root @ ops.P)
    return res


def prop4_bound(sys: SpinSystem, psi, tol=1e-10) -> ExperimentRecord:
    """``<|J3|> <= 2 Delta(J1) Delta(J2) + ||[J^2+delta/4]^{1/2} P psi|| (Delta(J1) + Delta(J2))``.

    Integer spins admit two choices of ``mu`` (0 and 1); both are checked
    and the record reports the tighter right side.  When ``P psi = 0`` the
    reduced form ``<|J3|>/2 <= Delta(J1) Delta(J2)`` is checked as well.
    """
    psi = matlin.as_state(psi)
    mus = (0.5,) if sys.parity == "fermionic" else (0.0, 1.0)
    d1, d2 = deviation(sys.J1, psi), deviation(sys.J2, psi)
    failures, extra = [], {"Delta_J1": d1, "Delta_J2": d2, "delta": sys.delta}
    best = None
    for mu in mus:
        ops = prop4_operators(sys, mu)
        for name, r in prop4_identity_residuals(sys, ops).items():
            extra[f"res_{name}_mu{mu:g}"] = r
            if r > IDENTITY_TOL:
                failures.append(f"Identity_{name}_mu{mu:g}")
        lhs = moments(ops.absJ3, psi).mean.real
        p_psi = ops.P @ psi
        rhs = 2.0 * d1 * d2 + float(np.linalg.norm(ops.root @ p_psi)) * (d1 + d2)
        extra[f"rhs_mu{mu:g}"] = rhs
        if rhs - lhs < -tol:
            failures.append(f"BoundViolated_mu{mu:g}")
        if np.linalg.norm(p_psi) <= 1e-12:
            extra[f"corollary_mu{mu:g}"] = 1.0
            if d1 * d2 - 0.5 * lhs < -tol:
                failures.append(f"CorollaryViolated_mu{mu:g}")
        if best is None or rhs < best[1]:
            best = (lhs, rhs, mu)
    lhs, rhs, mu = best
    extra["mu"] = mu
    return make_record("prop4", sys.dim, lhs, rhs, tol, extra=extra, failures=failures)
