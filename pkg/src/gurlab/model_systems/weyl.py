"""Finite Weyl pairs: clock-and-shift matrices and the periodic position grid."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .. import matlin
from ..errors import EdgeSupport
from ..records import ExperimentRecord, make_record
from ..ur_core import deviation, gur_bound, mean, unitary_spread

PAIR_TOL = 1e-12


def weyl_residual(w, u, omega):
    """Relative Frobenius residual of ``WU = omega UW``."""
    lhs = w @ u
    rhs = omega * (u @ w)
    return matlin.frobenius(lhs - rhs) / max(matlin.frobenius(lhs), 1e-300)


@dataclass(frozen=True)
class WeylPair:
    """Unitaries with ``W U = omega U W``."""

    dim: int
    U: np.ndarray
    W: np.ndarray
    omega: complex

    def __post_init__(self):
        if abs(abs(self.omega) - 1.0) > PAIR_TOL:
            raise ValueError("omega must be unimodular")
        for name in ("U", "W"):
            if not matlin.is_unitary(getattr(self, name), PAIR_TOL):
                raise ValueError(f"{name} is not unitary within {PAIR_TOL}")
        if weyl_residual(self.W, self.U, self.omega) > PAIR_TOL:
            raise ValueError("W U != omega U W")

    @property
    def epsilon(self):
        """``|omega - 1| / 2``."""
        return 0.5 * abs(self.omega - 1.0)

    def swapped(self):
        """The same relation read the other way: ``U W = conj(omega) W U``."""
        return WeylPair(self.dim, self.W, self.U, self.omega.conjugate())


def shift_matrix(d, steps=1):
    """Cyclic shift sending basis vector ``e_k`` to ``e_{k+steps mod d}``."""
    return np.roll(np.eye(d, dtype=np.complex128), steps, axis=0)


def clock_shift(d) -> WeylPair:
    """Clock ``W = diag(omega**k)`` and shift ``U``, ``omega = exp(2 pi i / d)``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    omega = cmath.exp(2j * math.pi / d)
    w = np.diag(omega ** np.arange(d))
    return WeylPair(d, shift_matrix(d), w, omega)


def commuting_pair(d, seed=0) -> WeylPair:
    """Two commuting diagonal unitaries, i.e. a Weyl pair with ``omega = 1``."""
    rng = matlin.rng_from_seed(seed)
    u = np.diag(np.exp(1j * rng.uniform(-math.pi, math.pi, d)))
    w = np.diag(np.exp(1j * rng.uniform(-math.pi, math.pi, d)))
    return WeylPair(d, u, w, 1.0 + 0j)


def mean_transport_check(pair: WeylPair, psi, tol=1e-12) -> bool:
    """Check how the means move under ``phi = U psi`` and ``chi = W* psi``."""
    psi = matlin.as_state(psi)
    phi = pair.U @ psi
    chi = matlin.adjoint(pair.W) @ psi
    w_psi, u_psi = mean(pair.W, psi), mean(pair.U, psi)
    pairs = [
        (mean(pair.W, phi), pair.omega * w_psi),
        (mean(pair.W, chi), w_psi),
        (mean(pair.U, phi), u_psi),
        (mean(pair.U, chi), pair.omega * u_psi),
    ]
    return all(abs(x - y) <= tol for x, y in pairs)


def weyl_bound_check(pair: WeylPair, psi, tol=1e-10) -> ExperimentRecord:
    """``eps <= delta(W) delta(U)`` plus the two-state engine run behind it.

    The engine is run with ``A = W``, ``B = U``, ``phi = U psi``,
    ``chi = W* psi``; its left side must equal ``|omega - 1|`` and, for
    ``omega != 1``, its optimal weight must be ``1/2``.
    """
    psi = matlin.as_state(psi)
    eps = pair.epsilon
    dw = unitary_spread(pair.W, psi)
    du = unitary_spread(pair.U, psi)
    flags, failures = set(), []
    if dw.infinite or du.infinite:
        flags.add("InfiniteSpread")
        rhs = math.inf
    else:
        rhs = dw.value * du.value

    rep = gur_bound(pair.W, pair.U, pair.U @ psi, matlin.adjoint(pair.W) @ psi)
    target = abs(pair.omega - 1.0)
    if abs(rep.lhs - target) > 1e-10:
        failures.append("EngineLhsMismatch")
    if target > 1e-12 and abs(rep.lambda_star - 0.5) > 1e-8:
        failures.append("LambdaNotHalf")
    if not rep.holds():
        failures.append("EngineBoundViolated")
    extra = {
        "epsilon": eps,
        "engine_lhs": rep.lhs,
        "engine_rhs": rep.rhs,
        "lambda_star": rep.lambda_star,
        "delta_W": dw.value if not dw.infinite else math.inf,
        "delta_U": du.value if not du.infinite else math.inf,
    }
    return make_record("weyl", pair.dim, eps, rhs, tol, flags=flags, extra=extra, failures=failures)


# -- periodic position grid -------------------------------------------------

@dataclass(frozen=True)
class PositionGrid:
    """``d`` sites ``x_k = (k - d//2) dx`` with ``dx = sqrt(2 pi / d)``.

    ``W(alpha) = exp(-i alpha X)`` and the shift by ``n`` sites, which is
    ``U(n dx) = exp(-i n dx P)``, form an exact Weyl pair whenever ``alpha``
    is a multiple of ``2 pi / (d dx)`` (here equal to ``dx``).
    """

    d: int

    @property
    def dx(self):
        return math.sqrt(2.0 * math.pi / self.d)

    @property
    def x(self):
        return (np.arange(self.d) - self.d // 2) * self.dx

    @property
    def alpha(self):
        return 2.0 * math.pi / (self.d * self.dx)

    def X(self):
        return np.diag(self.x.astype(np.complex128))

    def W(self, alpha=None):
        alpha = self.alpha if alpha is None else alpha
        return np.diag(np.exp(-1j * alpha * self.x))

    def pair(self, n_shift=1) -> WeylPair:
        beta = n_shift * self.dx
        return WeylPair(self.d, shift_matrix(self.d, n_shift), self.W(),
                        cmath.exp(-1j * self.alpha * beta))

    def momentum_deviation(self, psi):
        """Deviation of the shift generator, whose spectrum is the DFT lattice."""
        amp = np.fft.fft(psi)
        prob = np.abs(amp) ** 2
        prob /= prob.sum()
        p = 2.0 * math.pi * np.fft.fftfreq(self.d, d=self.dx)
        mp = float(np.sum(prob * p))
        return math.sqrt(max(float(np.sum(prob * (p - mp) ** 2)), 0.0))

    def gaussian(self, center=0.0, width=1.0 / math.sqrt(2.0), kick=0.0):
        """Sampled ``exp(-(x-c)^2 / (4 w^2) + i k x)``; ``width`` is the position deviation."""
        x = self.x
        return matlin.normalize(np.exp(-((x - center) ** 2) / (4.0 * width**2) + 1j * kick * x))

    def site_state(self, k=None):
        v = np.zeros(self.d, dtype=np.complex128)
        v[self.d // 2 if k is None else k] = 1.0
        return v


def _edge_mass(psi, margin):
    w = np.abs(psi) ** 2
    return float(w[:margin].sum() + w[-margin:].sum())


def canonical_limit_check(d, state_family="gaussian", shifts=(8, 4, 2, 1), tol=1e-10,
                          edge_margin=5, **state_kw) -> ExperimentRecord:
    """Canonical-pair forms of the Weyl bound on a ``d``-site periodic grid.

    For each shift ``n`` in ``shifts`` (``beta = n dx``, decreasing) both

        |sin(alpha beta / 2)| / |alpha beta| <= delta(W)/|alpha| * delta(U)/|beta|
        1/2 <= Delta(X) delta(U(beta)) / |beta|

    are evaluated.  The record's sides are the second form at the smallest
    ``beta``; the whole sequence of right sides is kept in ``extra`` and must
    be non-increasing.
    """
    grid = PositionGrid(d)
    if state_family == "gaussian":
        psi = grid.gaussian(**state_kw)
    elif state_family == "site":
        psi = grid.site_state(**state_kw)
    else:
        raise ValueError(f"unknown state family {state_family!r}")
    margin = edge_margin + max(abs(n) for n in shifts)
    if _edge_mass(psi, margin) > 1e-8:
        raise EdgeSupport(f"state has more than 1e-8 weight within {margin} sites of the edge")

    alpha = grid.alpha
    dev_x = deviation(grid.X(), psi)
    dw = unitary_spread(grid.W(), psi)
    flags, failures = set(), []
    extra = {"alpha": alpha, "dx": grid.dx, "Delta_X": dev_x,
             "Delta_P": grid.momentum_deviation(psi)}
    extra["limit_target"] = dev_x * extra["Delta_P"]
    seq = []
    for n in shifts:
        pair = grid.pair(n)
        beta = n * grid.dx
        ab = alpha * beta
        du = unitary_spread(pair.U, psi)
        sinc = abs(math.sin(0.5 * ab)) / abs(ab)
        extra[f"sinc_n{n}"] = sinc
        if du.infinite or dw.infinite:
            flags.add("WeylFormTrivial")
        elif (dw.value / alpha) * (du.value / beta) < sinc - tol:
            failures.append(f"WeylFormViolated_n{n}")
        if du.infinite:
            flags.add("InfiniteSpread")
            seq.append(math.inf)
            continue
        lim = dev_x * du.value / beta
        extra[f"rhs_n{n}"] = lim
        seq.append(lim)
    if "InfiniteSpread" not in flags:
        if any(b > a + 1e-12 for a, b in zip(seq, seq[1:])):
            failures.append("NonMonotone")
    rhs = seq[-1]
    return make_record("canonical", d, 0.5, rhs, tol, flags=flags, extra=extra, failures=failures)
