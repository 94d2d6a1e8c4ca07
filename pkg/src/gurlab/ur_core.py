"""Two-state uncertainty bound for pairs of normal operators.

For normal ``A``, ``B`` and unit vectors ``phi``, ``chi`` the weak commutator
``q(phi, chi) = (A* phi, B chi) - (B* phi, A chi)`` is bounded by

    F(a, b) = ||(A-a) phi|| ||(B-b) chi|| + ||(B-b) phi|| ||(A-a) chi||

for every pair of complex shifts.  Along the segment
``a = l2 <A>_phi + l1 <A>_chi`` (likewise ``b``), ``l1 + l2 = 1``, ``F``
becomes a function of ``l1`` alone (:func:`lambda_form`) whose critical
points are the real roots in ``[0, 1]`` of a degree-5 polynomial
(:func:`stationary_polynomial`).  :func:`gur_bound` takes the smallest value
over those roots and the two endpoints.

Two brute-force oracles are provided for cross-checking: a grid-plus-descent
search over ``(a, b)`` (:func:`oracle_infimum`) and a dense ``l1`` grid whose
best point is polished on the form's own derivative (:func:`lambda_grid_minimum`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq, minimize_scalar

from . import matlin
from .errors import NotNormal, NotUnitary, RangeError

NORMAL_TOL = 1e-10
UNITARY_TOL = 1e-10
ZERO_MEAN = 1e-13
ROOT_IMAG_TOL = 1e-8
ROOT_EDGE_TOL = 1e-10
DEGENERATE_CUTOFF = 1e-14


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUINTIC = "quintic"
    SCAN = "scan"
    ORACLE = "oracle"


# -- single-state moments ---------------------------------------------------

def _prepare(a, psi):
    a = matlin.as_matrix(a, "operator")
    psi = matlin.as_state(psi)
    matlin.check_dims(a, psi)
    return a, psi


def mean(a, psi) -> complex:
    """``(psi, A psi)``."""
    a, psi = _prepare(a, psi)
    return complex(np.vdot(psi, a @ psi))


def deviation(a, psi) -> float:
    """``||(A - <A>) psi||``."""
    a, psi = _prepare(a, psi)
    apsi = a @ psi
    m = np.vdot(psi, apsi)
    return float(np.linalg.norm(apsi - m * psi))


class Spread(NamedTuple):
    """Unitary spread ``Delta / sqrt(1 - Delta**2)``; ``value`` is None when infinite."""

    value: float | None

    @property
    def infinite(self):
        return self.value is None

    def times(self, other: float):
        """Product with a finite nonnegative number; None when undefined/infinite."""
        if self.value is None:
            return None
        return self.value * other


@dataclass(frozen=True)
class MomentReport:
    mean: complex
    deviation: float
    unitary_spread: float | None = None
    spread_infinite: bool = False


def moments(a, psi, unitary=False) -> MomentReport:
    a, psi = _prepare(a, psi)
    apsi = a @ psi
    m = complex(np.vdot(psi, apsi))
    dev = float(np.linalg.norm(apsi - m * psi))
    if not unitary:
        return MomentReport(m, dev)
    if abs(m) <= ZERO_MEAN:
        return MomentReport(m, dev, None, True)
    return MomentReport(m, dev, dev / abs(m), False)


def unitary_spread(v, psi) -> Spread:
    """Spread of a unitary ``V`` in ``psi``.

    For unitary ``V`` one has ``1 - Delta**2 = |<V>|**2``, so the ratio is
    evaluated as ``Delta / |<V>|``; both factors are computed directly, which
    keeps the small-spread regime accurate.
    """
    v = matlin.as_matrix(v, "V")
    if not matlin.is_unitary(v, UNITARY_TOL):
        raise NotUnitary("operator is not unitary within 1e-10")
    rep = moments(v, psi, unitary=True)
    return Spread(rep.unitary_spread)


# -- two-state quantities ---------------------------------------------------

def _check_normal(*ops):
    for op in ops:
        if not matlin.is_normal(op, NORMAL_TOL):
            raise NotNormal("operator is not normal within 1e-10")


def _prepare_pair(a, b, phi, chi, check_normal=True):
    a = matlin.as_matrix(a, "A")
    b = matlin.as_matrix(b, "B")
    phi = matlin.as_state(phi, name="phi")
    chi = matlin.as_state(chi, name="chi")
    matlin.check_dims(a, b, phi, chi)
    if check_normal:
        _check_normal(a, b)
    return a, b, phi, chi


def weak_commutator(a, b, phi, chi, check_normal=True) -> complex:
    """``(A* phi, B chi) - (B* phi, A chi)``."""
    a, b, phi, chi = _prepare_pair(a, b, phi, chi, check_normal)
    ah, bh = matlin.adjoint(a), matlin.adjoint(b)
    return complex(np.vdot(ah @ phi, b @ chi) - np.vdot(bh @ phi, a @ chi))


def objective_F(a, b, phi, chi, a_shift: complex, b_shift: complex, check_normal=True) -> float:
    a, b, phi, chi = _prepare_pair(a, b, phi, chi, check_normal)
    n = np.linalg.norm
    return float(
        n(a @ phi - a_shift * phi) * n(b @ chi - b_shift * chi)
        + n(b @ phi - b_shift * phi) * n(a @ chi - a_shift * chi)
    )


@dataclass(frozen=True)
class PairMoments:
    """Means and deviations of ``A`` and ``B`` in both states."""

    mean_a_phi: complex
    mean_a_chi: complex
    mean_b_phi: complex
    mean_b_chi: complex
    dev_a_phi: float
    dev_a_chi: float
    dev_b_phi: float
    dev_b_chi: float

    @property
    def delta_a(self):
        return self.mean_a_phi - self.mean_a_chi

    @property
    def delta_b(self):
        return self.mean_b_phi - self.mean_b_chi

    def shifts(self, lam1):
        """``(a, b)`` on the segment between the two means."""
        lam2 = 1.0 - lam1
        return (
            lam2 * self.mean_a_phi + lam1 * self.mean_a_chi,
            lam2 * self.mean_b_phi + lam1 * self.mean_b_chi,
        )


def pair_moments(a, b, phi, chi, check_normal=True) -> PairMoments:
    a, b, phi, chi = _prepare_pair(a, b, phi, chi, check_normal)
    ma_p, ma_c = moments(a, phi), moments(a, chi)
    mb_p, mb_c = moments(b, phi), moments(b, chi)
    return PairMoments(
        ma_p.mean, ma_c.mean, mb_p.mean, mb_c.mean,
        ma_p.deviation, ma_c.deviation, mb_p.deviation, mb_c.deviation,
    )


def _lambda_form_values(lam1, m: PairMoments):
    lam1 = np.asarray(lam1, dtype=float)
    lam2 = 1.0 - lam1
    da2 = abs(m.delta_a) ** 2
    db2 = abs(m.delta_b) ** 2
    return (
        np.sqrt(m.dev_a_phi**2 + da2 * lam1**2) * np.sqrt(m.dev_b_chi**2 + db2 * lam2**2)
        + np.sqrt(m.dev_b_phi**2 + db2 * lam1**2) * np.sqrt(m.dev_a_chi**2 + da2 * lam2**2)
    )


def lambda_form(lam1: float, m: PairMoments) -> float:
    """Right-hand side of the bound at weight ``lam1`` (``lam2 = 1 - lam1``)."""
    if not 0.0 <= lam1 <= 1.0:
        raise RangeError(f"lambda must lie in [0, 1], got {lam1!r}")
    return float(_lambda_form_values(lam1, m))


def stationary_polynomial(m: PairMoments) -> Polynomial:
    """Critical-point condition ``gamma1**2 l2**2 - gamma2**2 l1**2`` in powers of ``l1``.

    The nominal sextic terms cancel identically, leaving degree at most 5.
    """
    l1 = Polynomial([0.0, 1.0])
    l2 = Polynomial([1.0, -1.0])
    da2 = abs(m.delta_a) ** 2
    db2 = abs(m.delta_b) ** 2
    left = (m.dev_a_phi**2 + da2 * l1**2) * (m.dev_b_phi**2 + db2 * l1**2) * l2**2
    right = (m.dev_a_chi**2 + da2 * l2**2) * (m.dev_b_chi**2 + db2 * l2**2) * l1**2
    return left - right


def _data_scale(m: PairMoments):
    s = max(m.dev_a_phi**2, m.dev_a_chi**2, m.dev_b_phi**2, m.dev_b_chi**2,
            abs(m.delta_a) ** 2, abs(m.delta_b) ** 2)
    return max(1.0, s * s)


def _polish(poly: Polynomial, x, steps=3):
    d = poly.deriv()
    for _ in range(steps):
        dx = d(x)
        if dx == 0.0:
            break
        nx = x - poly(x) / dx
        if not (-ROOT_EDGE_TOL <= nx <= 1.0 + ROOT_EDGE_TOL) or abs(poly(nx)) >= abs(poly(x)):
            break
        x = nx
    return x


def is_degenerate(m: PairMoments) -> bool:
    """True when the form does not depend on ``l1``.

    That happens when both mean differences vanish (every weight gives the
    same shifts) or when the stationary polynomial vanishes identically.
    """
    scale = _data_scale(m)
    mean_gap = max(abs(m.delta_a), abs(m.delta_b)) ** 2
    if mean_gap <= DEGENERATE_CUTOFF * math.sqrt(scale):
        return True
    coeffs = stationary_polynomial(m).coef
    return bool(np.all(np.abs(coeffs) <= DEGENERATE_CUTOFF * scale))


def stationary_lambdas(m: PairMoments) -> tuple[float, ...]:
    """Candidate minimisers ``l1``: real roots in [0, 1] plus both endpoints.

    When every coefficient of the stationary polynomial vanishes the form is
    flat in ``l1`` and ``(0.5,)`` is returned.
    """
    if is_degenerate(m):
        return (0.5,)
    poly = stationary_polynomial(m)
    roots = matlin.companion_roots(poly.coef, cutoff=DEGENERATE_CUTOFF)
    found = {0.0, 1.0}
    for r in roots:
        if abs(r.imag) > ROOT_IMAG_TOL:
            continue
        x = r.real
        if not -ROOT_EDGE_TOL <= x <= 1.0 + ROOT_EDGE_TOL:
            continue
        x = min(max(_polish(poly, x), 0.0), 1.0)
        found.add(float(x))
    return tuple(sorted(found))


# -- reports ----------------------------------------------------------------

@dataclass(frozen=True)
class GurReport:
    lhs: float
    rhs: float
    a_star: complex
    b_star: complex
    lambda_star: float
    method: Method
    candidates: tuple[float, ...] = field(default=())

    @property
    def slack(self):
        return self.rhs - self.lhs

    def holds(self, rel_tol=1e-9):
        return self.lhs <= self.rhs + rel_tol * (1.0 + self.rhs)

    def render(self):
        if self.method is Method.CLOSED_FORM:
            return f"1/2 |q| = {0.5 * self.lhs:.15g} <= Delta(A) Delta(B) = {0.5 * self.rhs:.15g}"
        return f"|q| = {self.lhs:.15g} <= {self.rhs:.15g}  (lambda1 = {self.lambda_star:.12g}, {self.method.value})"


def gur_bound(a, b, phi, chi) -> GurReport:
    """Evaluate both sides of the two-state bound, minimising over the stationary candidates."""
    a, b, phi, chi = _prepare_pair(a, b, phi, chi)
    lhs = abs(weak_commutator(a, b, phi, chi, check_normal=False))
    m = pair_moments(a, b, phi, chi, check_normal=False)
    cands = stationary_lambdas(m)
    values = _lambda_form_values(np.array(cands), m)
    best = int(np.argmin(values))
    lam = cands[best]
    a_star, b_star = m.shifts(lam)
    return GurReport(lhs, float(values[best]), a_star, b_star, lam, Method.QUINTIC, cands)


def robertson(a, b, psi) -> GurReport:
    """Single-state case ``phi = chi = psi``: ``rhs = 2 Delta(A) Delta(B)``."""
    a, b, psi, _ = _prepare_pair(a, b, psi, psi)
    lhs = abs(weak_commutator(a, b, psi, psi, check_normal=False))
    ma, mb = moments(a, psi), moments(b, psi)
    rhs = 2.0 * ma.deviation * mb.deviation
    return GurReport(lhs, rhs, ma.mean, mb.mean, 0.5, Method.CLOSED_FORM, (0.5,))


# -- oracles ----------------------------------------------------------------

def _lambda_form_slope(lam1, m: PairMoments):
    """Derivative of :func:`lambda_form` in ``l1``, differentiated term by term."""
    lam2 = 1.0 - lam1
    da2 = abs(m.delta_a) ** 2
    db2 = abs(m.delta_b) ** 2
    s1 = math.sqrt(m.dev_a_phi**2 + da2 * lam1**2)
    s2 = math.sqrt(m.dev_b_chi**2 + db2 * lam2**2)
    s3 = math.sqrt(m.dev_b_phi**2 + db2 * lam1**2)
    s4 = math.sqrt(m.dev_a_chi**2 + da2 * lam2**2)

    def ratio(num, den):
        return num / den if den > 0.0 else 0.0

    return (ratio(da2 * lam1, s1) * s2 - s1 * ratio(db2 * lam2, s2)
            + ratio(db2 * lam1, s3) * s4 - s3 * ratio(da2 * lam2, s4))


def lambda_grid_minimum(m: PairMoments, n_grid=10_000, refine=True):
    """Brute-force minimum of :func:`lambda_form` over ``[0, 1]``; returns ``(l1, value)``.

    The grid minimiser is polished by bracketing a sign change of the form's
    derivative between its grid neighbours (bounded Brent search if there is none).
    """
    grid = np.linspace(0.0, 1.0, n_grid)
    vals = _lambda_form_values(grid, m)
    i = int(np.argmin(vals))
    if not refine:
        return float(grid[i]), float(vals[i])
    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, n_grid - 1)])
    d_lo, d_hi = _lambda_form_slope(lo, m), _lambda_form_slope(hi, m)
    if d_lo < 0.0 < d_hi:
        x = brentq(_lambda_form_slope, lo, hi, args=(m,), xtol=1e-15, rtol=4 * np.finfo(float).eps)
        fx = float(_lambda_form_values(x, m))
    else:
        res = minimize_scalar(lambda t: float(_lambda_form_values(t, m)), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12})
        # the bracket ends may beat the interior point when the minimum is at an edge
        ends = ((float(_lambda_form_values(t, m)), t) for t in (lo, hi))
        fx, x = min((float(res.fun), float(res.x)), *ends)
    if fx > vals[i]:
        return float(grid[i]), float(vals[i])
    return float(x), float(fx)


class OracleResult(NamedTuple):
    value: float
    a: complex
    b: complex


def default_box(m: PairMoments):
    """Search box ``((re_lo, re_hi), (im_lo, im_hi))`` for each shift, as 3 deviations around the means."""
    spread = 3.0 * max(m.dev_a_phi, m.dev_a_chi, m.dev_b_phi, m.dev_b_chi, 1e-3)

    def box(*zs):
        re = [z.real for z in zs]
        im = [z.imag for z in zs]
        return (min(re) - spread, max(re) + spread), (min(im) - spread, max(im) + spread)

    return box(m.mean_a_phi, m.mean_a_chi), box(m.mean_b_phi, m.mean_b_chi)


def oracle_infimum(a, b, phi, chi, box=None, n_grid=41, step_tol=1e-8, starts=3) -> OracleResult:
    """Grid search over ``(a, b)`` followed by compass-descent refinement.

    ``box`` is ``(a_box, b_box)`` with each entry ``((re_lo, re_hi), (im_lo, im_hi))``;
    the default comes from :func:`default_box`.  ``F`` is evaluated from the
    vectors directly, never through the moment identities.
    """
    a, b, phi, chi = _prepare_pair(a, b, phi, chi)
    if n_grid < 2:
        raise ValueError("n_grid must be >= 2")
    if box is None:
        box = default_box(pair_moments(a, b, phi, chi, check_normal=False))
    a_phi, a_chi, b_phi, b_chi = a @ phi, a @ chi, b @ phi, b @ chi

    def axis_grid(bx):
        (rl, rh), (il, ih) = bx
        re, im = np.meshgrid(np.linspace(rl, rh, n_grid), np.linspace(il, ih, n_grid), indexing="ij")
        return (re + 1j * im).ravel(), ((rh - rl) / (n_grid - 1), (ih - il) / (n_grid - 1))

    ga, step_a = axis_grid(box[0])
    gb, step_b = axis_grid(box[1])
    n = np.linalg.norm
    na_phi = n(a_phi[None, :] - ga[:, None] * phi[None, :], axis=1)
    na_chi = n(a_chi[None, :] - ga[:, None] * chi[None, :], axis=1)
    nb_phi = n(b_phi[None, :] - gb[:, None] * phi[None, :], axis=1)
    nb_chi = n(b_chi[None, :] - gb[:, None] * chi[None, :], axis=1)
    grid_f = na_phi[:, None] * nb_chi[None, :] + na_chi[:, None] * nb_phi[None, :]

    def f(x):
        sa = complex(x[0], x[1])
        sb = complex(x[2], x[3])
        return float(
            n(a_phi - sa * phi) * n(b_chi - sb * chi) + n(b_phi - sb * phi) * n(a_chi - sa * chi)
        )

    flat = grid_f.ravel()
    k = min(starts, flat.size)
    best_idx = np.argpartition(flat, k - 1)[:k]
    best = None
    for idx in best_idx:
        ia, ib = divmod(int(idx), gb.size)
        x = np.array([ga[ia].real, ga[ia].imag, gb[ib].real, gb[ib].imag])
        fx = float(flat[idx])
        steps = np.array([step_a[0], step_a[1], step_b[0], step_b[1]])
        steps[steps <= 0] = step_tol
        while np.max(steps) > step_tol:
            improved = False
            for i in range(4):
                for sgn in (1.0, -1.0):
                    y = x.copy()
                    y[i] += sgn * steps[i]
                    fy = f(y)
                    if fy < fx:
                        x, fx, improved = y, fy, True
                        break
            if not improved:
                steps *= 0.5
        if best is None or fx < best.value:
            best = OracleResult(fx, complex(x[0], x[1]), complex(x[2], x[3]))
    return best
