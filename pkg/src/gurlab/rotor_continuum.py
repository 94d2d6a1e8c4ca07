"""Grid model of wave functions on the angle interval ``[0, 2 pi]``.

A :class:`GridFunction` stores samples at ``phi_k = 2 pi k / N`` for
``k = 0..N-1`` together with an explicit value at ``phi = 2 pi``.  The
right-end value is kept separately because boundary terms such as
``2 pi |chi(2 pi)|^2`` are exactly what the weak commutator of ``L`` and
``Phi`` picks up.  Inner products use the trapezoid rule on the closed grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonPeriodic, NotNormalized, SchemeMismatch
from .model_systems.rotor import RotorModel, rotor_bound_check
from .records import ExperimentRecord, make_record

TWO_PI = 2.0 * math.pi
SCHEMES = ("fourier_periodic", "finite_difference_onesided")
DEFAULT_NS = (64, 128, 256, 512, 1024)


@dataclass(frozen=True)
class GridFunction:
    values: np.ndarray
    boundary: complex

    @classmethod
    def from_callable(cls, f: Callable, n):
        nodes = TWO_PI * np.arange(n) / n
        return cls(np.asarray(f(nodes), dtype=np.complex128), complex(f(np.array([TWO_PI]))[0]))

    @property
    def N(self):
        return self.values.shape[0]

    @property
    def h(self):
        return TWO_PI / self.N

    @property
    def nodes(self):
        return self.h * np.arange(self.N)

    def closed(self):
        """Samples on all ``N + 1`` nodes including ``2 pi``."""
        return np.append(self.values, self.boundary)

    def is_periodic(self, tol=1e-12):
        scale = max(1.0, float(np.max(np.abs(self.values))))
        return abs(self.boundary - self.values[0]) <= tol * scale

    def inner(self, other: "GridFunction") -> complex:
        """Trapezoid approximation of ``int conj(self) other``."""
        prod = np.conj(self.closed()) * other.closed()
        return complex(self.h * (prod[1:-1].sum() + 0.5 * (prod[0] + prod[-1])))

    def norm(self):
        return math.sqrt(max(self.inner(self).real, 0.0))

    def normalized(self):
        n = self.norm()
        return GridFunction(self.values / n, self.boundary / n)

    def __sub__(self, other):
        return GridFunction(self.values - other.values, self.boundary - other.boundary)

    def scale(self, c):
        return GridFunction(c * self.values, c * self.boundary)


def phi_operator(f: GridFunction) -> GridFunction:
    """Multiplication by the angle."""
    return GridFunction(f.nodes * f.values, TWO_PI * f.boundary)


def l_operator(f: GridFunction, scheme="fourier_periodic") -> GridFunction:
    """``-i`` times the derivative, spectral for periodic data or by finite differences.

    The finite-difference scheme is second order: central in the interior
    and one-sided three-point at ``0`` and ``2 pi``.
    """
    if scheme == "fourier_periodic":
        if not f.is_periodic(1e-10):
            raise SchemeMismatch("fourier_periodic needs f(0) == f(2 pi)")
        k = np.fft.fftfreq(f.N, d=1.0 / f.N)
        if f.N % 2 == 0:
            k[f.N // 2] = 0.0
        lv = np.fft.ifft(k * np.fft.fft(f.values))
        return GridFunction(lv, complex(lv[0]))
    if scheme == "finite_difference_onesided":
        y = f.closed()
        d = np.empty_like(y)
        h = f.h
        d[1:-1] = (y[2:] - y[:-2]) / (2 * h)
        d[0] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * h)
        d[-1] = (3 * y[-1] - 4 * y[-2] + y[-3]) / (2 * h)
        d *= -1j
        return GridFunction(d[:-1], complex(d[-1]))
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def grid_moments(f: GridFunction, af: GridFunction):
    """Mean and deviation of an operator given ``f`` and its image ``af``."""
    m = f.inner(af)
    return m, (af - f.scale(m)).norm()


def kraus_terms(chi: GridFunction, scheme="fourier_periodic"):
    """Discrete weak commutator of ``L`` and ``Phi`` against its boundary formula."""
    l_chi = l_operator(chi, scheme)
    p_chi = phi_operator(chi)
    q = l_chi.inner(p_chi) - p_chi.inner(l_chi)
    analytic = 1j * (TWO_PI * abs(chi.boundary) ** 2 - 1.0)
    return q, analytic, l_chi, p_chi


def kraus_check(chi: GridFunction, scheme="fourier_periodic", tol=1e-10) -> ExperimentRecord:
    """Boundary-corrected single-state relation for the angle/angular-momentum pair.

    Checks ``|1 - 2 pi |chi(2 pi)|^2| / 2 <= Delta(L) Delta(Phi)``.  The
    tolerance is widened by the observed discretisation error of the weak
    commutator, which is also recorded.
    """
    if not chi.is_periodic(1e-10):
        raise NonPeriodic("chi(0) != chi(2 pi)")
    if abs(chi.norm() - 1.0) > 1e-10:
        raise NotNormalized("chi is not normalised under the trapezoid rule")
    q, analytic, l_chi, p_chi = kraus_terms(chi, scheme)
    _, dev_l = grid_moments(chi, l_chi)
    _, dev_phi = grid_moments(chi, p_chi)
    err = abs(q - analytic)
    lhs = 0.5 * abs(1.0 - TWO_PI * abs(chi.boundary) ** 2)
    extra = {
        "N": chi.N, "q_re": q.real, "q_im": q.imag, "analytic_im": analytic.imag,
        "kraus_error": err, "Delta_L": dev_l, "Delta_Phi": dev_phi,
        "boundary_weight": TWO_PI * abs(chi.boundary) ** 2,
    }
    return make_record("kraus", chi.N, lhs, dev_l * dev_phi, tol + err, extra=extra)


def kraus_convergence(chi_fn: Callable, ns=DEFAULT_NS, scheme="fourier_periodic",
                      noise=0.10, floor=1e-12) -> ExperimentRecord:
    """Run :func:`kraus_check` along a refinement sequence of grids.

    ``chi_fn`` maps an array of angles to (unnormalised) values; each grid
    renormalises.  The discretisation error must not grow by more than
    ``noise`` (relative) from one level to the next unless it is already
    below ``floor``.
    """
    records, errors = [], []
    for n in ns:
        chi = GridFunction.from_callable(chi_fn, n).normalized()
        rec = kraus_check(chi, scheme)
        records.append(rec)
        errors.append(rec.extra["kraus_error"])
    failures = [f"KraussFailed_N{r.extra['N']}" for r in records if not r.passed]
    for a, b in zip(errors, errors[1:]):
        if b > floor and b > (1.0 + noise) * a:
            failures.append("NonMonotone")
            break
    extra = {f"error_N{n}": e for n, e in zip(ns, errors)}
    big = [(n, e) for n, e in zip(ns, errors) if e > floor]
    if len(big) >= 2:
        ln = np.log([n for n, _ in big])
        le = np.log([e for _, e in big])
        extra["order"] = float(-np.polyfit(ln, le, 1)[0])
    last = records[-1]
    return make_record("kraus_convergence", ns[-1], last.lhs, last.rhs, last.extra["tolerance"],
                       extra=extra, failures=failures)


def eigenstate(m, n):
    """``exp(i m phi) / sqrt(2 pi)`` sampled on ``n`` nodes."""
    return GridFunction.from_callable(lambda p: np.exp(1j * m * p) / math.sqrt(TWO_PI), n)


def pathology_demo(m, n=512, rotor_n=1) -> ExperimentRecord:
    """The angular-momentum eigenstate against three forms of the angle relation.

    The textbook form ``Delta(Phi) Delta(L) >= 1/2`` fails (the product is
    0) and is flagged ``NaiveRelationViolated``; the boundary-corrected form
    reduces to ``0 <= 0`` and the rotor spread bound to ``1/2 <= inf * 0``.
    The record passes when the last two stay consistent.
    """
    chi = eigenstate(m, n)
    q, analytic, l_chi, p_chi = kraus_terms(chi)
    _, dev_l = grid_moments(chi, l_chi)
    _, dev_phi = grid_moments(chi, p_chi)
    product = dev_l * dev_phi
    kraus_lhs = 0.5 * abs(1.0 - TWO_PI * abs(chi.boundary) ** 2)
    flags, failures = set(), []
    if product < 0.5:
        flags.add("NaiveRelationViolated")
    if kraus_lhs > 1e-10 or abs(q) > 1e-10:
        failures.append("KrausNotZero")
    rotor = RotorModel(abs(m) + abs(rotor_n) + 2)
    rec = rotor_bound_check(rotor, rotor_n, 0.5, rotor.basis_state(m))
    if not rec.passed:
        failures.append("RotorInconsistent")
    extra = {
        "m": m, "N": n, "Delta_L": dev_l, "Delta_Phi": dev_phi, "naive_rhs": 0.5,
        "kraus_q_abs": abs(q), "rotor_Delta_W": rec.extra["Delta_W"],
    }
    return make_record("pathology", n, kraus_lhs, product, 1e-10,
                       flags=flags, extra=extra, failures=failures)
