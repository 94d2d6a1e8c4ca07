"""Dense complex linear algebra used throughout gurlab.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; the
helpers here validate and normalise inputs, diagonalise Hermitian matrices
with a cyclic Jacobi method, apply scalar functions through the spectral
decomposition and draw seeded random operators and states.

Randomness
----------
Every random draw goes through :func:`rng_from_seed`, which wraps numpy's
PCG64 bit generator seeded via ``SeedSequence``.  Per-record seeds are
derived from a 64-bit master seed with :func:`derive_seed`, so any record of
a campaign can be regenerated from its own seed alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DimMismatch, DomainError, NonHermitian, NoConvergence, NotNormalized

SeedLike = Union[int, np.random.Generator]

MAX_SWEEPS = 50


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite square complex128 array (a copy-free view if possible)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimMismatch(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_state(psi, tol=1e-12, name="state"):
    """Return ``psi`` as a complex vector, checking it has unit norm."""
    v = np.asarray(psi, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DimMismatch(f"{name} must be a non-empty vector, got shape {v.shape}")
    norm = np.linalg.norm(v)
    if not abs(norm - 1.0) <= tol:
        raise NotNormalized(f"{name} has norm {norm!r}, expected 1")
    return v


def normalize(psi):
    v = np.asarray(psi, dtype=np.complex128)
    return v / np.linalg.norm(v)


def check_dims(*arrays):
    dims = {a.shape[0] for a in arrays}
    if len(dims) != 1:
        raise DimMismatch(f"inconsistent dimensions {sorted(dims)}")
    return dims.pop()


def adjoint(a):
    return np.conj(np.transpose(a))


def frobenius(a):
    return float(np.linalg.norm(a))


def commutator(a, b):
    return a @ b - b @ a


def is_hermitian(h, tol=1e-12):
    h = np.asarray(h)
    return frobenius(h - adjoint(h)) <= tol * max(frobenius(h), 1e-300)


def is_normal(a, tol=1e-10):
    """True iff ``||A*A - AA*||_F <= tol * ||A||_F**2``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_matrix(a)
    scale = frobenius(a) ** 2
    return frobenius(adjoint(a) @ a - a @ adjoint(a)) <= tol * scale


def is_unitary(v, tol=1e-10):
    v = as_matrix(v)
    return frobenius(adjoint(v) @ v - np.eye(v.shape[0])) <= tol * math.sqrt(v.shape[0])


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    basis: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        return (self.basis * self.eigenvalues) @ adjoint(self.basis)

    def weights(self, psi):
        """Spectral measure of ``psi``: ``|<e_i, psi>|**2`` per eigenvalue."""
        return np.abs(adjoint(self.basis) @ psi) ** 2


def _off_norm(a):
    return frobenius(a - np.diag(np.diag(a)))


def _jacobi_sweeps(a, v, max_sweeps):
    n = a.shape[0]
    norm = frobenius(a)
    target = np.finfo(float).eps * norm
    for sweep in range(max_sweeps):
        off = _off_norm(a)
        if off <= target:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ph = apq / mag
                # G = diag(1, conj(ph)) @ [[c, s], [-s, c]] acting on columns p, q
                g_qp = -s * np.conj(ph)
                g_qq = c * np.conj(ph)
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p + g_qp * col_q
                a[:, q] = s * col_p + g_qq * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p + np.conj(g_qp) * row_q
                a[q, :] = s * row_p + np.conj(g_qq) * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp + g_qp * vq
                v[:, q] = s * vp + g_qq * vq
    off = _off_norm(a)
    if off <= target:
        return max_sweeps
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})")


def hermitian_eig(h, max_sweeps=MAX_SWEEPS):
    """Diagonalise a Hermitian matrix by cyclic complex Jacobi rotations.

    Eigenvalues are returned in ascending order; ties keep the order in which
    they appear on the rotated diagonal.

    Raises
    ------
    NonHermitian
        if ``||H - H*||_F > 1e-12 ||H||_F``.
    NoConvergence
        if the off-diagonal mass is still above ``eps ||H||_F`` after
        ``max_sweeps`` sweeps.
    """
    h = as_matrix(h, "H")
    if not is_hermitian(h, 1e-12):
        raise NonHermitian("matrix is not Hermitian within 1e-12 ||H||_F")
    n = h.shape[0]
    a = 0.5 * (h + adjoint(h))
    v = np.eye(n, dtype=np.complex128)
    if n > 1:
        _jacobi_sweeps(a, v, max_sweeps)
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(eigenvalues=w[order], basis=v[:, order])


def matrix_function(decomp: SpectralDecomposition, f: Callable[[float], complex]):
    """``basis @ diag(f(eigenvalues)) @ basis*`` for a scalar map ``f``.

    ``f`` is called once per eigenvalue with a Python float.  Any exception
    it raises, or a non-finite value, is reported as :class:`DomainError`.
    """
    values = np.empty(decomp.dim, dtype=np.complex128)
    for i, lam in enumerate(decomp.eigenvalues):
        try:
            fx = complex(f(float(lam)))
        except (ValueError, ArithmeticError) as exc:
            raise DomainError(f"f undefined at eigenvalue {lam!r}: {exc}") from exc
        if not (math.isfinite(fx.real) and math.isfinite(fx.imag)):
            raise DomainError(f"f not finite at eigenvalue {lam!r}")
        values[i] = fx
    return (decomp.basis * values) @ adjoint(decomp.basis)


def unitary_group(decomp: SpectralDecomposition, s):
    """``exp(-i s X)`` for the Hermitian ``X`` behind ``decomp``."""
    return matrix_function(decomp, lambda x: np.exp(-1j * s * x))


def companion_roots(coeffs, cutoff=1e-14):
    """Complex roots of ``sum(coeffs[k] * x**k)`` from its companion matrix.

    Leading coefficients below ``cutoff * max|coeffs|`` are dropped first, so
    a nominal quintic whose top coefficients cancel is solved at its true
    degree.  Returns an empty array for constant polynomials.
    """
    c = np.asarray(coeffs, dtype=float)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.empty(0, dtype=np.complex128)
    keep = np.nonzero(np.abs(c) > cutoff * scale)[0]
    c = c[: keep[-1] + 1]
    deg = c.size - 1
    if deg < 1:
        return np.empty(0, dtype=np.complex128)
    comp = np.zeros((deg, deg))
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(comp)


# -- randomness -------------------------------------------------------------

def rng_from_seed(seed: SeedLike):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def derive_seed(master, *keys):
    """Deterministic 64-bit child seed of ``master`` for the integer path ``keys``."""
    ss = np.random.SeedSequence([int(master) & (2**64 - 1), *[int(k) for k in keys]])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def haar_unitary(dim, seed: SeedLike):
    """Haar-distributed unitary: QR of a complex Ginibre matrix with phase-fixed R."""
    rng = rng_from_seed(seed)
    q, r = np.linalg.qr(_complex_gaussian(rng, (dim, dim)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_normal_operator(dim, seed: SeedLike, spectrum_box=((-1.0, 1.0), (-1.0, 1.0))):
    """``V diag(z) V*`` with Haar ``V`` and ``z`` uniform in the given complex box.

    ``spectrum_box`` is ``((re_lo, re_hi), (im_lo, im_hi))``; a zero-height
    box gives a Hermitian operator.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = rng_from_seed(seed)
    (re_lo, re_hi), (im_lo, im_hi) = spectrum_box
    z = rng.uniform(re_lo, re_hi, dim) + 1j * rng.uniform(im_lo, im_hi, dim)
    if dim == 1:
        return z.reshape(1, 1)
    v = haar_unitary(dim, rng)
    return (v * z) @ adjoint(v)


def random_hermitian(dim, seed: SeedLike, scale=1.0):
    return random_normal_operator(dim, seed, ((-scale, scale), (0.0, 0.0)))


def random_unitary_operator(dim, seed: SeedLike):
    """Unitary with Haar eigenbasis and eigenphases uniform on the circle."""
    rng = rng_from_seed(seed)
    phases = np.exp(1j * rng.uniform(-math.pi, math.pi, dim))
    v = haar_unitary(dim, rng)
    return (v * phases) @ adjoint(v)


def random_state(dim, seed: SeedLike):
    """Normalised complex Gaussian vector."""
    rng = rng_from_seed(seed)
    return normalize(_complex_gaussian(rng, dim))
