"""Truncated Fock-space oracle for single-mode photon statistics.

Independent of the phase-space formalism in :mod:`ampsense.gaussian`: states are
density matrices, unitaries are matrix exponentials of truncated generators, and
loss is the binomial Kraus map. Used by the test suite to cross-check photon
number moments at small squeezing and displacement.

Unitaries are built in a padded space and the result is projected back onto the
stored cutoff. The state is never renormalized, so any population pushed beyond
the cutoff shows up as a trace deficit, which raises :class:`TruncationError`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

TRACE_TOL = 1e-6
HERMITIAN_TOL = 1e-10
EIGEN_TOL = 1e-8


class TruncationError(RuntimeError):
    """Cutoff too small: population leaked outside the truncated space."""


@dataclass(frozen=True, eq=False)
class FockDensity:
    cutoff: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if self.cutoff < 1 or m.shape != (self.cutoff + 1, self.cutoff + 1):
            raise ValueError(f"matrix shape {m.shape} does not match cutoff {self.cutoff}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        deficit = 1.0 - np.trace(m).real
        if deficit > TRACE_TOL:
            raise TruncationError(
                f"trace deficit {deficit:.3g} exceeds {TRACE_TOL:g} at cutoff {self.cutoff}"
            )
        if abs(deficit) > TRACE_TOL:
            raise ValueError(f"trace {1 - deficit:.12g} is not unity")
        if np.min(np.linalg.eigvalsh(m)) < -EIGEN_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def _annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), k=1)


def _padded_dim(cutoff: int) -> int:
    return 2 * cutoff + 40


def _apply_generator(rho: FockDensity, generator) -> FockDensity:
    """Evolve with U = expm(generator(a)) in a padded space, then truncate."""
    dim = _padded_dim(rho.cutoff)
    a = _annihilation(dim)
    U = expm(generator(a))
    big = np.zeros((dim, dim), dtype=complex)
    k = rho.cutoff + 1
    big[:k, :k] = rho.matrix
    out = U @ big @ U.conj().T
    return FockDensity(rho.cutoff, out[:k, :k])


def fock_vacuum(cutoff: int) -> FockDensity:
    m = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    m[0, 0] = 1.0
    return FockDensity(cutoff, m)


def fock_number(n: int, cutoff: int) -> FockDensity:
    if not 0 <= n <= cutoff:
        raise ValueError("Fock index outside the truncated space")
    m = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    m[n, n] = 1.0
    return FockDensity(cutoff, m)


def oracle_squeeze(rho: FockDensity, G: float) -> FockDensity:
    """Amplify x by e^G: U = exp(G (a^dag^2 - a^2) / 2)."""
    return _apply_generator(rho, lambda a: 0.5 * G * (a.T @ a.T - a @ a))


def oracle_displace(rho: FockDensity, alpha: complex) -> FockDensity:
    alpha = complex(alpha)
    return _apply_generator(rho, lambda a: alpha * a.T - alpha.conjugate() * a)


def oracle_rotate(rho: FockDensity, phi: float) -> FockDensity:
    # a -> a e^{-i phi}, matching the phase-space rotation convention
    n = np.arange(rho.cutoff + 1)
    u = np.exp(-1j * phi * n)
    return FockDensity(rho.cutoff, u[:, None] * rho.matrix * u.conj()[None, :])


def oracle_squeezed_vacuum(G: float, cutoff: int) -> FockDensity:
    return oracle_squeeze(fock_vacuum(cutoff), G)


def oracle_apply_loss(rho: FockDensity, eta: float) -> FockDensity:
    """Binomial loss: rho'_mn = sum_k sqrt(C(m+k,k) C(n+k,k)) eta^{(m+n)/2} (1-eta)^k rho_{m+k,n+k}."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    dim = rho.cutoff + 1
    if eta == 1.0:
        return rho
    n = np.arange(dim)
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        m = dim - k
        idx = n[:m]
        # log binomial C(j+k, k) for j = 0..m-1
        logc = gammaln(idx + k + 1) - gammaln(idx + 1) - gammaln(k + 1)
        if eta > 0.0:
            w = np.exp(0.5 * logc + 0.5 * idx * np.log(eta))
        else:
            w = (idx == 0).astype(float)
        loss_factor = (1.0 - eta) ** k
        out[:m, :m] += loss_factor * np.outer(w, w) * rho.matrix[k:, k:]
    return FockDensity(rho.cutoff, out)


def oracle_moments(rho: FockDensity) -> tuple[float, float]:
    """Mean and variance of the photon number of the truncated matrix."""
    p = rho.populations
    n = np.arange(p.size)
    mean = float(p @ n)
    var = float(p @ n**2 - mean**2)
    return mean, var
