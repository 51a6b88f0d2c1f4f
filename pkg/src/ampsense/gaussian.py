"""Multimode Gaussian states, symplectic operations and Gaussian channels.

Conventions: quadratures are ordered (x1, p1, ..., xn, pn) with [x, p] = i,
so the vacuum has Var(x) = Var(p) = 1/2 and a coherent state |alpha> has
mean sqrt(2) * (Re alpha, Im alpha).

All operations return new states; nothing is mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-9
SYMPLECTIC_TOL = 1e-10


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form for the interleaved (x, p) ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of an n-mode Gaussian state.

    :param mean: length-2n vector of quadrature means
    :param cov: 2n x 2n symmetric covariance matrix
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _frozen(self.mean).reshape(-1)
        cov = _frozen(self.cov)
        if mean.size == 0 or mean.size % 2:
            raise ValueError(f"mean must have even, nonzero length, got {mean.size}")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"cov shape {cov.shape} inconsistent with mean length {mean.size}")
        asym = np.max(np.abs(cov - cov.T)) if cov.size else 0.0
        if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
            raise ValueError(f"cov is not symmetric (max asymmetry {asym:.3g})")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def mode_slice(self, mode: int) -> slice:
        _check_mode(self, mode)
        return slice(2 * mode, 2 * mode + 2)

    def reduced(self, mode: int) -> "GaussianState":
        """Single-mode marginal of ``mode``."""
        sl = self.mode_slice(mode)
        return GaussianState(self.mean[sl], self.cov[sl, sl])

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        return bool(np.all(symplectic_eigenvalues(self) >= 0.5 - tol))

    def allclose(self, other: "GaussianState", atol: float = 1e-10) -> bool:
        return (
            self.n_modes == other.n_modes
            and np.allclose(self.mean, other.mean, atol=atol, rtol=0)
            and np.allclose(self.cov, other.cov, atol=atol, rtol=0)
        )

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes}, mean={self.mean.tolist()})"


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    """Affine symplectic map r -> S r + d acting on the full quadrature vector."""

    matrix: np.ndarray
    displacement: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        object.__setattr__(self, "displacement", _frozen(self.displacement).reshape(-1))
        n = self.displacement.size
        if self.matrix.shape != (n, n) or n % 2:
            raise ValueError("matrix and displacement dimensions do not match")

    @property
    def n_modes(self) -> int:
        return self.displacement.size // 2

    def is_symplectic(self, tol: float = SYMPLECTIC_TOL) -> bool:
        omega = symplectic_form(self.n_modes)
        return bool(np.max(np.abs(self.matrix @ omega @ self.matrix.T - omega)) <= tol)

    def apply(self, state: GaussianState) -> GaussianState:
        if state.n_modes != self.n_modes:
            raise ValueError(f"operator acts on {self.n_modes} modes, state has {state.n_modes}")
        S = self.matrix
        cov = S @ state.cov @ S.T
        return GaussianState(S @ state.mean + self.displacement, 0.5 * (cov + cov.T))


def _check_mode(state: GaussianState, mode: int) -> None:
    if not isinstance(mode, (int, np.integer)) or not 0 <= mode < state.n_modes:
        raise IndexError(f"mode {mode!r} out of range for {state.n_modes}-mode state")


def _embed(block: np.ndarray, modes: tuple[int, ...], n_modes: int) -> np.ndarray:
    S = np.eye(2 * n_modes)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes])
    S[np.ix_(idx, idx)] = block
    return S


def _rotation(angle: float) -> np.ndarray:
    # x -> x cos + p sin, p -> -x sin + p cos
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, s], [-s, c]])


# --- states -----------------------------------------------------------------


def vacuum(n_modes: int = 1) -> GaussianState:
    if not isinstance(n_modes, (int, np.integer)) or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    return GaussianState(np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes))


def coherent(alpha_re: float, alpha_im: float = 0.0) -> GaussianState:
    return GaussianState(np.sqrt(2.0) * np.array([alpha_re, alpha_im]), 0.5 * np.eye(2))


def thermal(n_mean: float) -> GaussianState:
    if n_mean < 0:
        raise ValueError("thermal occupation must be non-negative")
    return GaussianState(np.zeros(2), (n_mean + 0.5) * np.eye(2))


def tensor(*states: GaussianState) -> GaussianState:
    """Product state of independent Gaussian states, modes in argument order."""
    mean = np.concatenate([s.mean for s in states])
    n = mean.size
    cov = np.zeros((n, n))
    i = 0
    for s in states:
        k = s.mean.size
        cov[i:i + k, i:i + k] = s.cov
        i += k
    return GaussianState(mean, cov)


# --- symplectic operations ---------------------------------------------------


def squeeze_op(n_modes: int, mode: int, G: float, theta: float = 0.0) -> SymplecticOp:
    """Quadrature along angle ``theta`` scaled by e^G, the orthogonal one by e^-G."""
    R = _rotation(-theta)  # maps the x-axis onto the direction at angle theta
    block = R @ np.diag([np.exp(G), np.exp(-G)]) @ R.T
    return SymplecticOp(_embed(block, (mode,), n_modes), np.zeros(2 * n_modes))


def phase_shift_op(n_modes: int, mode: int, phi: float) -> SymplecticOp:
    return SymplecticOp(_embed(_rotation(phi), (mode,), n_modes), np.zeros(2 * n_modes))


def beamsplitter_op(n_modes: int, mode_a: int, mode_b: int, mixing_angle: float) -> SymplecticOp:
    # a' = cos a + sin b, b' = -sin a + cos b on both quadratures
    c, s = np.cos(mixing_angle), np.sin(mixing_angle)
    block = np.kron(np.array([[c, s], [-s, c]]), np.eye(2))
    return SymplecticOp(_embed(block, (mode_a, mode_b), n_modes), np.zeros(2 * n_modes))


def displacement_op(n_modes: int, mode: int, alpha_re: float, alpha_im: float = 0.0) -> SymplecticOp:
    d = np.zeros(2 * n_modes)
    d[2 * mode:2 * mode + 2] = np.sqrt(2.0) * np.array([alpha_re, alpha_im])
    return SymplecticOp(np.eye(2 * n_modes), d)


def squeeze(state: GaussianState, mode: int, G: float, theta: float = 0.0) -> GaussianState:
    """Phase-sensitive amplification of ``mode``: x_out = e^G x_in, p_out = e^-G p_in.

    ``theta`` rotates the amplified axis away from x; negative G squeezes it.
    """
    _check_mode(state, mode)
    return squeeze_op(state.n_modes, mode, G, theta).apply(state)


def phase_shift(state: GaussianState, mode: int, phi: float) -> GaussianState:
    _check_mode(state, mode)
    return phase_shift_op(state.n_modes, mode, phi).apply(state)


def beamsplitter(state: GaussianState, mode_a: int, mode_b: int, mixing_angle: float) -> GaussianState:
    """Two-mode mixing with transmissivity cos^2(mixing_angle)."""
    _check_mode(state, mode_a)
    _check_mode(state, mode_b)
    if mode_a == mode_b:
        raise ValueError("beamsplitter needs two distinct modes")
    return beamsplitter_op(state.n_modes, mode_a, mode_b, mixing_angle).apply(state)


def displace(state: GaussianState, mode: int, alpha_re: float, alpha_im: float = 0.0) -> GaussianState:
    _check_mode(state, mode)
    return displacement_op(state.n_modes, mode, alpha_re, alpha_im).apply(state)


# --- channels ----------------------------------------------------------------


def loss(state: GaussianState, mode: int, eta: float) -> GaussianState:
    """Pure-loss channel of transmission ``eta`` on one mode (vacuum environment)."""
    _check_mode(state, mode)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    n = state.n_modes
    scale = np.ones(2 * n)
    scale[2 * mode:2 * mode + 2] = np.sqrt(eta)
    cov = state.cov * np.outer(scale, scale)
    sl = slice(2 * mode, 2 * mode + 2)
    cov[sl, sl] += 0.5 * (1.0 - eta) * np.eye(2)
    return GaussianState(state.mean * scale, cov)


# --- statistics --------------------------------------------------------------


def mean_photon(state: GaussianState, mode: int = 0) -> float:
    sl = state.mode_slice(mode)
    d = state.mean[sl]
    s = state.cov[sl, sl]
    return float(0.5 * (s[0, 0] + s[1, 1] + d @ d) - 0.5)


def photon_variance(state: GaussianState, mode: int = 0) -> float:
    """Photon-number variance of the reduced state of ``mode``.

    Exact for the marginal: Var(N) = tr(s^2)/2 + d.s.d - 1/4.
    """
    sl = state.mode_slice(mode)
    d = state.mean[sl]
    s = state.cov[sl, sl]
    return float(0.5 * np.sum(s * s) + d @ s @ d - 0.25)


def symplectic_eigenvalues(state: GaussianState) -> np.ndarray:
    cov = state.cov
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
        raise ValueError("covariance matrix is not symmetric")
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(state.n_modes) @ cov))
    # eigenvalues come in +-nu pairs
    return np.sort(ev)[::2]


def purity(state: GaussianState) -> float:
    return float(1.0 / np.sqrt(np.linalg.det(2.0 * state.cov)))


def quadrature_variance_db(G: float) -> float:
    """Quadrature variance gain e^{2G} expressed in dB."""
    return float(10.0 * np.log10(np.exp(2.0 * G)))


def squeeze_factor_from_db(db: float) -> float:
    """Squeeze factor G whose variance scaling e^{2G} equals ``db`` decibels."""
    return float(db / (20.0 * np.log10(np.e)))
