"""Squeezing-assisted polarization interferometer with an output parametric amplifier.

Two modes: 0 is the horizontally polarized coherent beam, 1 the vertically
polarized squeezed vacuum. The half-wave plate acts as a Mach-Zehnder
interferometer between the circular-polarization modes. Mode 1 is amplified
(x quadrature) and detected by direct photon counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from . import gaussian as gs

H, V = 0, 1

HEADLINE_DEFAULTS = dict(
    n_alpha=1500.0,
    g1=1.7,
    g2=3.2,
    eta=0.5,
    mu=0.97,
    g2_corr=1.004,
    dark_rms=500.0,
    sv_enabled=True,
    mu_on_coherent=False,
)

GRID_POINTS = 721
SLOPE_FLOOR = 1e-12
N_ALPHA_REL_STEP = 1e-3


class ConfigError(ValueError):
    pass


class NeverCrossesError(RuntimeError):
    """Sub-shot-noise sensitivity is not reached for any efficiency up to 1."""


@dataclass(frozen=True)
class InterferometerConfig:
    """Physical parameters of the experiment.

    ``n_alpha`` is in photons per pulse at the wave plate, ``dark_rms`` in
    photons RMS per pulse. ``mu`` is the transmission between the squeezer and
    the output amplifier; it always acts on the squeezed vacuum and acts on the
    coherent beam only when ``mu_on_coherent`` is set.
    """

    n_alpha: float = HEADLINE_DEFAULTS["n_alpha"]
    g1: float = HEADLINE_DEFAULTS["g1"]
    g2: float = HEADLINE_DEFAULTS["g2"]
    eta: float = HEADLINE_DEFAULTS["eta"]
    mu: float = HEADLINE_DEFAULTS["mu"]
    g2_corr: float = HEADLINE_DEFAULTS["g2_corr"]
    dark_rms: float = HEADLINE_DEFAULTS["dark_rms"]
    sv_enabled: bool = HEADLINE_DEFAULTS["sv_enabled"]
    mu_on_coherent: bool = HEADLINE_DEFAULTS["mu_on_coherent"]

    def __post_init__(self):
        checks = [
            ("eta", 0 < self.eta <= 1, "0 < eta <= 1"),
            ("mu", 0 < self.mu <= 1, "0 < mu <= 1"),
            ("n_alpha", self.n_alpha >= 0, "n_alpha >= 0"),
            ("g1", self.g1 >= 0, "g1 >= 0"),
            ("g2", self.g2 >= 0, "g2 >= 0"),
            ("g2_corr", self.g2_corr >= 1, "g2_corr >= 1"),
            ("dark_rms", self.dark_rms >= 0, "dark_rms >= 0"),
        ]
        for name, ok, rule in checks:
            value = getattr(self, name)
            if not (ok and math.isfinite(value)):
                raise ConfigError(f"{name}={value!r} violates {rule}")

    def replace(self, **changes) -> "InterferometerConfig":
        return replace(self, **changes)

    @classmethod
    def classical_ideal(cls, n_alpha: float = 1500.0) -> "InterferometerConfig":
        """Lossless, noiseless Mach-Zehnder with coherent light only."""
        return cls(n_alpha=n_alpha, g1=0.0, g2=0.0, eta=1.0, mu=1.0,
                   g2_corr=1.0, dark_rms=0.0, sv_enabled=False)


@dataclass(frozen=True)
class DetectionStats:
    phi: float
    mean_n: float
    quantum: float
    excess: float
    dark: float

    @property
    def var_n(self) -> float:
        return self.quantum + self.excess + self.dark

    @property
    def var_breakdown(self) -> dict[str, float]:
        return {"quantum": self.quantum, "excess": self.excess, "dark": self.dark}


@dataclass(frozen=True, eq=False)
class SensitivityCurve:
    phis: np.ndarray
    delta_phi: np.ndarray
    mean_n: np.ndarray
    var_n: np.ndarray
    snl: float
    config: InterferometerConfig = field(repr=False)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.phis.tolist(), self.delta_phi.tolist()))


# --- pipeline ----------------------------------------------------------------


def hwp_phase(delta: float) -> float:
    """Interferometer phase from a half-wave plate rotated by ``delta``, wrapped to (-pi, pi]."""
    phi = math.remainder(4.0 * delta, 2.0 * math.pi)
    return math.pi if phi == -math.pi else phi


def input_state(config: InterferometerConfig, n_alpha: float | None = None) -> gs.GaussianState:
    n = config.n_alpha if n_alpha is None else n_alpha
    # input phase -pi/2 puts the leakage into the dark port along +x
    coh = gs.coherent(0.0, -math.sqrt(n))
    sv = gs.squeeze(gs.vacuum(1), 0, -config.g1) if config.sv_enabled else gs.vacuum(1)
    return gs.tensor(coh, sv)


def output_state(config: InterferometerConfig, phi: float, n_alpha: float | None = None) -> gs.GaussianState:
    """Two-mode state after internal loss, the HWP interferometer, BBO2 and detection loss.

    ``n_alpha`` overrides the configured coherent photon number (used for
    intensity-noise derivatives).
    """
    s = input_state(config, n_alpha)
    if config.mu_on_coherent:
        s = gs.loss(s, H, config.mu)
    s = gs.loss(s, V, config.mu)
    s = gs.beamsplitter(s, H, V, -math.pi / 4)
    # a wave plate imprints opposite phases on the two circular modes
    s = gs.phase_shift(s, H, 0.5 * phi)
    s = gs.phase_shift(s, V, -0.5 * phi)
    s = gs.beamsplitter(s, H, V, math.pi / 4)
    s = gs.squeeze(s, V, config.g2, 0.0)
    return gs.loss(s, V, config.eta)


def detected_state(config: InterferometerConfig, phi: float, n_alpha: float | None = None) -> gs.GaussianState:
    return output_state(config, phi, n_alpha).reduced(V)


def mean_counts(config: InterferometerConfig, phi: float, n_alpha: float | None = None) -> float:
    return gs.mean_photon(detected_state(config, phi, n_alpha))


def excess_variance(config: InterferometerConfig, phi: float) -> float:
    """Classical intensity noise of the coherent beam propagated to the detector.

    Var = (g2 - 1) N_alpha^2 (d<N>/dN_alpha)^2, derivative by central difference.
    """
    n = config.n_alpha
    if config.g2_corr == 1.0 or n == 0.0:
        return 0.0
    h = N_ALPHA_REL_STEP * n
    dn = (mean_counts(config, phi, n + h) - mean_counts(config, phi, n - h)) / (2.0 * h)
    return (config.g2_corr - 1.0) * n * n * dn * dn


def detect(config: InterferometerConfig, phi: float) -> DetectionStats:
    out = detected_state(config, phi)
    return DetectionStats(
        phi=float(phi),
        mean_n=gs.mean_photon(out),
        quantum=max(gs.photon_variance(out), 0.0),
        excess=excess_variance(config, phi),
        dark=float(config.dark_rms) ** 2,
    )


def fringe_slope(config: InterferometerConfig, phi: float, step: float = 1e-4,
                 richardson: bool = False) -> float:
    """d<N>/dphi by central difference; Richardson-extrapolated if requested."""
    if step <= 0:
        raise ValueError("step must be positive")

    def central(h):
        return (mean_counts(config, phi + h) - mean_counts(config, phi - h)) / (2.0 * h)

    d = central(step)
    if richardson:
        d = (4.0 * central(0.5 * step) - d) / 3.0
    return d


class DarkPort:
    """Vectorized dark-port moments for many phases at once.

    Same pipeline as :func:`output_state`, with the phase-dependent part
    collapsed into one 2x4 transfer matrix per phase. Scans and searches go
    through here; :func:`output_state` stays the reference.
    """

    def __init__(self, config: InterferometerConfig):
        self.config = config
        s = input_state(config, n_alpha=1.0)
        if config.mu_on_coherent:
            s = gs.loss(s, H, config.mu)
        s = gs.loss(s, V, config.mu)
        self._unit_mean = s.mean.copy()
        self._cov = s.cov.copy()
        self._bs_in = gs.beamsplitter_op(2, H, V, -math.pi / 4).matrix
        self._bs_out = gs.beamsplitter_op(2, H, V, math.pi / 4).matrix
        amp = np.diag([math.exp(config.g2), math.exp(-config.g2)])
        self._post = math.sqrt(config.eta) * amp @ self._bs_out[2:4, :]

    def _transfer(self, phis: np.ndarray) -> np.ndarray:
        half = 0.5 * phis
        c, s = np.cos(half), np.sin(half)
        R = np.zeros((phis.size, 4, 4))
        R[:, 0, 0] = R[:, 1, 1] = R[:, 2, 2] = R[:, 3, 3] = c
        R[:, 0, 1], R[:, 1, 0] = s, -s
        R[:, 2, 3], R[:, 3, 2] = -s, s
        return self._post @ R @ self._bs_in

    def moments(self, phis, n_alpha: float | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Mean photon number and its quantum variance at each phase."""
        n = self.config.n_alpha if n_alpha is None else n_alpha
        phis = np.atleast_1d(np.asarray(phis, dtype=float))
        M = self._transfer(phis)
        d = math.sqrt(n) * (M @ self._unit_mean)
        cov = M @ self._cov @ M.transpose(0, 2, 1)
        cov += 0.5 * (1.0 - self.config.eta) * np.eye(2)
        mean_n = 0.5 * (np.trace(cov, axis1=1, axis2=2) + np.sum(d * d, axis=1)) - 0.5
        var_q = (0.5 * np.sum(cov * cov, axis=(1, 2))
                 + np.einsum("ki,kij,kj->k", d, cov, d) - 0.25)
        return mean_n, np.maximum(var_q, 0.0)

    def mean_counts(self, phis, n_alpha: float | None = None) -> np.ndarray:
        return self.moments(phis, n_alpha)[0]

    def variance(self, phis) -> np.ndarray:
        """Total photon-number variance: quantum + excess + dark."""
        cfg = self.config
        _, var_q = self.moments(phis)
        excess = 0.0
        n = cfg.n_alpha
        if cfg.g2_corr != 1.0 and n != 0.0:
            h = N_ALPHA_REL_STEP * n
            dn = (self.mean_counts(phis, n + h) - self.mean_counts(phis, n - h)) / (2.0 * h)
            excess = (cfg.g2_corr - 1.0) * n * n * dn * dn
        return var_q + excess + float(cfg.dark_rms) ** 2

    def slope(self, phis, step: float = 1e-4, richardson: bool = False) -> np.ndarray:
        if step <= 0:
            raise ValueError("step must be positive")
        phis = np.atleast_1d(np.asarray(phis, dtype=float))

        def central(h):
            return (self.mean_counts(phis + h) - self.mean_counts(phis - h)) / (2.0 * h)

        d = central(step)
        if richardson:
            d = (4.0 * central(0.5 * step) - d) / 3.0
        return d

    def sensitivity(self, phis, step: float = 1e-4, richardson: bool = False) -> np.ndarray:
        slope = np.abs(self.slope(phis, step, richardson))
        var = self.variance(phis)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.sqrt(var) / slope
        out[slope < SLOPE_FLOOR] = np.inf
        return out


def sensitivity(config: InterferometerConfig, phi: float, step: float = 1e-4,
                richardson: bool = False) -> float:
    """Phase uncertainty sqrt(Var N) / |d<N>/dphi| in radians.

    Returns ``math.inf`` at a fringe extremum, where the slope vanishes.
    """
    return float(DarkPort(config).sensitivity([phi], step, richardson)[0])


def snl(config: InterferometerConfig) -> float:
    """Shot-noise limit 1/sqrt(N_alpha + N_SV) with N_SV ~ sinh^2 g1."""
    n_sv = math.sinh(config.g1) ** 2 if config.sv_enabled else 0.0
    total = config.n_alpha + n_sv
    if total <= 0:
        raise ValueError("shot-noise limit undefined for zero photons")
    return 1.0 / math.sqrt(total)


def phase_grid(n_points: int = GRID_POINTS) -> np.ndarray:
    """``n_points`` uniform phases covering (-pi, pi]."""
    return np.linspace(-math.pi, math.pi, n_points + 1)[1:]


def phase_sweep(config: InterferometerConfig, phi_min: float, phi_max: float, n_points: int,
                step: float = 1e-4) -> SensitivityCurve:
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    if not phi_min < phi_max:
        raise ValueError("phi_min must be smaller than phi_max")
    phis = np.linspace(phi_min, phi_max, n_points)
    port = DarkPort(config)
    return SensitivityCurve(
        phis=phis,
        delta_phi=port.sensitivity(phis, step),
        mean_n=port.mean_counts(phis),
        var_n=port.variance(phis),
        snl=snl(config),
        config=config,
    )


def best_sensitivity(config: InterferometerConfig, step: float = 1e-4,
                     n_grid: int = GRID_POINTS) -> tuple[float, float]:
    """(phi, delta_phi) at the best working point.

    Coarse scan over (-pi, pi], then golden-section refinement around the
    best grid point. Ties go to the smallest |phi|, then to positive phi.
    """
    port = DarkPort(config)
    phis = phase_grid(n_grid)
    vals = port.sensitivity(phis, step)
    if not np.any(np.isfinite(vals)):
        raise ArithmeticError("fringe slope vanishes at every phase")
    best = np.flatnonzero(vals <= np.min(vals) * (1 + 1e-12))
    i = int(best[np.lexsort((-phis[best], np.abs(phis[best])))][0])
    dphi = phis[1] - phis[0]
    lo, hi = phis[i] - dphi, phis[i] + dphi

    def f(p):
        return float(port.sensitivity([p], step)[0])

    if f(lo) > vals[i] and f(hi) > vals[i]:
        res = minimize_scalar(f, bracket=(lo, phis[i], hi), method="golden",
                              options={"xtol": 1e-10})
        if res.fun < vals[i]:
            return float(math.remainder(res.x, 2 * math.pi)), float(res.fun)
    return float(phis[i]), float(vals[i])


def sub_snl_width(config: InterferometerConfig, n_points: int = 2880, step: float = 1e-4) -> float:
    """Total phase range (radians, over one period) with sensitivity below the SNL.

    Crossings are located by linear interpolation of log(delta_phi / SNL).
    """
    phis = phase_grid(n_points)
    with np.errstate(divide="ignore"):
        r = np.log(DarkPort(config).sensitivity(phis, step) / snl(config))
    dphi = phis[1] - phis[0]
    width = 0.0
    for a, b in zip(r[:-1], r[1:]):
        if a < 0 and b < 0:
            width += dphi
        elif (a < 0) != (b < 0) and np.isfinite(a) and np.isfinite(b):
            below, above = (a, b) if a < 0 else (b, a)
            width += dphi * (-below) / (above - below)
    return width


# --- quantum advantage -------------------------------------------------------


def quantum_advantage(q0: float, eta: float, mu: float, g2: float) -> float:
    """Q = (1/q0 + (1 - eta) / (eta mu) e^{-2 g2})^-1."""
    if q0 <= 0:
        raise ValueError("q0 must be positive")
    if not 0 < eta <= 1 or not 0 < mu <= 1:
        raise ValueError("eta and mu must lie in (0, 1]")
    return 1.0 / (1.0 / q0 + (1.0 - eta) / (eta * mu) * math.exp(-2.0 * g2))


def q0_from_squeezing(squeezing_db: float, mu: float) -> float:
    """Perfect-detection advantage: inverse of the squeezed variance ratio after internal loss."""
    if squeezing_db < 0:
        raise ValueError("squeezing_db must be non-negative")
    return 1.0 / (mu * 10.0 ** (-squeezing_db / 10.0) + 1.0 - mu)


def advantage_map(q0: float, mu: float, eta_grid, g2_grid) -> np.ndarray:
    """Q / q0 on the (eta, g2) grid; rows follow ``eta_grid``, columns ``g2_grid``."""
    eta_grid = np.asarray(eta_grid, dtype=float)
    g2_grid = np.asarray(g2_grid, dtype=float)
    if eta_grid.size == 0 or g2_grid.size == 0:
        raise ValueError("grids must be non-empty")
    if np.any(eta_grid <= 0) or np.any(eta_grid > 1):
        raise ValueError("eta grid values must lie in (0, 1]")
    if np.any(g2_grid < 0):
        raise ValueError("g2 grid values must be non-negative")
    return np.array([[quantum_advantage(q0, e, mu, g) / q0 for g in g2_grid] for e in eta_grid])


# --- loss tolerance ----------------------------------------------------------


def loss_threshold(config_template: InterferometerConfig, eta_min: float = 0.01,
                   tol: float = 1e-3, n_grid: int = GRID_POINTS) -> float:
    """Smallest detection efficiency whose best sensitivity reaches the SNL.

    Bisection on eta over [eta_min, 1]; raises :class:`NeverCrossesError` when
    even eta = 1 stays at or above the SNL.
    """
    ref = snl(config_template)

    def margin(eta):
        _, best = best_sensitivity(config_template.replace(eta=eta), n_grid=n_grid)
        return best / ref - 1.0

    if margin(1.0) >= -1e-6:
        raise NeverCrossesError("best sensitivity never drops below the SNL")
    lo, hi = eta_min, 1.0
    if margin(lo) < 0:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if margin(mid) < 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# --- gain calibration --------------------------------------------------------


@dataclass(frozen=True)
class GainFit:
    """Fit of N = scale * sinh^2(B sqrt(P)); ``residual_rms`` is relative."""

    b: float
    scale: float
    residual_rms: float


def calibrate_gain(samples) -> GainFit:
    """Fit the gain coefficient B from (pump_power, mean_photons) pairs.

    Relative residuals are minimised, so every power carries equal weight
    regardless of photon count. A log-spaced scan over B with the optimal
    scale profiled out seeds a joint least-squares refinement of (B, scale).
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 3:
        raise ValueError("need at least 3 (pump_power, mean_photons) samples")
    power, counts = data.T
    if np.any(power <= 0):
        raise ValueError("pump powers must be positive")
    if np.any(counts <= 0):
        raise ValueError("photon counts must be positive")
    if np.unique(power).size < 3:
        raise ValueError("need at least 3 distinct pump powers")
    root = np.sqrt(power)

    def profile(b):
        f = np.sinh(b * root) ** 2 / counts
        c = f.sum() / (f @ f)
        r = c * f - 1.0
        return r @ r, c

    grid = np.geomspace(1e-3, 15.0, 2000) / root.max()
    costs = [profile(b)[0] for b in grid]
    b0 = grid[int(np.argmin(costs))]
    c0 = profile(b0)[1]

    def resid(x):
        return x[1] * np.sinh(x[0] * root) ** 2 / counts - 1.0

    res = least_squares(resid, [b0, c0], x_scale=[b0, c0], xtol=1e-15, ftol=1e-15, gtol=1e-15)
    b, c = res.x
    return GainFit(b=float(b), scale=float(c), residual_rms=float(np.sqrt(np.mean(res.fun**2))))
