"""Single-mode Wigner functions for the illustrative interferometer scenarios."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gaussian as gs
from .interferometer import InterferometerConfig, detected_state

SCENARIOS = ("classical", "squeezed", "squeezed+amplified")
DEFAULT_PHIS = tuple(k * 0.2 * math.pi for k in range(6))
GRID_POINTS = 201
GRID_EXTENT = 8.0


@dataclass(frozen=True, eq=False)
class WignerGrid:
    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray  # values[i, j] at (x_axis[i], p_axis[j])
    state_label: str = ""

    def integral(self) -> float:
        dx = self.x_axis[1] - self.x_axis[0]
        dp = self.p_axis[1] - self.p_axis[0]
        return float(self.values.sum() * dx * dp)

    def peak(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.x_axis[i]), float(self.p_axis[j])


def _single_mode(state: gs.GaussianState) -> tuple[np.ndarray, np.ndarray]:
    if state.n_modes != 1:
        raise ValueError(f"Wigner evaluation needs a single-mode state, got {state.n_modes} modes")
    det = np.linalg.det(state.cov)
    if det < 1e-300:
        raise ValueError("covariance matrix is singular")
    return state.mean, state.cov


def wigner_at(state: gs.GaussianState, x: float, p: float) -> float:
    d, cov = _single_mode(state)
    r = np.array([x, p]) - d
    return float(np.exp(-0.5 * r @ np.linalg.solve(cov, r)) / (2 * np.pi * np.sqrt(np.linalg.det(cov))))


def wigner_grid(state: gs.GaussianState, x_axis=None, p_axis=None, label: str = "") -> WignerGrid:
    """Sample the Wigner function on a rectangular grid (default 201 x 201 over [-8, 8]^2)."""
    d, cov = _single_mode(state)
    if x_axis is None:
        x_axis = np.linspace(-GRID_EXTENT, GRID_EXTENT, GRID_POINTS)
    if p_axis is None:
        p_axis = np.linspace(-GRID_EXTENT, GRID_EXTENT, GRID_POINTS)
    x_axis = np.asarray(x_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    X, P = np.meshgrid(x_axis - d[0], p_axis - d[1], indexing="ij")
    inv = np.linalg.inv(cov)
    q = inv[0, 0] * X * X + 2 * inv[0, 1] * X * P + inv[1, 1] * P * P
    values = np.exp(-0.5 * q) / (2 * np.pi * np.sqrt(np.linalg.det(cov)))
    return WignerGrid(x_axis, p_axis, values, label)


def window(state: gs.GaussianState, n_sigma: float = 6.0, n_points: int = GRID_POINTS):
    """Axes spanning mean +- n_sigma standard deviations in x and p."""
    d, cov = _single_mode(state)
    sx, sp = np.sqrt(np.diag(cov))
    return (np.linspace(d[0] - n_sigma * sx, d[0] + n_sigma * sx, n_points),
            np.linspace(d[1] - n_sigma * sp, d[1] + n_sigma * sp, n_points))


def scenario_config(scenario: str, alpha: float = 3.0, sv_db: float = 6.0, eta: float = 0.5,
                    dopa_db: float = 9.6) -> InterferometerConfig:
    """Ideal interferometer (no internal loss or technical noise) for one scenario.

    ``classical``: coherent light only, lossless.
    ``squeezed``: squeezed vacuum in the dark port, detection efficiency ``eta``.
    ``squeezed+amplified``: as above with an amplifier of ``dopa_db`` before the loss.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    if sv_db < 0 or dopa_db < 0:
        raise ValueError("squeezing and amplification levels must be non-negative")
    common = dict(n_alpha=alpha * alpha, mu=1.0, g2_corr=1.0, dark_rms=0.0)
    if scenario == "classical":
        return InterferometerConfig(g1=0.0, g2=0.0, eta=1.0, sv_enabled=False, **common)
    g1 = gs.squeeze_factor_from_db(sv_db)
    g2 = gs.squeeze_factor_from_db(dopa_db) if scenario == "squeezed+amplified" else 0.0
    return InterferometerConfig(g1=g1, g2=g2, eta=eta, sv_enabled=True, **common)


def scenario_states(scenario: str, phis=DEFAULT_PHIS, alpha: float = 3.0, sv_db: float = 6.0,
                    eta: float = 0.5, dopa_db: float = 9.6) -> list[gs.GaussianState]:
    """Detected-port states of one scenario at each phase."""
    phis = list(phis)
    if not phis:
        raise ValueError("phis must be non-empty")
    config = scenario_config(scenario, alpha, sv_db, eta, dopa_db)
    return [detected_state(config, phi) for phi in phis]


def separation_metric(states) -> list[float]:
    """x-quadrature distinguishability of adjacent states: |delta <x>| / sqrt(mean Var x)."""
    states = list(states)
    if len(states) < 2:
        raise ValueError("need at least two states")
    out = []
    for a, b in zip(states[:-1], states[1:]):
        avg_var = 0.5 * (a.cov[0, 0] + b.cov[0, 0])
        out.append(float(abs(b.mean[0] - a.mean[0]) / math.sqrt(avg_var)))
    return out
