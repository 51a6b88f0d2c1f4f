"""Gaussian simulation of a squeezing-assisted interferometer with parametric pre-amplification."""

__version__ = "0.1.0"

from .gaussian import (  # noqa: E402
    GaussianState,
    SymplecticOp,
    beamsplitter,
    coherent,
    loss,
    mean_photon,
    phase_shift,
    photon_variance,
    squeeze,
    symplectic_eigenvalues,
    vacuum,
)
from .interferometer import (  # noqa: E402
    DetectionStats,
    InterferometerConfig,
    SensitivityCurve,
    best_sensitivity,
    detect,
    loss_threshold,
    output_state,
    phase_sweep,
    quantum_advantage,
    sensitivity,
    snl,
)
