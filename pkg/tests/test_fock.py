import numpy as np
import pytest
from numpy.testing import assert_allclose

from ampsense import fock
from ampsense import gaussian as gs


def test_zero_squeezing_is_vacuum():
    rho = fock.oracle_squeezed_vacuum(0.0, 20)
    assert_allclose(rho.matrix, fock.fock_vacuum(20).matrix, atol=1e-14)


def test_squeezed_vacuum_matches_closed_form():
    mean, var = fock.oracle_moments(fock.oracle_squeezed_vacuum(1.0, 60))
    assert mean == pytest.approx(np.sinh(1.0) ** 2, rel=1e-4)
    assert var == pytest.approx(0.5 * np.sinh(2.0) ** 2, rel=1e-4)


@pytest.mark.parametrize("G", [0.2, 0.6, 1.0, -0.8])
def test_odd_populations_vanish(G):
    p = fock.oracle_squeezed_vacuum(G, 60).populations
    assert np.max(np.abs(p[1::2])) < 1e-14


def test_truncation_is_refused():
    # sinh^2(1.7) ~ 7 photons: the tail above 100 photons is ~2e-4
    with pytest.raises(fock.TruncationError):
        fock.oracle_squeezed_vacuum(1.7, 100)
    mean, _ = fock.oracle_moments(fock.oracle_squeezed_vacuum(1.7, 200))
    assert mean == pytest.approx(np.sinh(1.7) ** 2, rel=1e-4)


def test_loss_limits():
    rho = fock.oracle_displace(fock.oracle_squeezed_vacuum(0.5, 40), 0.7 + 0.2j)
    assert_allclose(fock.oracle_apply_loss(rho, 1.0).matrix, rho.matrix)
    assert_allclose(fock.oracle_apply_loss(rho, 0.0).matrix, fock.fock_vacuum(40).matrix, atol=1e-12)
    with pytest.raises(ValueError):
        fock.oracle_apply_loss(rho, -0.1)


def test_binomial_loss_of_two_photons():
    p = fock.oracle_apply_loss(fock.fock_number(2, 10), 0.5).populations
    assert_allclose(p[:3], [0.25, 0.5, 0.25], atol=1e-14)
    assert_allclose(p[3:], 0, atol=1e-14)


@pytest.mark.parametrize("eta", [0.1, 0.45, 0.9])
def test_loss_scales_mean(eta):
    rho = fock.oracle_displace(fock.oracle_squeezed_vacuum(0.6, 60), 1.2)
    n0, _ = fock.oracle_moments(rho)
    n1, _ = fock.oracle_moments(fock.oracle_apply_loss(rho, eta))
    assert n1 == pytest.approx(eta * n0, rel=1e-6)


def test_moments_examples():
    assert fock.oracle_moments(fock.fock_vacuum(10)) == (0.0, 0.0)
    mean, var = fock.oracle_moments(fock.oracle_displace(fock.fock_vacuum(40), 1.0))
    assert mean == pytest.approx(1.0, abs=1e-8)
    assert var == pytest.approx(1.0, abs=1e-8)


def test_density_invariants():
    rho = fock.oracle_apply_loss(fock.oracle_displace(fock.oracle_squeezed_vacuum(0.9, 60), 1 - 1j), 0.4)
    m = rho.matrix
    assert np.max(np.abs(m - m.conj().T)) < 1e-10
    assert np.min(np.linalg.eigvalsh(m)) > -1e-8
    assert rho.trace == pytest.approx(1.0, abs=1e-6)
    assert rho.trace <= 1.0 + 1e-12


def test_rotation_matches_phase_space_convention():
    # coherent(1, 0) rotated by pi/2 has <a> = -i, i.e. mean (0, -sqrt 2)
    rho = fock.oracle_rotate(fock.oracle_displace(fock.fock_vacuum(30), 1.0), np.pi / 2)
    a = np.diag(np.sqrt(np.arange(1, 31)), 1)
    assert np.trace(rho.matrix @ a) == pytest.approx(-1j, abs=1e-8)
    g = gs.phase_shift(gs.coherent(1, 0), 0, np.pi / 2)
    assert_allclose(g.mean, [0, -np.sqrt(2)], atol=1e-12)


def _gaussian_chain(G, alpha, eta):
    s = gs.squeeze(gs.vacuum(1), 0, G)
    s = gs.displace(s, 0, alpha.real, alpha.imag)
    return gs.loss(s, 0, eta)


def _oracle_chain(G, alpha, eta, cutoff):
    rho = fock.oracle_displace(fock.oracle_squeezed_vacuum(G, cutoff), alpha)
    return fock.oracle_moments(fock.oracle_apply_loss(rho, eta))


@pytest.mark.parametrize("G", [0.0, 0.5, 1.0])
@pytest.mark.parametrize("alpha", [0.0, 1.5, 2.0 + 0.5j])
@pytest.mark.parametrize("eta", [0.1, 0.55, 1.0])
def test_agreement_box_amplified_axis(G, alpha, eta):
    # displacement along the amplified quadrature has the heaviest tail: cutoff 80
    s = _gaussian_chain(G, complex(alpha), eta)
    mean, var = _oracle_chain(G, complex(alpha), eta, 80)
    assert gs.mean_photon(s) == pytest.approx(mean, rel=0.01, abs=1e-12)
    assert gs.photon_variance(s) == pytest.approx(var, rel=0.01, abs=1e-12)


def test_amplifier_then_loss_chain_at_reduced_gain():
    # the interferometer's dark-port chain: squeeze, internal loss, amplify, detection loss
    g1, g2, mu, eta = 0.5, 0.6, 0.97, 0.5
    s = gs.loss(gs.squeeze(gs.loss(gs.squeeze(gs.vacuum(1), 0, -g1), 0, mu), 0, g2), 0, eta)
    rho = fock.oracle_squeezed_vacuum(-g1, 80)
    rho = fock.oracle_apply_loss(fock.oracle_squeeze(fock.oracle_apply_loss(rho, mu), g2), eta)
    mean, var = fock.oracle_moments(rho)
    assert gs.mean_photon(s) == pytest.approx(mean, rel=1e-4)
    assert gs.photon_variance(s) == pytest.approx(var, rel=1e-4)
