import math

import numpy as np
import pytest

from dyonphase.core import DyonCharge, ParameterError, SolenoidConfig
from dyonphase.duality import DualityFrame, rotate
from dyonphase.ring import (
    RingConfig,
    analytic_levels,
    dominant_mode,
    eigenfunction,
    fd_eigensystem,
    fd_levels,
    flux_parameter,
    level_energy,
    relative_errors,
    ring_matrix,
    spectral_flow,
)


@pytest.mark.parametrize("alpha_f, ell, expected", [(0.0, 2, 2.0), (0.25, 0, 0.03125), (0.25, 1, 0.28125)])
def test_level_energy_examples(alpha_f, ell, expected):
    cfg = RingConfig(1.0, 1.0, alpha_f)
    assert level_energy(cfg, ell) == expected
    assert dict(analytic_levels(cfg, (-3, 3)).levels)[ell] == expected


def test_analytic_levels_sorted_with_degeneracies():
    spec = analytic_levels(RingConfig(1.0), n_levels=5)
    assert spec.levels == [(0, 0.0), (-1, 0.5), (1, 0.5), (-2, 2.0), (2, 2.0)]
    assert spec.source == "analytic"


def test_eigenfunction_is_normalised_on_arclength():
    b = 2.5
    phi = np.linspace(0, 2 * math.pi, 4097)[:-1]
    psi = eigenfunction(3, phi, b)
    norm = np.sum(np.abs(psi) ** 2) * b * (2 * math.pi / phi.size)
    assert norm == pytest.approx(1.0, rel=1e-12)


def test_free_rotor_fd_levels():
    cfg = RingConfig(1.0)
    e = fd_levels(cfg, 2048, 7).energies
    np.testing.assert_allclose(e, 0.5 * np.array([0, 1, 1, 4, 4, 9, 9]), rtol=1e-4, atol=1e-9)


@pytest.mark.parametrize("method", ["centered", "twisted"])
def test_fd_matches_analytic_at_quarter_flux(method):
    cfg = RingConfig(1.3, 0.7, 0.25)
    numeric = fd_levels(cfg, 2048, 10, method=method).energies
    analytic = analytic_levels(cfg, n_levels=10).energies
    assert relative_errors(numeric, analytic, cfg).max() < 1e-4


def test_half_flux_degeneracy():
    e = fd_levels(RingConfig(1.0, 1.0, 0.5), 1024, 4, method="twisted").energies
    assert abs(e[1] - e[0]) < 1e-10
    assert abs(e[3] - e[2]) < 1e-10


def test_centered_half_flux_splitting_is_second_order():
    # the centered first difference lifts the degeneracy by O(h^2)
    cfg = RingConfig(1.0, 1.0, 0.5)
    split = [np.diff(fd_levels(cfg, n, 2).energies)[0] for n in (1024, 2048)]
    assert split[0] < 1e-5
    assert 3.9 < split[0] / split[1] < 4.1


def test_fd_second_order_convergence():
    cfg = RingConfig(1.0, 1.0, 0.25)
    analytic = analytic_levels(cfg, n_levels=10).energies
    errs = [relative_errors(fd_levels(cfg, n, 10).energies, analytic, cfg).max() for n in (512, 1024, 2048)]
    assert errs[0] > errs[1] > errs[2]
    assert 3.5 < errs[0] / errs[1] < 4.5
    assert 3.5 < errs[1] / errs[2] < 4.5


def test_dense_and_banded_agree():
    cfg = RingConfig(1.0, 1.0, 0.3)
    for method in ("centered", "twisted"):
        mat = ring_matrix(cfg, 64, method)
        np.testing.assert_allclose(mat, mat.conj().T)
        dense = cfg.energy_unit() * np.linalg.eigvalsh(mat)[:8]
        np.testing.assert_allclose(fd_eigensystem(cfg, 64, 8, method=method), dense, rtol=1e-11, atol=1e-11)


@pytest.mark.parametrize("method", ["centered", "twisted"])
def test_dominant_mode_identifies_angular_momentum(method):
    cfg = RingConfig(1.0, 1.0, 0.25)
    _, vecs = fd_eigensystem(cfg, 128, 3, method=method, vectors=True)
    modes = [dominant_mode(vecs[:, j], cfg.alpha_f, method) for j in range(3)]
    assert modes == [0, 1, -1]


def test_fd_parameter_errors():
    cfg = RingConfig(1.0)
    with pytest.raises(ParameterError):
        fd_levels(cfg, 63)
    with pytest.raises(ParameterError):
        fd_levels(cfg, 32)
    with pytest.raises(ParameterError):
        fd_levels(cfg, 64, 17)
    with pytest.raises(ParameterError):
        fd_levels(cfg, 64, 4, method="spectral")


def test_config_validation():
    with pytest.raises(ParameterError):
        RingConfig(0.0)
    with pytest.raises(ParameterError):
        RingConfig(1.0, -1.0)
    with pytest.raises(ParameterError):
        RingConfig(1.0, 1.0, math.nan)
    with pytest.raises(ParameterError):
        RingConfig.from_physical(DyonCharge(1, 0), SolenoidConfig(2.0, 0, 1), b=1.5)


def test_from_physical_uses_flux_parameter():
    d, s = DyonCharge(1.0, 0.5), SolenoidConfig(1.0, 1.0, 3.0)
    cfg = RingConfig.from_physical(d, s, 2.0)
    assert cfg.alpha_f == pytest.approx(2.5 / (2 * math.pi))


def test_flux_parameter_is_duality_invariant():
    base = DualityFrame(1.0, 0.5, 1.0, 3.0)
    ref = flux_parameter(base.charges, SolenoidConfig(1.0, base.flux_e, base.flux_m))
    for theta in np.linspace(-math.pi, math.pi, 13):
        f = rotate(base, theta)
        assert flux_parameter(f.charges, SolenoidConfig(1.0, f.flux_e, f.flux_m)) == pytest.approx(ref, abs=1e-12)


def test_analytic_spectral_flow_symmetries_are_exact():
    flow = spectral_flow(RingConfig(1.0), np.linspace(-1.5, 1.5, 61))
    assert flow.periodicity_deviation == 0.0
    assert flow.reflection_deviation == 0.0
    assert flow.levels.shape == (61, 6)


def test_twisted_spectral_flow_symmetries():
    flow = spectral_flow(RingConfig(1.0), [0.0, 0.25, 0.5, 0.9], source="twisted", n_grid=512)
    assert flow.periodicity_deviation < 1e-8
    assert flow.reflection_deviation < 1e-8


def test_ground_level_minimum_at_integer_flux():
    alphas = np.linspace(-2.0, 2.0, 81)
    ground = spectral_flow(RingConfig(1.0), alphas).levels[:, 0]
    minima = alphas[np.isclose(ground, ground.min(), atol=1e-15)]
    np.testing.assert_allclose(minima, np.round(minima), atol=1e-12)
    assert len(minima) == 5


def test_spectral_flow_rejects_non_finite_sweep():
    with pytest.raises(ParameterError):
        spectral_flow(RingConfig(1.0), [0.0, math.inf])
