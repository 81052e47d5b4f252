import math

import numpy as np
import pytest

from dyonphase.core import (
    AxisSingularityError,
    DyonCharge,
    ParameterError,
    PhysicalConstants,
    Position,
    SolenoidConfig,
    cylindrical_basis,
    phi_hat_array,
)


def test_default_constants_are_natural_units():
    k = PhysicalConstants()
    assert k.hbar == 1.0 and k.c == 1.0 and k.e == 1.0
    assert k.alpha == pytest.approx(1 / 137.035999, rel=1e-15)
    assert k.hbar_c == 1.0


def test_dirac_magnetic_charge():
    k = PhysicalConstants()
    assert k.g0 == pytest.approx(137.035999 / 2, rel=1e-14)
    assert PhysicalConstants(e=2.0).g0 == pytest.approx(2 * k.g0)


@pytest.mark.parametrize("kw", [{"hbar": 0.0}, {"c": -1.0}, {"alpha": 0.0}, {"alpha": 1.0},
                                {"e": math.inf}, {"hbar": math.nan}])
def test_invalid_constants_rejected(kw):
    with pytest.raises(ParameterError):
        PhysicalConstants(**kw)


def test_dyon_charge_validation_and_dual():
    d = DyonCharge(1.5, -2.0)
    assert d.dual() == DyonCharge(-2.0, -1.5)
    assert d.dual().dual() == DyonCharge(-1.5, 2.0)
    with pytest.raises(ParameterError):
        DyonCharge(math.nan, 0.0)


def test_solenoid_fields_and_dual():
    s = SolenoidConfig(2.0, math.pi, 4 * math.pi)
    assert s.field_e == pytest.approx(0.25)
    assert s.field_m == pytest.approx(1.0)
    assert s.dual() == SolenoidConfig(2.0, 4 * math.pi, -math.pi)
    for bad in (0.0, -1.0, math.inf):
        with pytest.raises(ParameterError):
            SolenoidConfig(bad)


def test_position_round_trip():
    p = Position.from_cylindrical(2.0, 0.75, -1.0)
    assert p.rho == pytest.approx(2.0)
    assert p.phi == pytest.approx(0.75)
    assert Position.from_array(p.as_array()) == p
    assert p.shifted((1, 0, 2)).z == pytest.approx(1.0)


@pytest.mark.parametrize("xyz, expected", [
    ((1, 0, 0), (0, 1, 0)),
    ((0, 2, 0), (-1, 0, 0)),
    ((1, 1, 0), (-1 / math.sqrt(2), 1 / math.sqrt(2), 0)),
])
def test_phi_hat_examples(xyz, expected):
    _, phi_hat, _ = cylindrical_basis(Position(*xyz))
    np.testing.assert_allclose(phi_hat, expected, atol=1e-15)


def test_basis_is_orthonormal_right_handed():
    rho_hat, phi_hat, z_hat = cylindrical_basis(Position(0.3, -1.7, 5.0))
    frame = np.array([rho_hat, phi_hat, z_hat])
    np.testing.assert_allclose(frame @ frame.T, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(np.cross(rho_hat, phi_hat), z_hat, atol=1e-15)


def test_axis_is_singular():
    with pytest.raises(AxisSingularityError):
        cylindrical_basis(Position(0.0, 0.0, 3.0))
    with pytest.raises(AxisSingularityError):
        phi_hat_array(np.array([[1.0, 0, 0], [0, 0, 1.0]]))


def test_vectorised_phi_hat_matches_scalar():
    pts = np.array([[1.0, 2.0, 0.0], [-3.0, 0.5, 1.0]])
    phi_hat, rho = phi_hat_array(pts)
    for row, p in zip(phi_hat, pts):
        np.testing.assert_allclose(row, cylindrical_basis(Position(*p))[1], atol=1e-15)
    np.testing.assert_allclose(rho, np.hypot(pts[:, 0], pts[:, 1]))
