import math

import numpy as np
import pytest

from dyonphase.core import AxisSingularityError, BoundaryAmbiguityError, Position, SolenoidConfig
from dyonphase.fields import (
    GaugeFunctionPair,
    circulation,
    current_density,
    eval_fields,
    eval_gauge_functions,
    eval_potentials,
    fd_curl,
    fd_divergence,
    fd_gradient,
    gaussian_delta,
    magnetisation_polarisation,
    potentials_array,
    verify_maxwell_integral,
)
from dyonphase.quadrature import integrate


def test_magnetic_field_inside():
    f = eval_fields(SolenoidConfig(1.0, 0.0, 2 * math.pi), Position(0.5, 0, 0))
    np.testing.assert_allclose(f.B, [0, 0, 2], atol=1e-15)
    np.testing.assert_allclose(f.E, 0, atol=0)


def test_electric_field_inside():
    f = eval_fields(SolenoidConfig(1.0, math.pi, 0.0), Position(0.3, 0, 0))
    np.testing.assert_allclose(f.E, [0, 0, 1], atol=1e-15)


def test_fields_vanish_outside():
    s = SolenoidConfig(1.7, 3.0, -2.0)
    f = eval_fields(s, Position.from_cylindrical(2 * s.radius, 1.1, 4.0))
    assert not f.E.any() and not f.B.any()


def test_shell_is_ambiguous():
    with pytest.raises(BoundaryAmbiguityError):
        eval_fields(SolenoidConfig(1.0, 1.0, 1.0), Position(1.0, 0.0, 0.0))


@pytest.mark.parametrize("rho", [0.5, 2.0])
def test_vector_potential_magnitude(rho):
    f = eval_potentials(SolenoidConfig(1.0, 0.0, 2 * math.pi), Position(rho, 0, 0))
    assert np.linalg.norm(f.A) == pytest.approx(0.5, rel=1e-15)
    np.testing.assert_allclose(f.A / np.linalg.norm(f.A), [0, 1, 0], atol=1e-15)


def test_electric_vector_potential_outside():
    f = eval_potentials(SolenoidConfig(1.0, 2 * math.pi, 0.0), Position(2.0, 0, 0))
    np.testing.assert_allclose(f.C, [0, -0.5, 0], atol=1e-15)
    with pytest.raises(AxisSingularityError):
        eval_potentials(SolenoidConfig(), Position(0, 0, 1))


def test_potentials_continuous_across_shell():
    s = SolenoidConfig(1.3, 0.8, 2.2)
    inner = potentials_array(s, np.array([s.radius * (1 - 1e-12), 0, 0]))
    outer = potentials_array(s, np.array([s.radius * (1 + 1e-12), 0, 0]))
    np.testing.assert_allclose(inner[0], outer[0], rtol=1e-10)
    np.testing.assert_allclose(inner[1], outer[1], rtol=1e-10)


@pytest.mark.parametrize("radius, expected", [(2.0, 3.0), (0.5, 0.75)])
def test_circulation_examples(radius, expected):
    assert circulation(SolenoidConfig(1.0, 0.0, 3.0), radius) == pytest.approx(expected, rel=1e-13)


def test_maxwell_report_null_solenoid():
    rep = verify_maxwell_integral(SolenoidConfig(1.0, 0.0, 0.0), 2.0)
    assert rep.max_residual == 0.0 and rep.passed


@pytest.mark.parametrize("radius", [0.2, 0.7, 1.6, 5.0])
def test_maxwell_report_passes(radius):
    rep = verify_maxwell_integral(SolenoidConfig(1.0, -0.4, 2.5), radius)
    assert rep.passed, rep.details
    assert rep.circulation_A == pytest.approx(rep.expected_A, abs=1e-12)
    assert rep.circulation_C == pytest.approx(rep.expected_C, abs=1e-12)


def test_curls_match_fields_and_potentials_are_solenoidal():
    s = SolenoidConfig(1.0, 1.2, -0.9)

    def a_of(x):
        return potentials_array(s, x)[0]

    def c_of(x):
        return potentials_array(s, x)[1]

    h = 1e-5
    for x, inside in [(np.array([0.3, 0.4, 0.1]), True), (np.array([2.0, -1.5, 0.0]), False)]:
        curl_a, curl_c = fd_curl(a_of, x, h), fd_curl(c_of, x, h)
        np.testing.assert_allclose(curl_a, [0, 0, s.field_m if inside else 0], atol=1e-8)
        np.testing.assert_allclose(-curl_c, [0, 0, s.field_e if inside else 0], atol=1e-8)
        assert abs(fd_divergence(a_of, x, h)) < 1e-8
        assert abs(fd_divergence(c_of, x, h)) < 1e-8


def test_gauge_functions():
    assert eval_gauge_functions(SolenoidConfig(1.0, 0.0, 2 * math.pi), math.pi)[0] == pytest.approx(math.pi)
    assert eval_gauge_functions(SolenoidConfig(1.0, 4 * math.pi, 0.0), 2 * math.pi)[1] == pytest.approx(-4 * math.pi)
    assert eval_gauge_functions(SolenoidConfig(1.0, 1.0, 1.0), 0.0) == (0.0, 0.0)


def test_gauge_gradient_reproduces_exterior_potentials():
    s = SolenoidConfig(1.0, 0.6, 1.7)
    pair = GaugeFunctionPair(s)
    x = np.array([1.2, 2.3, 0.4])
    a, c = potentials_array(s, x)
    phi = lambda p: math.atan2(p[1], p[0])  # noqa: E731
    np.testing.assert_allclose(fd_gradient(lambda p: pair.chi(phi(p)), x, 1e-6), a, atol=1e-9)
    np.testing.assert_allclose(fd_gradient(lambda p: pair.xi(phi(p)), x, 1e-6), c, atol=1e-9)
    # multi-valuedness carries the flux
    assert pair.chi(2 * math.pi) - pair.chi(0.0) == pytest.approx(s.flux_m)


def test_magnetisation_examples():
    m, _ = magnetisation_polarisation(SolenoidConfig(1.0, 0.0, 4 * math.pi**2), Position(0.2, 0.1))
    np.testing.assert_allclose(m, [0, 0, 1], rtol=1e-15)
    s = SolenoidConfig(1.0, 2.0, 3.0)
    m, pol = magnetisation_polarisation(s, Position(3.0, 0.0))
    assert not m.any() and not pol.any()
    m, pol = magnetisation_polarisation(s, Position(0.5, 0.0))
    f = eval_fields(s, Position(0.5, 0.0))
    np.testing.assert_allclose(f.B - 4 * math.pi * m, 0, atol=1e-15)
    np.testing.assert_allclose(f.E + 4 * math.pi * pol, 0, atol=1e-15)


def test_current_density_support_and_proportionality():
    s = SolenoidConfig(1.0, 2.0, 5.0)
    sigma = 0.01
    j_e, j_m = current_density(s, Position(1.0 + 9 * sigma, 0), sigma)
    assert not j_e.any() and not j_m.any()
    j_e, j_m = current_density(s, Position.from_cylindrical(1.0 + sigma, 0.4), sigma)
    np.testing.assert_allclose(j_e, -(s.flux_m / s.flux_e) * j_m, rtol=1e-14)


def test_shell_current_per_unit_length():
    s = SolenoidConfig(1.0, 0.0, 3.0)
    sigma = 1e-3

    def j_phi(rho):
        flat = [current_density(s, Position(r, 0.0), sigma)[0][1] for r in np.ravel(rho)]
        return np.reshape(flat, np.shape(rho))

    total = integrate(j_phi, 1 - 8 * sigma, 1 + 8 * sigma, tol=1e-12)
    assert total == pytest.approx(s.flux_m / (4 * math.pi**2), rel=1e-12)


def test_gaussian_delta_has_unit_area():
    assert integrate(lambda u: gaussian_delta(u, 0.1), -1, 1, tol=1e-13) == pytest.approx(1.0, abs=1e-12)
