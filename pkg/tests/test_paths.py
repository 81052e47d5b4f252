import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyonphase.core import (
    AxisSingularityError,
    DyonCharge,
    InternalConsistencyError,
    ParameterError,
    PathCrossesSolenoidError,
    SolenoidConfig,
    UndersampledPathError,
)
from dyonphase.paths import (
    HarmonicGauge,
    SampledPath,
    accumulate_phase,
    expected_phase,
    gauge_shifted_phase,
    nonlocality_form,
    open_line_integral,
    random_enclosing_path,
    random_non_enclosing_path,
    read_path_file,
    winding_number,
    write_path_file,
)

FRAME = (DyonCharge(1.0, 0.5), SolenoidConfig(1.0, 1.0, 3.0))


def test_winding_examples():
    assert winding_number(SampledPath.circle(2.0)) == 1
    assert winding_number(SampledPath.circle(2.0, turns=2)) == 2
    assert winding_number(SampledPath.circle(2.0, turns=-3)) == -3
    assert winding_number(SampledPath.circle(1.0, center=(3.0, 0.0))) == 0


def test_square_is_exact_with_few_vertices():
    square = SampledPath(np.array([[2, 2, 0], [-2, 2, 0], [-2, -2, 0], [2, -2, 0]], float), closed=True)
    assert winding_number(square) == 1


def test_winding_errors():
    with pytest.raises(AxisSingularityError):
        winding_number(SampledPath(np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0]], float), closed=True))
    with pytest.raises(ParameterError):
        winding_number(SampledPath(np.array([[1, 0, 0], [0, 1, 0]], float)))


def test_unclosed_angular_sum_is_detected():
    t = np.linspace(0, 1.5 * math.pi, 10)
    pts = np.stack([2 * np.cos(t), 2 * np.sin(t), np.zeros_like(t)], axis=-1)
    # the closing chord completes the turn exactly
    assert winding_number(SampledPath(pts, closed=True)) == 1
    # a huge closure tolerance drops the chord, leaving three quarters of a turn
    with pytest.raises(UndersampledPathError):
        winding_number(SampledPath(pts, closed=True, tolerance=1e9))


def test_closed_flag_with_repeated_endpoint():
    pts = SampledPath.circle(2.0, 64).points
    dup = SampledPath(np.vstack([pts, pts[:1]]), closed=True)
    assert len(dup.segments()[0]) == 64
    assert winding_number(dup) == 1


def test_half_circle_line_integral():
    t = np.linspace(0, math.pi, 129)
    half = SampledPath(np.stack([2 * np.cos(t), 2 * np.sin(t), np.zeros_like(t)], axis=-1))
    val = open_line_integral(DyonCharge(1.0, 0.0), SolenoidConfig(1.0, 0.0, 2 * math.pi), half)
    assert val == pytest.approx(math.pi, rel=1e-12)


def test_radial_segment_and_null_charges():
    seg = SampledPath(np.array([[2.0, 0, 0], [3.0, 0, 0]]))
    d, s = FRAME
    assert open_line_integral(d, s, seg) == 0.0
    assert accumulate_phase(DyonCharge(0, 0), s, SampledPath.circle(2.0)).phase == 0.0


def test_closed_form_phase():
    d, s = FRAME
    res = accumulate_phase(d, s, SampledPath.circle(2.0))
    assert res.phase == pytest.approx(2.5, rel=1e-12)
    assert res.winding == 1
    assert res.circulation_A == pytest.approx(3.0, rel=1e-12)
    assert res.circulation_C == pytest.approx(-1.0, rel=1e-12)


def test_symmetric_cancellation():
    s = SolenoidConfig(1.0, 5.0, 5.0)
    assert accumulate_phase(DyonCharge(1, 1), s, SampledPath.circle(3.0)).phase == pytest.approx(0, abs=1e-12)


def test_wiggly_star_path():
    t = np.linspace(0, 2 * math.pi, 720, endpoint=False)
    rho = 2.5 + 1.2 * np.cos(7 * t)
    pts = np.stack([rho * np.cos(t), rho * np.sin(t), 0.4 * np.sin(3 * t)], axis=-1)
    d, s = FRAME
    assert accumulate_phase(d, s, SampledPath(pts, closed=True)).phase == pytest.approx(2.5, abs=1e-9)


def test_path_entering_solenoid_is_rejected():
    d, s = FRAME
    with pytest.raises(PathCrossesSolenoidError):
        accumulate_phase(d, s, SampledPath.circle(0.9))
    # vertices outside, chord cutting through the interior
    tri = SampledPath(np.array([[1.5, 0.2, 0], [-1.5, 0.2, 0], [0, 3, 0]]), closed=True)
    with pytest.raises(PathCrossesSolenoidError):
        accumulate_phase(d, s, tri)


def test_internal_cross_check_fires_on_inconsistent_quadrature(monkeypatch):
    import dyonphase.paths as paths_mod
    monkeypatch.setattr(paths_mod, "potential_circulations", lambda *a, **kw: (1.0, 1.0))
    d, s = FRAME
    with pytest.raises(InternalConsistencyError):
        paths_mod.accumulate_phase(d, s, SampledPath.circle(2.0))


def test_gauge_examples():
    d, s = FRAME
    path = SampledPath.circle(2.0, 100)
    base = accumulate_phase(d, s, path)
    same = gauge_shifted_phase(d, s, path, HarmonicGauge(), HarmonicGauge())
    assert same == base
    shifted = gauge_shifted_phase(d, s, path, HarmonicGauge.from_terms(x=3, y=-2), HarmonicGauge.from_terms(xy=1))
    assert shifted.phase == pytest.approx(base.phase, abs=1e-12)


def test_harmonic_basis_is_harmonic():
    g = HarmonicGauge(tuple(range(1, 10)))
    x = np.array([0.3, -1.1, 0.7])
    h = 1e-3
    lap = sum((g.value(x + h * e) - 2 * g.value(x) + g.value(x - h * e)) / h**2 for e in np.eye(3))
    assert abs(lap) < 1e-6
    from dyonphase.fields import fd_gradient
    np.testing.assert_allclose(g.gradient(x), fd_gradient(g.value, x, 1e-6), atol=1e-8)
    with pytest.raises(ParameterError):
        HarmonicGauge.from_terms(r2=1.0)


def test_nonlocality_form():
    d, s = DyonCharge(1, 0), SolenoidConfig(1.0, 0.0, 2 * math.pi)
    assert s.field_m == pytest.approx(2.0)
    assert nonlocality_form(d, s, 1) == pytest.approx(2 * math.pi)
    assert nonlocality_form(d, s, 0) == 0


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-10, 10), st.floats(-10, 10),
       st.integers(-3, 3).filter(bool), st.floats(1.2, 6.0))
def test_nonlocality_matches_n_turn_circle(q, g, fe, fm, n, radius):
    d, s = DyonCharge(q, g), SolenoidConfig(1.0, fe, fm)
    res = accumulate_phase(d, s, SampledPath.circle(radius, 64, turns=n))
    assert res.winding == n
    assert res.phase == pytest.approx(nonlocality_form(d, s, n), abs=1e-9)


def test_random_generators_produce_requested_topology(rng):
    for n in (-2, -1, 1, 2, 3):
        for polygonal in (False, True):
            path = random_enclosing_path(rng, 1.0, n, polygonal)
            assert winding_number(path) == n
    for polygonal in (False, True):
        assert winding_number(random_non_enclosing_path(rng, 1.0, polygonal)) == 0


def test_concatenated_loops_add_windings():
    a, b = SampledPath.circle(2.0, 64), SampledPath.circle(3.0, 64, turns=2)
    assert winding_number(a.concatenate(b)) == 3


def test_path_file_round_trip(tmp_path):
    path = SampledPath.circle(2.0, 16, z=0.5)
    f = tmp_path / "loop.txt"
    write_path_file(f, path)
    text = f.read_text()
    assert text.startswith("#closed\n")
    back = read_path_file(f)
    assert back.closed
    np.testing.assert_array_equal(back.points, path.points)


def test_path_file_errors(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("# comment\n1 2 3\n1 2\n")
    with pytest.raises(ParameterError, match=":3:"):
        read_path_file(f)
    f.write_text("1 2 x\n")
    with pytest.raises(ParameterError, match=":1:"):
        read_path_file(f)


def test_expected_phase_sign_of_winding():
    d, s = FRAME
    assert expected_phase(d, s, -2) == pytest.approx(-5.0)
