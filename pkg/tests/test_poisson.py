import math

import numpy as np
import pytest

from dyonphase.core import ParameterError, SolenoidConfig
from dyonphase.poisson import RadialGrid, oracle_report, refinement_study, solve_radial_potential

AB = SolenoidConfig(1.0, 0.0, 2 * math.pi)
DWF = SolenoidConfig(1.0, 2 * math.pi, 0.0)


def _value_at(profile, rho):
    return float(np.interp(rho, profile.rho, profile.numeric))


def test_vector_potential_inside():
    prof = solve_radial_potential(AB, which="A")
    assert _value_at(prof, 0.5) == pytest.approx(0.5, rel=1e-3)


def test_electric_vector_potential_outside():
    # closed form gives -Phi_e / (2 pi rho) = -0.5 at rho = 2
    prof = solve_radial_potential(DWF, which="C")
    assert _value_at(prof, 2.0) == pytest.approx(-0.5, rel=1e-3)


def test_zero_flux_gives_zero_profile():
    prof = solve_radial_potential(SolenoidConfig(1.0, 0.0, 0.0), which="A")
    assert not prof.numeric.any()


@pytest.mark.parametrize("which, s", [("A", AB), ("C", DWF)])
def test_default_grid_meets_oracle_tolerance(which, s):
    prof = solve_radial_potential(s, which=which)
    assert prof.grid == RadialGrid.default(s)
    assert prof.max_rel_error() < 1e-3


def test_refinement_decreases_error_at_second_order():
    errs = [err for _, _, err in refinement_study(AB, "A", levels=4)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(3.5 < r < 4.5 for r in ratios)


def test_oracle_report_identity_and_shell_exclusion():
    rho = np.linspace(0, 8, 801)
    f = np.sin(rho)
    assert oracle_report(f, f) == 0.0
    g = f.copy()
    g[100] += 1.0  # rho = 1, inside the excluded band
    assert oracle_report(f, g, rho, 1.0, 0.01) == 0.0
    assert oracle_report(f, g) > 0.5


def test_solution_scales_with_radius():
    s = SolenoidConfig(2.5, 0.0, 1.0)
    prof = solve_radial_potential(s, which="A")
    assert prof.grid.rho_max == pytest.approx(20.0)
    assert prof.max_rel_error() < 1e-3


@pytest.mark.parametrize("grid", [RadialGrid(8.0, 256, 0.005), RadialGrid(4.0, 4096, 0.005),
                                  RadialGrid(8.0, 4096, 0.2), RadialGrid(8.0, 4096, 0.0)])
def test_invalid_grids_rejected(grid):
    with pytest.raises(ParameterError):
        solve_radial_potential(AB, grid)
