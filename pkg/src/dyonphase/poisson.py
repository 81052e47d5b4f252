"""Finite-difference check of the analytic potentials.

Solves the radial reduction of the vector Poisson equation,

    f'' + f'/rho - f/rho**2 = source(rho),

for the azimuthal component of A (or C) with a Gaussian-smoothed shell
source, and compares the result to the closed-form profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from .core import NumericFailureError, ParameterError, SolenoidConfig
from .fields import gaussian_delta, potential_profiles


@dataclass(frozen=True)
class RadialGrid:
    rho_max: float
    n_points: int = 4096
    sigma: float = 0.005

    @classmethod
    def default(cls, s: SolenoidConfig, n_points: int = 4096) -> "RadialGrid":
        return cls(rho_max=8.0 * s.radius, n_points=n_points, sigma=s.radius / 200.0)

    @property
    def h(self) -> float:
        return self.rho_max / self.n_points

    @property
    def rho(self) -> np.ndarray:
        return np.arange(self.n_points + 1) * self.h

    def validate(self, s: SolenoidConfig) -> None:
        radius = s.radius
        if self.n_points < 512:
            raise ParameterError("radial grid needs at least 512 points")
        if self.rho_max < 8 * radius * (1 - 1e-12):
            raise ParameterError("rho_max must be at least 8 solenoid radii")
        if not self.sigma > 0:
            raise ParameterError("sigma must be positive")
        if radius < 8 * self.sigma or self.rho_max - radius < 8 * self.sigma:
            raise ParameterError("shell must sit at least 8 sigma from both grid ends")


@dataclass(frozen=True)
class RadialProfile:
    which: str
    rho: np.ndarray
    numeric: np.ndarray
    analytic: np.ndarray
    grid: RadialGrid
    radius: float

    @property
    def abs_err(self) -> np.ndarray:
        return np.abs(self.numeric - self.analytic)

    def max_rel_error(self) -> float:
        return oracle_report(self.analytic, self.numeric, self.rho, self.radius, self.grid.sigma)


def solve_radial_potential(s: SolenoidConfig, grid: RadialGrid | None = None,
                           which: str = "A") -> RadialProfile:
    """Tridiagonal solve for ``A_phi`` (``which="A"``) or ``C_phi`` (``which="C"``)."""
    if which not in ("A", "C"):
        raise ParameterError("which must be 'A' or 'C'")
    grid = RadialGrid.default(s) if grid is None else grid
    grid.validate(s)
    radius, h = s.radius, grid.h
    rho = grid.rho
    # A is sourced by -Phi_m delta / (pi R^2), C by +Phi_e delta / (pi R^2)
    strength = -s.flux_m if which == "A" else s.flux_e
    analytic_a, analytic_c = potential_profiles(s, rho)
    analytic = analytic_a if which == "A" else analytic_c

    r = rho[1:-1]
    source = strength * gaussian_delta(r - radius, grid.sigma) / (math.pi * radius**2)
    lower = 1.0 / h**2 - 1.0 / (2 * h * r)
    diag = -2.0 / h**2 - 1.0 / r**2
    upper = 1.0 / h**2 + 1.0 / (2 * h * r)

    f_outer = analytic[-1]
    rhs = source.copy()
    rhs[-1] -= upper[-1] * f_outer  # inner boundary value is zero

    bands = np.zeros((3, r.size))
    bands[0, 1:] = upper[:-1]
    bands[1] = diag
    bands[2, :-1] = lower[1:]
    try:
        interior = solve_banded((1, 1), bands, rhs)
    except (LinAlgError, ValueError) as exc:
        raise NumericFailureError(f"radial tridiagonal solve failed: {exc}") from exc
    if not np.all(np.isfinite(interior)):
        raise NumericFailureError("radial tridiagonal solve produced non-finite values")
    numeric = np.concatenate([[0.0], interior, [f_outer]])
    return RadialProfile(which, rho, numeric, analytic, grid, radius)


def oracle_report(analytic, numeric, rho=None, radius: float | None = None,
                  sigma: float | None = None) -> float:
    """L-infinity deviation relative to ``max |analytic|``, skipping ``|rho - R| < 4 sigma``."""
    analytic = np.asarray(analytic, dtype=float)
    numeric = np.asarray(numeric, dtype=float)
    keep = np.ones(analytic.shape, dtype=bool)
    if rho is not None and radius is not None and sigma is not None:
        keep = np.abs(np.asarray(rho) - radius) >= 4 * sigma
    scale = np.max(np.abs(analytic[keep])) if keep.any() else 0.0
    diff = np.max(np.abs(numeric[keep] - analytic[keep])) if keep.any() else 0.0
    if scale == 0.0:
        return float(diff)
    return float(diff / scale)


def refinement_study(s: SolenoidConfig, which: str = "A", levels: int = 4,
                     n_start: int = 512, sigma_start: float | None = None):
    """Errors while halving both sigma and h; returns ``[(n_points, sigma, error), ...]``."""
    sigma = s.radius / 25.0 if sigma_start is None else sigma_start
    rows = []
    n = n_start
    for _ in range(levels):
        grid = RadialGrid(8.0 * s.radius, n, sigma)
        rows.append((n, sigma, solve_radial_potential(s, grid, which).max_rel_error()))
        n *= 2
        sigma /= 2
    return rows
