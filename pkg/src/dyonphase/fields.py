"""Closed-form currents, fields, potentials and gauge functions of the dual solenoid."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    AXIS_TOL,
    SHELL_TOL,
    AxisSingularityError,
    BoundaryAmbiguityError,
    InternalConsistencyError,
    ParameterError,
    PhysicalConstants,
    Position,
    SolenoidConfig,
    phi_hat_array,
)
from .quadrature import integrate

Z_HAT = np.array([0.0, 0.0, 1.0])
SHELL_SUPPORT = 8.0  # smoothed shell currents are cut off beyond this many widths


@dataclass(frozen=True)
class FieldSample:
    at: Position
    E: np.ndarray | None = None
    B: np.ndarray | None = None
    A: np.ndarray | None = None
    C: np.ndarray | None = None


@dataclass(frozen=True)
class GaugeFunctionPair:
    """Multi-valued gauge functions whose gradients are the exterior potentials.

    Both are evaluated on the continuously unwrapped azimuth, so
    ``chi(phi + 2 pi) - chi(phi) = flux_m``.
    """

    solenoid: SolenoidConfig
    branch: str = "unwrapped"

    def chi(self, phi):
        return self.solenoid.flux_m * np.asarray(phi) / (2 * math.pi)

    def xi(self, phi):
        return -self.solenoid.flux_e * np.asarray(phi) / (2 * math.pi)


def gaussian_delta(u, sigma: float):
    """Unit-area Gaussian regularisation of delta(u), truncated at 8 sigma."""
    u = np.asarray(u, dtype=float)
    val = np.exp(-0.5 * (u / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
    return np.where(np.abs(u) > SHELL_SUPPORT * sigma, 0.0, val)


def _check_off_shell(s: SolenoidConfig, rho) -> None:
    if np.any(np.abs(np.asarray(rho) - s.radius) <= SHELL_TOL * max(1.0, s.radius)):
        raise BoundaryAmbiguityError("point lies on the solenoid shell rho = R")


def current_density(s: SolenoidConfig, p: Position, shell_width: float,
                    k: PhysicalConstants = PhysicalConstants()):
    """Shell currents ``(J_e, J_m)`` with delta(rho - R) smoothed to width ``shell_width``."""
    if not shell_width > 0:
        raise ParameterError("shell_width must be positive")
    rho = p.rho
    if rho <= AXIS_TOL:
        return np.zeros(3), np.zeros(3)
    phi_hat = np.array([-p.y / rho, p.x / rho, 0.0])
    weight = float(gaussian_delta(rho - s.radius, shell_width)) / (4 * math.pi**2 * s.radius**2)
    j_e = k.c * s.flux_m * weight * phi_hat
    j_m = -k.c * s.flux_e * weight * phi_hat
    return j_e, j_m


def field_profiles(s: SolenoidConfig, rho):
    """Axial field magnitudes ``(E_z, B_z)`` as functions of rho (arrays allowed)."""
    rho = np.asarray(rho, dtype=float)
    _check_off_shell(s, rho)
    inside = rho < s.radius
    return np.where(inside, s.field_e, 0.0), np.where(inside, s.field_m, 0.0)


def eval_fields(s: SolenoidConfig, p: Position) -> FieldSample:
    e_z, b_z = field_profiles(s, p.rho)
    return FieldSample(at=p, E=float(e_z) * Z_HAT, B=float(b_z) * Z_HAT)


def potential_profiles(s: SolenoidConfig, rho):
    """Azimuthal components ``(A_phi, C_phi)``; continuous across the shell."""
    rho = np.asarray(rho, dtype=float)
    radius = s.radius
    inside = rho < radius
    safe = np.where(inside, 1.0, rho)
    shape = np.where(inside, rho / radius**2, 1.0 / safe) / (2 * math.pi)
    return s.flux_m * shape, -s.flux_e * shape


def potentials_array(s: SolenoidConfig, xyz):
    """Vectorised Cartesian ``(A, C)`` for an ``(..., 3)`` array of points."""
    phi_hat, rho = phi_hat_array(xyz)
    a_phi, c_phi = potential_profiles(s, rho)
    return a_phi[..., None] * phi_hat, c_phi[..., None] * phi_hat


def eval_potentials(s: SolenoidConfig, p: Position) -> FieldSample:
    if p.rho <= AXIS_TOL:
        raise AxisSingularityError(f"potentials are singular on the axis at {p}")
    a, c = potentials_array(s, p.as_array())
    return FieldSample(at=p, A=a, C=c)


def eval_gauge_functions(s: SolenoidConfig, unwrapped_phi: float) -> tuple[float, float]:
    pair = GaugeFunctionPair(s)
    return float(pair.chi(unwrapped_phi)), float(pair.xi(unwrapped_phi))


def magnetisation_polarisation(s: SolenoidConfig, p: Position):
    """Confined magnetisation ``M`` and polarisation ``P`` (both along z)."""
    rho = p.rho
    _check_off_shell(s, rho)
    theta = 1.0 if rho < s.radius else 0.0
    scale = theta / (4 * math.pi**2 * s.radius**2)
    m = s.flux_m * scale * Z_HAT
    pol = -s.flux_e * scale * Z_HAT
    sample = eval_fields(s, p)
    if not (np.allclose(sample.B, 4 * math.pi * m, rtol=1e-12, atol=0)
            and np.allclose(sample.E, -4 * math.pi * pol, rtol=1e-12, atol=0)):
        raise InternalConsistencyError("E = -4 pi P / B = 4 pi M cross-check failed")
    return m, pol


# --- finite-difference operators (central differences) ---------------------

def fd_gradient(fun, x, h: float):
    """Central-difference gradient of a scalar function of a 3-vector."""
    x = np.asarray(x, dtype=float)
    grad = np.empty(3)
    for i in range(3):
        step = np.zeros(3)
        step[i] = h
        grad[i] = (fun(x + step) - fun(x - step)) / (2 * h)
    return grad


def fd_jacobian(fun, x, h: float):
    """``J[i, j] = d fun_i / d x_j`` for a vector function of a 3-vector."""
    x = np.asarray(x, dtype=float)
    jac = np.empty((3, 3))
    for j in range(3):
        step = np.zeros(3)
        step[j] = h
        jac[:, j] = (np.asarray(fun(x + step)) - np.asarray(fun(x - step))) / (2 * h)
    return jac


def fd_curl(fun, x, h: float):
    jac = fd_jacobian(fun, x, h)
    return np.array([jac[2, 1] - jac[1, 2], jac[0, 2] - jac[2, 0], jac[1, 0] - jac[0, 1]])


def fd_divergence(fun, x, h: float) -> float:
    return float(np.trace(fd_jacobian(fun, x, h)))


@dataclass
class MaxwellReport:
    loop_radius: float
    circulation_A: float
    expected_A: float
    circulation_C: float
    expected_C: float
    curl_residual: float
    max_residual: float
    tol: float
    passed: bool
    details: dict = field(default_factory=dict)


def circulation(s: SolenoidConfig, radius: float, which: str = "A", tol: float = 1e-13) -> float:
    """Line integral of A (or C) over the centred circle of the given radius, by quadrature."""
    def integrand(t):
        pts = np.stack([radius * np.cos(t), radius * np.sin(t), np.zeros_like(t)], axis=-1)
        a, c = potentials_array(s, pts)
        vec = a if which == "A" else c
        tangent = np.stack([-radius * np.sin(t), radius * np.cos(t), np.zeros_like(t)], axis=-1)
        return np.sum(vec * tangent, axis=-1)

    return integrate(integrand, 0.0, 2 * math.pi, tol=tol)


def verify_maxwell_integral(s: SolenoidConfig, loop_radius: float, tol: float = 1e-6,
                            n_curl_points: int = 16, fd_step: float | None = None) -> MaxwellReport:
    """Stokes-form check of the shell Maxwell equations plus pointwise curl checks.

    A failing check is reported through ``passed``; nothing is raised.
    """
    if not loop_radius > 0:
        raise ParameterError("loop_radius must be positive")
    radius = s.radius
    _check_off_shell(s, loop_radius)
    h = 1e-4 * radius if fd_step is None else fd_step
    enclosed = 1.0 if loop_radius > radius else (loop_radius / radius) ** 2

    circ_a = circulation(s, loop_radius, "A")
    circ_c = circulation(s, loop_radius, "C")
    exp_a = s.flux_m * enclosed
    exp_c = -s.flux_e * enclosed

    def a_of(x):
        return potentials_array(s, x)[0]

    def c_of(x):
        return potentials_array(s, x)[1]

    curl_res = 0.0
    if abs(loop_radius - radius) > 4 * h:
        for phi in np.linspace(0, 2 * math.pi, n_curl_points, endpoint=False):
            x = np.array([loop_radius * math.cos(phi), loop_radius * math.sin(phi), 0.3 * radius])
            e_z, b_z = field_profiles(s, loop_radius)
            curl_a = fd_curl(a_of, x, h)
            curl_c = fd_curl(c_of, x, h)
            curl_res = max(curl_res,
                           float(np.max(np.abs(curl_a - b_z * Z_HAT))),
                           float(np.max(np.abs(-curl_c - e_z * Z_HAT))))
    residuals = {"circulation_A": abs(circ_a - exp_a), "circulation_C": abs(circ_c - exp_c),
                 "curl": curl_res}
    worst = max(residuals.values())
    return MaxwellReport(loop_radius, circ_a, exp_a, circ_c, exp_c, curl_res, worst, tol,
                         worst <= tol, residuals)
