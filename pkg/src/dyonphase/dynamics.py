"""Classical dyon dynamics in the dual solenoid: Lagrangian, force, momentum, Hamiltonian.

Inside the solenoid the potentials are the linear (rigid-rotation) profiles and
the curls are constant; outside they are the pure-gauge ``1/rho`` profiles and
the curls vanish. Trajectories must stay on one side of the shell.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import (
    BoundaryAmbiguityError,
    DyonCharge,
    ParameterError,
    PhysicalConstants,
    Position,
    SolenoidConfig,
)
from .fields import field_profiles, potentials_array

REGIONS = ("interior", "exterior")


@dataclass(frozen=True)
class ParticleState:
    mass: float
    position: Position
    velocity: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        if not self.mass > 0:
            raise ParameterError("mass must be positive")
        v = np.array(self.velocity, dtype=float).reshape(3)
        v.setflags(write=False)
        object.__setattr__(self, "velocity", v)

    def check_nonrelativistic(self, k: PhysicalConstants) -> None:
        if np.linalg.norm(self.velocity) > 0.1 * k.c:
            warnings.warn("speed exceeds 0.1 c; the non-relativistic model is doubtful",
                          RuntimeWarning, stacklevel=2)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled trajectory stored as arrays."""

    mass: float
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        x = np.asarray(self.positions, dtype=float).reshape(-1, 3)
        v = np.asarray(self.velocities, dtype=float).reshape(-1, 3)
        if not (t.size == x.shape[0] == v.shape[0]) or t.size < 3:
            raise ParameterError("trajectory arrays must share length >= 3")
        steps = np.diff(t)
        if np.any(steps <= 0):
            raise ParameterError("trajectory times must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise ParameterError("trajectory time grid must be uniform")
        for name, arr in (("times", t), ("positions", x), ("velocities", v)):
            object.__setattr__(self, name, arr)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def states(self) -> list[ParticleState]:
        return [ParticleState(self.mass, Position.from_array(x), v, t)
                for t, x, v in zip(self.times, self.positions, self.velocities)]


def _region_of(s: SolenoidConfig, xyz) -> str:
    rho = math.hypot(xyz[0], xyz[1])
    if abs(rho - s.radius) <= 1e-12 * max(1.0, s.radius):
        raise BoundaryAmbiguityError("point lies on the solenoid shell")
    return "interior" if rho < s.radius else "exterior"


def region_potentials(s: SolenoidConfig, xyz, region: str):
    """``(A, C)`` in Cartesian form for the chosen region's potential branch."""
    xyz = np.asarray(xyz, dtype=float)
    if region == "interior":
        rot = np.array([-xyz[1], xyz[0], 0.0]) / (2 * math.pi * s.radius**2)
        return s.flux_m * rot, -s.flux_e * rot
    if region == "exterior":
        return potentials_array(s, xyz)
    raise ParameterError(f"region must be one of {REGIONS}")


def curl_coefficient(d: DyonCharge, s: SolenoidConfig, region: str) -> float:
    """z-component of curl(g A - q C), i.e. g B + q E inside and 0 outside."""
    if region == "interior":
        return d.g * s.field_m + d.q * s.field_e
    return 0.0


def lagrangian_xv(d: DyonCharge, s: SolenoidConfig, mass: float, x, v, region: str,
                  k: PhysicalConstants = PhysicalConstants()) -> float:
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    a, c = region_potentials(s, x, region)
    kinetic = 0.5 * mass * float(v @ v)
    coupling = float(v @ (d.q * a + d.g * c)) / k.c
    return kinetic + coupling + x[2] * curl_coefficient(d, s, region)


def lagrangian(d: DyonCharge, s: SolenoidConfig, st: ParticleState, region: str | None = None,
               k: PhysicalConstants = PhysicalConstants()) -> float:
    x = st.position.as_array()
    region = _region_of(s, x) if region is None else region
    return lagrangian_xv(d, s, st.mass, x, st.velocity, region, k)


def generalized_force(d: DyonCharge, s: SolenoidConfig, p: Position, v,
                      k: PhysicalConstants = PhysicalConstants()) -> np.ndarray:
    e_z, b_z = field_profiles(s, p.rho)
    e = np.array([0.0, 0.0, float(e_z)])
    b = np.array([0.0, 0.0, float(b_z)])
    v = np.asarray(v, dtype=float)
    return d.q * (e + np.cross(v, b) / k.c) + d.g * (b - np.cross(v, e) / k.c)


def canonical_momentum(d: DyonCharge, s: SolenoidConfig, st: ParticleState,
                       k: PhysicalConstants = PhysicalConstants(), region: str | None = None) -> np.ndarray:
    x = st.position.as_array()
    region = _region_of(s, x) if region is None else region
    a, c = region_potentials(s, x, region)
    return st.mass * st.velocity + (d.q * a + d.g * c) / k.c


def hamiltonian(d: DyonCharge, s: SolenoidConfig, st: ParticleState,
                k: PhysicalConstants = PhysicalConstants(), region: str | None = None) -> float:
    x = st.position.as_array()
    region = _region_of(s, x) if region is None else region
    a, c = region_potentials(s, x, region)
    p = canonical_momentum(d, s, st, k, region)
    kin = p - (d.q * a + d.g * c) / k.c
    return float(kin @ kin) / (2 * st.mass)


# --- trajectories -------------------------------------------------------------

def integrate_trajectory(d: DyonCharge, s: SolenoidConfig, mass: float, x0, v0, dt: float,
                         n_steps: int, k: PhysicalConstants = PhysicalConstants()) -> Trajectory:
    """Classical RK4 integration of ``m dv/dt = F`` with the generalised Lorentz force."""
    x = np.array(x0, dtype=float)
    v = np.array(v0, dtype=float)
    region = _region_of(s, x)
    e_z, b_z = field_profiles(s, math.hypot(x[0], x[1]))

    def accel(vel):
        e = np.array([0.0, 0.0, float(e_z)])
        b = np.array([0.0, 0.0, float(b_z)])
        f = d.q * (e + np.cross(vel, b) / k.c) + d.g * (b - np.cross(vel, e) / k.c)
        return f / mass

    xs, vs = [x.copy()], [v.copy()]
    for _ in range(n_steps):
        k1x, k1v = v, accel(v)
        k2x, k2v = v + 0.5 * dt * k1v, accel(v + 0.5 * dt * k1v)
        k3x, k3v = v + 0.5 * dt * k2v, accel(v + 0.5 * dt * k2v)
        k4x, k4v = v + dt * k3v, accel(v + dt * k3v)
        x = x + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if _region_of(s, x) != region:
            raise ParameterError("integrated trajectory crossed the solenoid shell")
        xs.append(x.copy())
        vs.append(v.copy())
    times = np.arange(n_steps + 1) * dt
    return Trajectory(mass, times, np.array(xs), np.array(vs))


def circular_trajectory(mass: float, center, radius: float, omega: float, dt: float,
                        n_steps: int, vz: float = 0.0, z0: float = 0.0) -> Trajectory:
    """Analytic uniform circular motion (optionally drifting along z)."""
    t = np.arange(n_steps + 1) * dt
    cx, cy = center
    x = np.stack([cx + radius * np.cos(omega * t), cy + radius * np.sin(omega * t), z0 + vz * t], axis=-1)
    v = np.stack([-radius * omega * np.sin(omega * t), radius * omega * np.cos(omega * t),
                  np.full_like(t, vz)], axis=-1)
    return Trajectory(mass, t, x, v)


def _trajectory_region(s: SolenoidConfig, traj: Trajectory, region: str | None) -> str:
    regions = {_region_of(s, x) for x in traj.positions}
    if len(regions) != 1:
        raise ParameterError("trajectory crosses the solenoid shell")
    found = regions.pop()
    if region is not None and region != found:
        raise ParameterError(f"trajectory lies in the {found}, not the {region}")
    return found


def trajectory_region(s: SolenoidConfig, traj: Trajectory) -> str:
    """``"interior"`` or ``"exterior"``; raises if the trajectory crosses the shell."""
    return _trajectory_region(s, traj, None)


@dataclass(frozen=True)
class EulerLagrangeReport:
    residual: float           # max |d/dt dL/dv - dL/dx|
    identity_residual: float  # max |(d/dt dL/dv - dL/dx) - (m a - F)|
    n_checked: int


def euler_lagrange_residual(d: DyonCharge, s: SolenoidConfig, traj: Trajectory,
                            region: str | None = None, k: PhysicalConstants = PhysicalConstants(),
                            x_step: float | None = None) -> EulerLagrangeReport:
    """Finite-difference Euler-Lagrange check along a sampled trajectory.

    ``dL/dx`` is a central difference of the full Lagrangian (step ``1e-5 R``
    by default) and ``d/dt`` a central difference over the time grid.
    """
    region = _trajectory_region(s, traj, region)
    h = 1e-5 * s.radius if x_step is None else x_step
    m, dt = traj.mass, traj.dt
    momenta = np.array([
        m * v + (d.q * a + d.g * c) / k.c
        for x, v in zip(traj.positions, traj.velocities)
        for a, c in [region_potentials(s, x, region)]
    ])
    worst = worst_identity = 0.0
    for i in range(1, len(traj.times) - 1):
        x, v = traj.positions[i], traj.velocities[i]
        dp_dt = (momenta[i + 1] - momenta[i - 1]) / (2 * dt)
        dl_dx = np.empty(3)
        for j in range(3):
            step = np.zeros(3)
            step[j] = h
            dl_dx[j] = (lagrangian_xv(d, s, m, x + step, v, region, k)
                        - lagrangian_xv(d, s, m, x - step, v, region, k)) / (2 * h)
        el = dp_dt - dl_dx
        accel = (traj.velocities[i + 1] - traj.velocities[i - 1]) / (2 * dt)
        force = generalized_force(d, s, Position.from_array(x), v, k)
        worst = max(worst, float(np.max(np.abs(el))))
        worst_identity = max(worst_identity, float(np.max(np.abs(el - (m * accel - force)))))
    return EulerLagrangeReport(worst, worst_identity, len(traj.times) - 2)


@dataclass(frozen=True)
class TranslationReport:
    residual: float
    max_abs_lagrangian: float
    delta_L: np.ndarray
    dK_dt: np.ndarray


def total_derivative_term(d: DyonCharge, s: SolenoidConfig, x, t: float, shift,
                          k: PhysicalConstants = PhysicalConstants()) -> float:
    """The function K(x, t) whose time derivative absorbs a rigid shift of the interior Lagrangian."""
    ex, ey, ez = shift
    bilinear = d.q * s.flux_m - d.g * s.flux_e
    return (bilinear * (ex * x[1] - ey * x[0]) / (2 * math.pi * s.radius**2 * k.c)
            + t * ez * curl_coefficient(d, s, "interior"))


def translation_symmetry_residual(d: DyonCharge, s: SolenoidConfig, traj: Trajectory,
                                  eps: float, n_hat, k: PhysicalConstants = PhysicalConstants()
                                  ) -> TranslationReport:
    """Max of ``|L(x + eps n, v) - L(x, v) - dK/dt|`` along an interior trajectory."""
    if not eps > 0:
        raise ParameterError("eps must be positive")
    n_hat = np.asarray(n_hat, dtype=float)
    norm = np.linalg.norm(n_hat)
    if norm == 0:
        raise ParameterError("n_hat must be non-zero")
    shift = eps * n_hat / norm
    _trajectory_region(s, traj, "interior")
    m = traj.mass
    lag = np.array([lagrangian_xv(d, s, m, x, v, "interior", k)
                    for x, v in zip(traj.positions, traj.velocities)])
    lag_shifted = np.array([lagrangian_xv(d, s, m, x + shift, v, "interior", k)
                            for x, v in zip(traj.positions, traj.velocities)])
    kk = np.array([total_derivative_term(d, s, x, t, shift, k)
                   for x, t in zip(traj.positions, traj.times)])
    delta_l = (lag_shifted - lag)[1:-1]
    dk_dt = (kk[2:] - kk[:-2]) / (2 * traj.dt)
    residual = float(np.max(np.abs(delta_l - dk_dt)))
    return TranslationReport(residual, float(np.max(np.abs(lag))), delta_l, dk_dt)


# --- trajectory files -----------------------------------------------------------

TRAJECTORY_COLUMNS = ("t", "x", "y", "z", "vx", "vy", "vz")


def read_trajectory_csv(path: str | Path, mass: float) -> Trajectory:
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].strip().startswith("#"):
                continue
            if lineno == 1 and row[0].strip() == "t":
                continue
            if len(row) != 7:
                raise ParameterError(f"{path}:{lineno}: expected 7 columns {TRAJECTORY_COLUMNS}")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise ParameterError(f"{path}:{lineno}: non-numeric value") from None
    data = np.array(rows, dtype=float).reshape(-1, 7)
    return Trajectory(mass, data[:, 0], data[:, 1:4], data[:, 4:7])


def write_trajectory_csv(path: str | Path, traj: Trajectory) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_COLUMNS)
        for t, x, v in zip(traj.times, traj.positions, traj.velocities):
            writer.writerow([f"{val:.17g}" for val in (t, *x, *v)])
