"""Shared value types, constants and error classes.

Everything is expressed in Gaussian units with configurable ``hbar`` and ``c``;
the defaults (``hbar = c = 1``) make most reference values plain numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DyonPhaseError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(DyonPhaseError, ValueError):
    pass


class AxisSingularityError(DyonPhaseError, ValueError):
    """Raised when a quantity is requested on the solenoid axis (rho = 0)."""


class BoundaryAmbiguityError(DyonPhaseError, ValueError):
    """Raised for points on the solenoid shell, where the step function is undefined."""


class PathCrossesSolenoidError(DyonPhaseError, ValueError):
    pass


class UndersampledPathError(DyonPhaseError, ValueError):
    pass


class NumericFailureError(DyonPhaseError, RuntimeError):
    pass


class InternalConsistencyError(DyonPhaseError, RuntimeError):
    pass


class DegenerateReductionError(DyonPhaseError, ValueError):
    pass


AXIS_TOL = 1e-12
SHELL_TOL = 1e-12


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    c: float = 1.0
    alpha: float = 1.0 / 137.035999
    e: float = 1.0

    def __post_init__(self) -> None:
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise ParameterError("hbar must be positive")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ParameterError("c must be positive")
        if not 0 < self.alpha < 1:
            raise ParameterError("alpha must lie in (0, 1)")
        _finite("e", self.e)

    @property
    def g0(self) -> float:
        """Elementary magnetic charge from the Dirac quantisation condition."""
        return self.e / (2.0 * self.alpha)

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c


@dataclass(frozen=True)
class DyonCharge:
    q: float = 0.0
    g: float = 0.0

    def __post_init__(self) -> None:
        _finite("q", self.q)
        _finite("g", self.g)

    def dual(self) -> "DyonCharge":
        """Discrete duality map q -> g, g -> -q."""
        return DyonCharge(self.g, -self.q)


@dataclass(frozen=True)
class SolenoidConfig:
    radius: float = 1.0
    flux_e: float = 0.0
    flux_m: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ParameterError("solenoid radius must be positive and finite")
        _finite("flux_e", self.flux_e)
        _finite("flux_m", self.flux_m)

    @property
    def field_e(self) -> float:
        """Magnitude of the confined electric field."""
        return self.flux_e / (math.pi * self.radius**2)

    @property
    def field_m(self) -> float:
        """Magnitude of the confined magnetic field."""
        return self.flux_m / (math.pi * self.radius**2)

    def dual(self) -> "SolenoidConfig":
        """Discrete duality map Phi_e -> Phi_m, Phi_m -> -Phi_e."""
        return SolenoidConfig(self.radius, self.flux_m, -self.flux_e)


@dataclass(frozen=True)
class Position:
    x: float
    y: float
    z: float = 0.0

    @classmethod
    def from_cylindrical(cls, rho: float, phi: float, z: float = 0.0) -> "Position":
        return cls(rho * math.cos(phi), rho * math.sin(phi), z)

    @classmethod
    def from_array(cls, xyz) -> "Position":
        x, y, z = (float(v) for v in xyz)
        return cls(x, y, z)

    @property
    def rho(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def phi(self) -> float:
        return math.atan2(self.y, self.x)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def shifted(self, delta) -> "Position":
        dx, dy, dz = delta
        return Position(self.x + dx, self.y + dy, self.z + dz)


def cylindrical_basis(p: Position) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return the (rho_hat, phi_hat, z_hat) triad at ``p``."""
    rho = p.rho
    if rho <= AXIS_TOL:
        raise AxisSingularityError(f"cylindrical basis undefined on the axis at {p}")
    rho_hat = np.array([p.x / rho, p.y / rho, 0.0])
    phi_hat = np.array([-p.y / rho, p.x / rho, 0.0])
    z_hat = np.array([0.0, 0.0, 1.0])
    return rho_hat, phi_hat, z_hat


def phi_hat_array(xyz: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised azimuthal unit vectors for an ``(..., 3)`` array of points.

    Returns ``(phi_hat, rho)``; raises on any on-axis point.
    """
    xyz = np.asarray(xyz, dtype=float)
    rho = np.hypot(xyz[..., 0], xyz[..., 1])
    if np.any(rho <= AXIS_TOL):
        raise AxisSingularityError("point on the solenoid axis")
    phi_hat = np.stack([-xyz[..., 1] / rho, xyz[..., 0] / rho, np.zeros_like(rho)], axis=-1)
    return phi_hat, rho
