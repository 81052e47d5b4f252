"""Two-slit interference with a dual solenoid between the slit screen and the detector.

Lab-frame layout (the solenoid axis is parallel to z):

* source at ``(source_distance, 0)``, slits at ``(0, +-d/2)``, detector plane ``x = -l``;
* slit 1 sits at ``y = -d/2``, slit 2 at ``y = +d/2``;
* the solenoid axis passes through ``(-solenoid_x, solenoid_y)``.

With this orientation the loop "path 2 minus path 1" runs counter-clockwise,
so an enclosed solenoid contributes winding +1, and a positive phase moves
the pattern towards slit 2 (+y).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import DyonCharge, DyonPhaseError, ParameterError, PhysicalConstants, SolenoidConfig
from .paths import SampledPath, accumulate_phase, open_line_integral


class AmbiguousShiftError(DyonPhaseError, ValueError):
    """Raised when the correlation peak sits on the edge of the search window."""


@dataclass(frozen=True)
class TwoSlitGeometry:
    l: float = 1000.0
    d: float = 10.0
    source_distance: float = 500.0
    solenoid_x: float | None = None
    solenoid_y: float = 0.0
    slit_width: float | None = None

    def __post_init__(self) -> None:
        if not (self.l > 0 and self.d > 0 and self.source_distance > 0):
            raise ParameterError("l, d and source_distance must be positive")
        if self.solenoid_x is None:
            object.__setattr__(self, "solenoid_x", 0.5 * self.l)
        if self.slit_width is None:
            object.__setattr__(self, "slit_width", 0.1 * self.d)
        if not self.slit_width > 0:
            raise ParameterError("slit_width must be positive")

    @property
    def source(self) -> np.ndarray:
        return np.array([self.source_distance, 0.0, 0.0])

    @property
    def slit1(self) -> np.ndarray:
        return np.array([0.0, -0.5 * self.d, 0.0])

    @property
    def slit2(self) -> np.ndarray:
        return np.array([0.0, 0.5 * self.d, 0.0])

    @property
    def screen_centre(self) -> np.ndarray:
        return np.array([-self.l, 0.0, 0.0])

    @property
    def solenoid_axis(self) -> np.ndarray:
        return np.array([-self.solenoid_x, self.solenoid_y, 0.0])

    def fringe_spacing(self, lambda_bar: float) -> float:
        """Small-angle fringe period ``2 pi l lambda_bar / d``."""
        return 2 * math.pi * self.l * lambda_bar / self.d

    def classical_paths(self) -> tuple[SampledPath, SampledPath]:
        """Source -> slit -> screen centre polylines, in solenoid-centred coordinates."""
        offset = self.solenoid_axis
        p1 = np.array([self.source, self.slit1, self.screen_centre]) - offset
        p2 = np.array([self.source, self.slit2, self.screen_centre]) - offset
        return SampledPath(p1), SampledPath(p2)

    def difference_loop(self) -> SampledPath:
        """Path 2 followed by path 1 reversed, as a closed loop."""
        p1, p2 = self.classical_paths()
        return SampledPath(np.vstack([p2.points, p1.points[::-1][1:-1]]), closed=True)


@dataclass(frozen=True)
class FringePattern:
    x: np.ndarray
    intensity: np.ndarray
    delta: float
    spacing: float

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])


def reduced_wavelength(mass: float, speed: float, k: PhysicalConstants = PhysicalConstants()) -> float:
    """Reduced de Broglie wavelength ``hbar / (m v)``."""
    if not (mass > 0 and speed > 0):
        raise ParameterError("mass and speed must be positive")
    return k.hbar / (mass * speed)


def predicted_shift(geo: TwoSlitGeometry, lambda_bar: float, delta: float) -> float:
    return geo.l * lambda_bar * delta / geo.d


def path_phase_difference(d: DyonCharge, s: SolenoidConfig, geo: TwoSlitGeometry,
                          k: PhysicalConstants = PhysicalConstants(), tol: float = 1e-13) -> float:
    """Phase of path 2 relative to path 1 from two open line integrals."""
    p1, p2 = geo.classical_paths()
    return (open_line_integral(d, s, p2, tol) - open_line_integral(d, s, p1, tol)) / k.hbar_c


def loop_phase(d: DyonCharge, s: SolenoidConfig, geo: TwoSlitGeometry,
               k: PhysicalConstants = PhysicalConstants()):
    return accumulate_phase(d, s, geo.difference_loop(), k)


def fringe_pattern(geo: TwoSlitGeometry, delta: float, lambda_bar: float, n_samples: int = 2001,
                   half_width: float | None = None) -> FringePattern:
    """Intensity ``|psi_1 + exp(i delta) psi_2|**2`` on a uniform detector grid.

    Each amplitude carries ``exp(i L / lambda_bar)`` for its geometric path
    length ``L`` and a shared single-slit envelope.
    """
    if not lambda_bar > 0:
        raise ParameterError("lambda_bar must be positive")
    if geo.l < 10 * geo.d:
        warnings.warn("far-field condition l >> d is not met", RuntimeWarning, stacklevel=2)
    spacing = geo.fringe_spacing(lambda_bar)
    half = 3.0 * spacing if half_width is None else half_width
    y = np.linspace(-half, half, n_samples)
    screen = np.stack([np.full_like(y, -geo.l), y, np.zeros_like(y)], axis=-1)

    def amplitude(slit):
        length = np.linalg.norm(slit - geo.source) + np.linalg.norm(screen - slit, axis=-1)
        return np.exp(1j * length / lambda_bar)

    sin_theta = y / np.hypot(geo.l, y)
    envelope = np.sinc(geo.slit_width * sin_theta / (2 * math.pi * lambda_bar))
    psi = envelope * (amplitude(geo.slit1) + np.exp(1j * delta) * amplitude(geo.slit2))
    return FringePattern(y, np.abs(psi) ** 2, float(delta), spacing)


def _overlap_correlation(a: np.ndarray, b: np.ndarray, lags: np.ndarray) -> np.ndarray:
    """Pearson correlation of ``b[i + lag]`` against ``a[i]`` over each overlap."""
    n = a.size
    out = np.empty(lags.size)
    for j, lag in enumerate(lags):
        if lag >= 0:
            u, v = a[: n - lag], b[lag:]
        else:
            u, v = a[-lag:], b[: n + lag]
        u = u - u.mean()
        v = v - v.mean()
        denom = math.sqrt(float(np.dot(u, u)) * float(np.dot(v, v)))
        out[j] = float(np.dot(u, v)) / denom if denom > 0 else 0.0
    return out


def extract_shift(p0: FringePattern, p1: FringePattern, max_lag: int | None = None) -> float:
    """Translation of ``p1`` relative to ``p0`` (positive towards slit 2).

    Correlates the patterns over each overlap and refines the best lag by a
    parabola through its neighbours. The shift is only defined modulo one
    fringe, so by default lags are searched within half a fringe spacing; a
    peak on (or within one sample of) that boundary is ambiguous, as at delta = pi.
    """
    if p0.x.shape != p1.x.shape or not np.allclose(p0.x, p1.x, rtol=0, atol=1e-12 * np.ptp(p0.x)):
        raise ParameterError("patterns must share the same screen grid")
    n = p0.x.size
    if max_lag is None:
        max_lag = max(2, int(round(0.5 * p0.spacing / p0.dx)))
    lag_limit = min(int(max_lag), n - 2)
    lags = np.arange(-lag_limit, lag_limit + 1)
    corr = _overlap_correlation(p0.intensity, p1.intensity, lags)
    i = int(np.argmax(corr))
    if i == 0 or i == corr.size - 1:
        raise AmbiguousShiftError("correlation peak lies on the search boundary")
    c_m, c_0, c_p = corr[i - 1], corr[i], corr[i + 1]
    denom = c_m - 2 * c_0 + c_p
    frac = 0.0 if denom == 0 else 0.5 * (c_m - c_p) / denom
    refined = lags[i] + frac
    if abs(refined) > lag_limit - 1:
        raise AmbiguousShiftError("correlation peak lies on the search boundary")
    return float(refined * p0.dx)


def dirac_scenario(field_m: float, field_e: float, radius: float, n: int = 1,
                   k: PhysicalConstants = PhysicalConstants()) -> float:
    """Phase of an elementary dyon ``(e, e / (2 alpha))`` around confined fields.

    ``field_m`` and ``field_e`` are the interior magnetic and electric field
    magnitudes of a solenoid of the given radius.
    """
    return n * math.pi * radius**2 * k.e * (field_m - field_e / (2 * k.alpha)) / k.hbar_c
