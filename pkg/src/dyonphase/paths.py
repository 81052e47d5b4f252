"""Polyline paths, winding numbers and the accumulated dyon phase."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import (
    AXIS_TOL,
    AxisSingularityError,
    DyonCharge,
    InternalConsistencyError,
    ParameterError,
    PathCrossesSolenoidError,
    PhysicalConstants,
    SolenoidConfig,
    UndersampledPathError,
)
from .fields import potentials_array
from .quadrature import integrate_intervals

WINDING_RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class SampledPath:
    """Ordered 3-D polyline. Closed paths get an implicit closing segment."""

    points: np.ndarray
    closed: bool = False
    tolerance: float | None = None

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ParameterError("path points must have shape (N, 3)")
        if pts.shape[0] < (3 if self.closed else 2):
            raise ParameterError("path has too few points")
        if not np.all(np.isfinite(pts)):
            raise ParameterError("path points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.tolerance is None:
            object.__setattr__(self, "tolerance", 1e-9 * max(self.diameter, 1e-300))

    @property
    def diameter(self) -> float:
        return float(np.max(np.ptp(self.points, axis=0)))

    @property
    def closure_gap(self) -> float:
        return float(np.linalg.norm(self.points[-1] - self.points[0]))

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        """Start and end points of every straight segment."""
        pts = self.points
        starts, ends = pts[:-1], pts[1:]
        if self.closed and self.closure_gap >= self.tolerance:
            starts = np.vstack([starts, pts[-1:]])
            ends = np.vstack([ends, pts[:1]])
        return starts, ends

    def reversed(self) -> "SampledPath":
        return SampledPath(self.points[::-1], self.closed, self.tolerance)

    def concatenate(self, other: "SampledPath") -> "SampledPath":
        """Join two closed loops that share their start point into one loop."""
        a = self.points
        if self.closed and self.closure_gap >= self.tolerance:
            a = np.vstack([a, a[:1]])
        return SampledPath(np.vstack([a, other.points]), closed=True)

    @classmethod
    def circle(cls, radius: float, n_points: int = 256, turns: int = 1,
               center=(0.0, 0.0), z: float = 0.0) -> "SampledPath":
        """Circle traversed ``turns`` times; negative turns run clockwise."""
        if turns == 0:
            raise ParameterError("turns must be non-zero")
        total = n_points * abs(turns)
        t = np.arange(total) * (2 * math.pi * np.sign(turns) / n_points)
        pts = np.stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t),
                        np.full_like(t, z)], axis=-1)
        return cls(pts, closed=True)


@dataclass(frozen=True)
class PhaseResult:
    phase: float
    winding: int
    circulation_A: float
    circulation_C: float


@dataclass(frozen=True)
class HarmonicGauge:
    """Single-valued harmonic gauge function from a fixed polynomial basis.

    Basis order: 1, x, y, z, xy, xz, yz, x^2 - y^2, 2z^2 - x^2 - y^2.
    """

    coefficients: tuple = field(default=(0.0,) * 9)

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) != 9:
            raise ParameterError("HarmonicGauge needs exactly 9 coefficients")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_terms(cls, **terms: float) -> "HarmonicGauge":
        names = ["one", "x", "y", "z", "xy", "xz", "yz", "xx_yy", "zz"]
        unknown = set(terms) - set(names)
        if unknown:
            raise ParameterError(f"unknown harmonic terms: {sorted(unknown)}")
        return cls(tuple(terms.get(n, 0.0) for n in names))

    def value(self, xyz):
        xyz = np.asarray(xyz, dtype=float)
        x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
        c = self.coefficients
        return (c[0] + c[1] * x + c[2] * y + c[3] * z + c[4] * x * y + c[5] * x * z
                + c[6] * y * z + c[7] * (x * x - y * y) + c[8] * (2 * z * z - x * x - y * y))

    def gradient(self, xyz):
        xyz = np.asarray(xyz, dtype=float)
        x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
        c = self.coefficients
        gx = c[1] + c[4] * y + c[5] * z + 2 * c[7] * x - 2 * c[8] * x
        gy = c[2] + c[4] * x + c[6] * z - 2 * c[7] * y - 2 * c[8] * y
        gz = c[3] + c[5] * x + c[6] * y + 4 * c[8] * z
        return np.stack([gx, gy, gz], axis=-1)


# --- geometry ---------------------------------------------------------------

def _closest_axis_distance(starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Distance from the z-axis to each segment, measured in the xy-plane."""
    p0 = starts[:, :2]
    d = ends[:, :2] - p0
    dd = np.einsum("ij,ij->i", d, d)
    t = np.where(dd > 0, -np.einsum("ij,ij->i", p0, d) / np.where(dd > 0, dd, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = p0 + t[:, None] * d
    return np.hypot(closest[:, 0], closest[:, 1])


def _segment_angles(starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Signed azimuth swept by each straight segment, in (-pi, pi)."""
    cross = starts[:, 0] * ends[:, 1] - starts[:, 1] * ends[:, 0]
    dot = starts[:, 0] * ends[:, 0] + starts[:, 1] * ends[:, 1]
    return np.arctan2(cross, dot)


def winding_number(path: SampledPath) -> int:
    """Signed number of turns a closed path makes around the z-axis."""
    if not path.closed:
        raise ParameterError("winding number needs a closed path")
    starts, ends = path.segments()
    if np.any(_closest_axis_distance(starts, ends) <= AXIS_TOL * max(1.0, path.diameter)):
        raise AxisSingularityError("path touches the solenoid axis")
    turns = float(np.sum(_segment_angles(starts, ends))) / (2 * math.pi)
    n = round(turns)
    if abs(turns - n) >= WINDING_RESIDUAL_TOL:
        raise UndersampledPathError(
            f"angular sum is {turns!r} turns; path is not closed or is undersampled")
    return int(n)


def check_exterior(s: SolenoidConfig, path: SampledPath) -> None:
    starts, ends = path.segments()
    if np.any(_closest_axis_distance(starts, ends) <= s.radius):
        raise PathCrossesSolenoidError("path enters the solenoid (rho <= R)")


# --- line integrals ---------------------------------------------------------

def _segment_integrals(vector_field, starts, ends, tol):
    delta = ends - starts

    def integrand(idx, t):
        pts = starts[idx] + t[..., None] * delta[idx]
        return np.einsum("...k,...k->...", vector_field(pts), delta[idx])

    values, _ = integrate_intervals(integrand, np.zeros(len(starts)), np.ones(len(starts)), tol=tol)
    return values


def potential_circulations(s: SolenoidConfig, path: SampledPath, tol: float = 1e-12,
                           gauge_a: HarmonicGauge | None = None,
                           gauge_c: HarmonicGauge | None = None) -> tuple[float, float]:
    """Line integrals of A and C (optionally gauge shifted) along the path."""
    check_exterior(s, path)
    starts, ends = path.segments()

    def a_field(pts):
        a = potentials_array(s, pts)[0]
        return a if gauge_a is None else a + gauge_a.gradient(pts)

    def c_field(pts):
        c = potentials_array(s, pts)[1]
        return c if gauge_c is None else c + gauge_c.gradient(pts)

    # per-segment values are summed in index order to keep totals bit-stable
    circ_a = float(np.sum(_segment_integrals(a_field, starts, ends, tol)))
    circ_c = float(np.sum(_segment_integrals(c_field, starts, ends, tol)))
    return circ_a, circ_c


def open_line_integral(d: DyonCharge, s: SolenoidConfig, path: SampledPath,
                       tol: float = 1e-12) -> float:
    """Integral of ``q A + g C`` along the path (no ``1/(hbar c)`` factor)."""
    circ_a, circ_c = potential_circulations(s, path, tol)
    return d.q * circ_a + d.g * circ_c


def expected_phase(d: DyonCharge, s: SolenoidConfig, n: int,
                   k: PhysicalConstants = PhysicalConstants()) -> float:
    return n * (d.q * s.flux_m - d.g * s.flux_e) / k.hbar_c


def _phase_result(d, s, path, k, circ_a, circ_c) -> PhaseResult:
    n = winding_number(path)
    phase = (d.q * circ_a + d.g * circ_c) / k.hbar_c
    expected = expected_phase(d, s, n, k)
    if abs(phase - expected) >= 1e-9 * (1 + abs(phase)):
        raise InternalConsistencyError(
            f"quadrature phase {phase!r} disagrees with winding prediction {expected!r}")
    return PhaseResult(phase, n, circ_a, circ_c)


def accumulate_phase(d: DyonCharge, s: SolenoidConfig, path: SampledPath,
                     k: PhysicalConstants = PhysicalConstants(), tol: float = 1e-12) -> PhaseResult:
    if not path.closed:
        raise ParameterError("accumulate_phase needs a closed path")
    circ_a, circ_c = potential_circulations(s, path, tol)
    return _phase_result(d, s, path, k, circ_a, circ_c)


def gauge_shifted_phase(d: DyonCharge, s: SolenoidConfig, path: SampledPath,
                        gauge_a: HarmonicGauge, gauge_c: HarmonicGauge,
                        k: PhysicalConstants = PhysicalConstants(), tol: float = 1e-12) -> PhaseResult:
    """Phase computed with ``A + grad(gauge_a)`` and ``C + grad(gauge_c)``."""
    if not path.closed:
        raise ParameterError("gauge_shifted_phase needs a closed path")
    circ_a, circ_c = potential_circulations(s, path, tol, gauge_a, gauge_c)
    return _phase_result(d, s, path, k, circ_a, circ_c)


def nonlocality_form(d: DyonCharge, s: SolenoidConfig, n: int,
                     k: PhysicalConstants = PhysicalConstants()) -> float:
    """The same phase written through the confined field strengths."""
    return n * math.pi * s.radius**2 * (d.q * s.field_m - d.g * s.field_e) / k.hbar_c


# --- random test paths ------------------------------------------------------

def random_enclosing_path(rng: np.random.Generator, radius: float, winding: int,
                          polygonal: bool = False) -> SampledPath:
    """Random closed exterior path winding ``winding`` times around the axis."""
    if winding == 0:
        raise ParameterError("use random_non_enclosing_path for winding 0")
    turns = abs(winding)
    sign = 1 if winding > 0 else -1
    if polygonal:
        n_vertices = int(rng.integers(8, 20)) * turns
        gaps = rng.uniform(0.3, 1.0, n_vertices)
        gaps *= 2 * math.pi * turns / gaps.sum()
        while gaps.max() >= math.pi / 3:
            gaps = np.minimum(gaps, 0.9 * math.pi / 3)
            gaps *= 2 * math.pi * turns / gaps.sum()
        phi = sign * np.concatenate([[0.0], np.cumsum(gaps)[:-1]])
        rho = radius * rng.uniform(1.2, 4.0, n_vertices)
        z = rng.uniform(-2.0, 2.0, n_vertices) * radius
    else:
        n_samples = int(rng.integers(96, 200)) * turns
        t = np.arange(n_samples) * (2 * math.pi * turns / n_samples)
        rho = np.full_like(t, 2.5)
        for j in range(1, 4):
            rho += rng.uniform(-0.35, 0.35) * np.cos(j * t / turns + rng.uniform(0, 2 * math.pi))
        rho *= radius
        phi = sign * (t + 0.3 * np.sin(t / turns + rng.uniform(0, 2 * math.pi)) * np.sin(t / 2))
        z = radius * 0.5 * np.sin(t / turns * int(rng.integers(1, 4)) + rng.uniform(0, 2 * math.pi))
    pts = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)
    return SampledPath(pts, closed=True)


def random_non_enclosing_path(rng: np.random.Generator, radius: float,
                              polygonal: bool = False) -> SampledPath:
    """Random closed exterior path that does not encircle the axis."""
    loop = radius * rng.uniform(0.5, 3.0)
    dist = loop * 1.4 + radius * rng.uniform(1.5, 4.0)
    angle = rng.uniform(0, 2 * math.pi)
    centre = dist * np.array([math.cos(angle), math.sin(angle)])
    if polygonal:
        n_vertices = int(rng.integers(5, 16))
        t = np.sort(rng.uniform(0, 2 * math.pi, n_vertices))
        r = loop * rng.uniform(0.5, 1.4, n_vertices)
    else:
        n_vertices = int(rng.integers(64, 160))
        t = np.arange(n_vertices) * (2 * math.pi / n_vertices)
        r = loop * (1 + 0.3 * np.cos(int(rng.integers(2, 6)) * t + rng.uniform(0, 2 * math.pi)))
    if rng.random() < 0.5:
        t = -t
    pts = np.stack([centre[0] + r * np.cos(t), centre[1] + r * np.sin(t),
                    rng.uniform(-1, 1) * radius * np.cos(t)], axis=-1)
    return SampledPath(pts, closed=True)


# --- path files ---------------------------------------------------------------

def read_path_file(path: str | Path) -> SampledPath:
    """Read ``x y z`` lines; a ``#closed`` line marks the path closed, other ``#`` lines are comments."""
    closed = False
    points = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line[1:].strip().lower() == "closed":
                closed = True
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParameterError(f"{path}:{lineno}: expected 'x y z', got {raw!r}")
        try:
            points.append([float(v) for v in parts])
        except ValueError:
            raise ParameterError(f"{path}:{lineno}: non-numeric coordinate in {raw!r}") from None
    return SampledPath(np.array(points, dtype=float).reshape(-1, 3), closed=closed)


def write_path_file(path: str | Path, sampled: SampledPath) -> None:
    lines = ["#closed"] if sampled.closed else []
    lines += [" ".join(f"{v:.17g}" for v in p) for p in sampled.points]
    Path(path).write_text("\n".join(lines) + "\n")
