"""Energy levels of a dyon confined to a ring of radius b around the dual solenoid.

Two finite-difference discretisations of the ring Hamiltonian are provided:

* ``"centered"``: ``(-i d/dphi - alpha_f)**2`` expanded as
  ``-D2 + 2 i alpha_f D1 + alpha_f**2`` with centred D1, D2 on the periodic grid;
* ``"twisted"``: the gauge-equivalent free rotor ``-D2`` with the boundary
  twist ``exp(-2 pi i alpha_f)`` on the wrap-around hopping.

Both matrices are periodic tridiagonal and Hermitian. Interleaving the grid
nodes (0, 1, N-1, 2, N-2, ...) makes them pentadiagonal, so the LAPACK banded
Hermitian solver handles them directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eig_banded

from .core import DyonCharge, NumericFailureError, ParameterError, PhysicalConstants, SolenoidConfig

METHODS = ("centered", "twisted")


@dataclass(frozen=True)
class RingConfig:
    b: float
    mass: float = 1.0
    alpha_f: float = 0.0

    def __post_init__(self) -> None:
        if not self.b > 0:
            raise ParameterError("ring radius must be positive")
        if not self.mass > 0:
            raise ParameterError("mass must be positive")
        if not math.isfinite(self.alpha_f):
            raise ParameterError("alpha_f must be finite")

    @classmethod
    def from_physical(cls, d: DyonCharge, s: SolenoidConfig, b: float, mass: float = 1.0,
                      k: PhysicalConstants = PhysicalConstants()) -> "RingConfig":
        if not b > s.radius:
            raise ParameterError("ring must lie outside the solenoid (b > R)")
        return cls(b, mass, flux_parameter(d, s, k))

    def energy_unit(self, k: PhysicalConstants = PhysicalConstants()) -> float:
        return k.hbar**2 / (2 * self.mass * self.b**2)

    def with_alpha(self, alpha_f: float) -> "RingConfig":
        return RingConfig(self.b, self.mass, alpha_f)


@dataclass(frozen=True)
class RingSpectrum:
    levels: list  # [(ell, energy), ...] ascending in energy
    source: str

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for _, e in self.levels])


def flux_parameter(d: DyonCharge, s: SolenoidConfig,
                   k: PhysicalConstants = PhysicalConstants()) -> float:
    return (d.q * s.flux_m - d.g * s.flux_e) / (2 * math.pi * k.hbar_c)


def level_energy(cfg: RingConfig, ell, k: PhysicalConstants = PhysicalConstants()):
    return cfg.energy_unit(k) * (np.asarray(ell, dtype=float) - cfg.alpha_f) ** 2


def analytic_levels(cfg: RingConfig, ell_range: tuple[int, int] | None = None,
                    k: PhysicalConstants = PhysicalConstants(), n_levels: int | None = None) -> RingSpectrum:
    """Levels for ``ell`` in the inclusive ``ell_range``.

    Without a range, the ``n_levels`` (default 10) lowest levels are returned.
    """
    if ell_range is None:
        count = 10 if n_levels is None else n_levels
        centre = math.floor(cfg.alpha_f)
        ells = np.arange(centre - count, centre + count + 2)
    else:
        lo, hi = ell_range
        ells = np.arange(int(lo), int(hi) + 1)
    energies = level_energy(cfg, ells, k)
    order = np.lexsort((ells, energies))
    levels = [(int(ells[i]), float(energies[i])) for i in order]
    if ell_range is None:
        levels = levels[:count]
    return RingSpectrum(levels, "analytic")


def eigenfunction(ell: int, phi, b: float):
    """Normalised ring eigenfunction ``exp(i ell phi) / sqrt(2 pi b)``."""
    return np.exp(1j * ell * np.asarray(phi)) / math.sqrt(2 * math.pi * b)


def interleaved_order(n: int) -> np.ndarray:
    order = np.empty(n, dtype=int)
    order[0] = 0
    order[1::2] = np.arange(1, (n + 1) // 2 + (n % 2 == 0))[: len(order[1::2])]
    order[2::2] = np.arange(n - 1, 0, -1)[: len(order[2::2])]
    return order


def _periodic_band(diag: np.ndarray, upper: np.ndarray, corner: complex):
    """Pentadiagonal upper band storage of a periodic tridiagonal Hermitian matrix.

    ``upper[j] = H[j, j+1]`` for j < n-1 and ``corner = H[n-1, 0]``.
    """
    n = diag.size
    order = interleaved_order(n)
    pos = np.empty(n, dtype=int)
    pos[order] = np.arange(n)
    band = np.zeros((3, n), dtype=complex)
    band[2] = diag[order]
    hops = [(j, j + 1, upper[j]) for j in range(n - 1)] + [(n - 1, 0, corner)]
    for i, j, val in hops:
        pi, pj = pos[i], pos[j]
        # band storage keeps row < column: a[u + r - c, c] = H[r, c] with u = 2
        if pi < pj:
            band[2 + pi - pj, pj] = val
        else:
            band[2 + pj - pi, pi] = np.conj(val)
    return band, order


def ring_matrix_bands(cfg: RingConfig, n_grid: int, method: str = "centered"):
    """Diagonal, superdiagonal and wrap-around entry in units of hbar^2/(2 m b^2)."""
    h = 2 * math.pi / n_grid
    a = cfg.alpha_f
    if method == "centered":
        diag = np.full(n_grid, 2 / h**2 + a * a)
        hop = -1 / h**2 + 1j * a / h
        return diag, np.full(n_grid - 1, hop, dtype=complex), hop
    if method == "twisted":
        diag = np.full(n_grid, 2 / h**2)
        hop = -1 / h**2 + 0j
        corner = -np.exp(-2j * math.pi * a) / h**2
        return diag, np.full(n_grid - 1, hop, dtype=complex), corner
    raise ParameterError(f"method must be one of {METHODS}")


def ring_matrix(cfg: RingConfig, n_grid: int, method: str = "centered") -> np.ndarray:
    """Dense form of the discretised Hamiltonian (for inspection and small checks)."""
    diag, upper, corner = ring_matrix_bands(cfg, n_grid, method)
    mat = np.diag(diag).astype(complex)
    idx = np.arange(n_grid - 1)
    mat[idx, idx + 1] = upper
    mat[idx + 1, idx] = np.conj(upper)
    mat[n_grid - 1, 0] = corner
    mat[0, n_grid - 1] = np.conj(corner)
    return mat


def fd_eigensystem(cfg: RingConfig, n_grid: int = 2048, n_levels: int = 10,
                   k: PhysicalConstants = PhysicalConstants(), method: str = "centered",
                   vectors: bool = False):
    """Lowest ``n_levels`` eigenvalues, plus grid eigenvectors (columns) when ``vectors``.

    Eigenvectors cost O(n_grid**2); leave them off for large grids.
    """
    if n_grid < 64 or n_grid % 2:
        raise ParameterError("n_grid must be even and at least 64")
    if not 1 <= n_levels <= n_grid // 4:
        raise ParameterError("n_levels must lie in [1, n_grid/4]")
    diag, upper, corner = ring_matrix_bands(cfg, n_grid, method)
    band, order = _periodic_band(diag, upper, corner)
    try:
        out = eig_banded(band, lower=False, eigvals_only=not vectors, select="i",
                         select_range=(0, n_levels - 1))
    except (LinAlgError, ValueError) as exc:
        raise NumericFailureError(f"banded Hermitian eigen-solve failed: {exc}") from exc
    if not vectors:
        return cfg.energy_unit(k) * out
    w, v = out
    natural = np.empty_like(v)
    natural[order] = v
    return cfg.energy_unit(k) * w, natural


def dominant_mode(vec: np.ndarray, alpha_f: float = 0.0, method: str = "centered") -> int:
    """Angular momentum carrying the largest Fourier weight of a grid eigenvector."""
    n = vec.size
    if method == "twisted":
        # undo the gauge twist so the mode is read off in the original gauge
        phi = 2 * math.pi * np.arange(n) / n
        vec = vec * np.exp(1j * alpha_f * phi)
    spectrum = np.abs(np.fft.fft(vec))
    mode = int(np.argmax(spectrum))
    return mode - n if mode > n // 2 else mode


def fd_levels(cfg: RingConfig, n_grid: int = 2048, n_levels: int = 10,
              k: PhysicalConstants = PhysicalConstants(), method: str = "centered") -> RingSpectrum:
    """Finite-difference levels; entries are ``(level_index, energy)``.

    Degenerate pairs make angular-momentum labels ill defined on the grid,
    so levels are indexed by position in the sorted spectrum.
    """
    energies = fd_eigensystem(cfg, n_grid, n_levels, k, method)
    return RingSpectrum([(i, float(e)) for i, e in enumerate(energies)], f"finite-difference/{method}")


def relative_errors(numeric: np.ndarray, analytic: np.ndarray, cfg: RingConfig,
                    k: PhysicalConstants = PhysicalConstants()) -> np.ndarray:
    """Errors relative to ``max(|E|, hbar^2/(2 m b^2))`` so the zero level stays well defined."""
    scale = np.maximum(np.abs(analytic), cfg.energy_unit(k))
    return np.abs(np.asarray(numeric) - np.asarray(analytic)) / scale


@dataclass(frozen=True)
class SpectralFlow:
    alphas: np.ndarray
    levels: np.ndarray  # shape (len(alphas), n_levels)
    periodicity_deviation: float
    reflection_deviation: float
    source: str


def _level_set(cfg: RingConfig, n_levels: int, k, source: str, n_grid: int) -> np.ndarray:
    if source == "analytic":
        return analytic_levels(cfg, k=k, n_levels=n_levels).energies
    return fd_eigensystem(cfg, n_grid, n_levels, k, source)


def spectral_flow(cfg: RingConfig, alphas, n_levels: int = 6,
                  k: PhysicalConstants = PhysicalConstants(), source: str = "analytic",
                  n_grid: int = 512) -> SpectralFlow:
    """Sorted level curves over an alpha_f sweep plus the period-1 and reflection checks.

    Deviations are maximum absolute differences between the level sets at
    ``alpha``, ``alpha + 1`` and ``-alpha``, in units of ``hbar^2/(2 m b^2)``.
    Sweep values are snapped to ``(alpha + 1) - 1`` so that ``alpha + 1`` is
    exact; the analytic deviations are then identically zero.
    """
    alphas = np.asarray(alphas, dtype=float)
    if not np.all(np.isfinite(alphas)):
        raise ParameterError("sweep values must be finite")
    alphas = (alphas + 1.0) - 1.0
    unit = cfg.energy_unit(k)
    rows, per, refl = [], 0.0, 0.0
    for a in alphas:
        base = _level_set(cfg.with_alpha(a), n_levels, k, source, n_grid)
        shifted = _level_set(cfg.with_alpha(a + 1.0), n_levels, k, source, n_grid)
        mirrored = _level_set(cfg.with_alpha(-a), n_levels, k, source, n_grid)
        per = max(per, float(np.max(np.abs(shifted - base))) / unit)
        refl = max(refl, float(np.max(np.abs(mirrored - base))) / unit)
        rows.append(base)
    return SpectralFlow(alphas, np.array(rows), per, refl, source)
