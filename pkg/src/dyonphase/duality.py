"""U(1) duality rotations of dyon charges and solenoid fluxes.

A frame bundles ``(q, g)`` and ``(flux_e, flux_m)``. :func:`rotate` maps a
primed frame to the unprimed one,

    q + i g = exp(-i theta) (q' + i g'),
    flux_e + i flux_m = exp(-i theta) (flux_e' + i flux_m'),

which leaves ``q flux_m - g flux_e`` (and therefore the phase) unchanged.
The four reductions pick ``theta`` so that one charge or one flux vanishes.
The surviving component keeps the sign of the primed component it is
built from; only the phase is branch independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DegenerateReductionError, DyonCharge, PhysicalConstants


@dataclass(frozen=True)
class DualityAngle:
    theta: float = 0.0

    @property
    def cos(self) -> float:
        return math.cos(self.theta)

    @property
    def sin(self) -> float:
        return math.sin(self.theta)


@dataclass(frozen=True)
class DualityFrame:
    q: float
    g: float
    flux_e: float
    flux_m: float

    @classmethod
    def of(cls, charges: DyonCharge, flux_e: float, flux_m: float) -> "DualityFrame":
        return cls(charges.q, charges.g, flux_e, flux_m)

    @property
    def charges(self) -> DyonCharge:
        return DyonCharge(self.q, self.g)

    @property
    def fluxes(self) -> tuple[float, float]:
        return self.flux_e, self.flux_m

    @property
    def bilinear(self) -> float:
        """The duality invariant ``q flux_m - g flux_e``."""
        return self.q * self.flux_m - self.g * self.flux_e

    @property
    def charge_norm2(self) -> float:
        return self.q**2 + self.g**2

    @property
    def flux_norm2(self) -> float:
        return self.flux_e**2 + self.flux_m**2

    def as_tuple(self) -> tuple[float, float, float, float]:
        return self.q, self.g, self.flux_e, self.flux_m


def _angle(theta) -> DualityAngle:
    return theta if isinstance(theta, DualityAngle) else DualityAngle(float(theta))


def rotate(frame: DualityFrame, theta) -> DualityFrame:
    """Primed frame -> unprimed frame at duality angle ``theta``."""
    a = _angle(theta)
    c, s = a.cos, a.sin
    return DualityFrame(
        q=frame.q * c + frame.g * s,
        g=-frame.q * s + frame.g * c,
        flux_e=frame.flux_e * c + frame.flux_m * s,
        flux_m=-frame.flux_e * s + frame.flux_m * c,
    )


def inverse_rotate(frame: DualityFrame, theta) -> DualityFrame:
    """Unprimed frame -> primed frame; undoes :func:`rotate`."""
    a = _angle(theta)
    c, s = a.cos, a.sin
    return DualityFrame(
        q=frame.q * c - frame.g * s,
        g=frame.q * s + frame.g * c,
        flux_e=frame.flux_e * c - frame.flux_m * s,
        flux_m=frame.flux_e * s + frame.flux_m * c,
    )


def invariant_phase(frame: DualityFrame, n: int = 1,
                    k: PhysicalConstants = PhysicalConstants()) -> float:
    return n * (frame.q * frame.flux_m - frame.g * frame.flux_e) / k.hbar_c


def ab_phase(q: float, flux_m: float, k: PhysicalConstants = PhysicalConstants()) -> float:
    return q * flux_m / k.hbar_c


def dwf_phase(g: float, flux_e: float, k: PhysicalConstants = PhysicalConstants()) -> float:
    return -g * flux_e / k.hbar_c


def _principal_atan(numerator: float, denominator: float) -> float:
    # atan(numerator / denominator) on (-pi/2, pi/2) without forming the ratio
    sign = 1.0 if denominator > 0 else -1.0
    return math.atan2(sign * numerator, abs(denominator))


def reduce_ab_by_charge(frame: DualityFrame) -> tuple[float, DualityFrame]:
    """Rotate away the magnetic charge: tan(theta) = g'/q'."""
    if frame.q == 0:
        raise DegenerateReductionError("q' = 0: use a DWF reduction instead")
    theta = _principal_atan(frame.g, frame.q)
    return theta, rotate(frame, theta)


def reduce_ab_by_flux(frame: DualityFrame) -> tuple[float, DualityFrame]:
    """Rotate away the electric flux: tan(theta) = -flux_e'/flux_m'."""
    if frame.flux_m == 0:
        raise DegenerateReductionError("flux_m' = 0: use a DWF reduction instead")
    theta = _principal_atan(-frame.flux_e, frame.flux_m)
    return theta, rotate(frame, theta)


def reduce_dwf_by_charge(frame: DualityFrame) -> tuple[float, DualityFrame]:
    """Rotate away the electric charge: cot(theta) = -g'/q'."""
    if frame.g == 0:
        raise DegenerateReductionError("g' = 0: use an AB reduction instead")
    theta = _principal_atan(-frame.q, frame.g)
    return theta, rotate(frame, theta)


def reduce_dwf_by_flux(frame: DualityFrame) -> tuple[float, DualityFrame]:
    """Rotate away the magnetic flux: cot(theta) = flux_e'/flux_m'."""
    if frame.flux_e == 0:
        raise DegenerateReductionError("flux_e' = 0: use an AB reduction instead")
    theta = _principal_atan(frame.flux_m, frame.flux_e)
    return theta, rotate(frame, theta)


REDUCTIONS = {
    "ab_by_charge": reduce_ab_by_charge,
    "ab_by_flux": reduce_ab_by_flux,
    "dwf_by_charge": reduce_dwf_by_charge,
    "dwf_by_flux": reduce_dwf_by_flux,
}


def reduced_phase(name: str, reduced: DualityFrame, n: int = 1,
                  k: PhysicalConstants = PhysicalConstants()) -> float:
    """AB or DWF form of the phase evaluated on a reduced frame."""
    if name.startswith("ab"):
        return n * ab_phase(reduced.q, reduced.flux_m, k)
    return n * dwf_phase(reduced.g, reduced.flux_e, k)


def orthogonality_residual(frame: DualityFrame) -> float:
    """``g' flux_m' + q' flux_e'``; zero when both AB reduction angles coincide."""
    return frame.g * frame.flux_m + frame.q * frame.flux_e


def ab_reinterpretations(q: float, flux_m: float, theta: float,
                         k: PhysicalConstants = PhysicalConstants()) -> tuple[float, float]:
    """The AB phase read as (dyon, pure magnetic flux) and as (charge, mixed fluxes)."""
    q_p, g_p = q * math.cos(theta), q * math.sin(theta)
    fe_p, fm_p = -flux_m * math.sin(theta), flux_m * math.cos(theta)
    dyon_reading = math.copysign(math.hypot(q_p, g_p), q) * flux_m / k.hbar_c
    flux_reading = q * math.copysign(math.hypot(fe_p, fm_p), flux_m) / k.hbar_c
    return dyon_reading, flux_reading


def reduction_table(frame: DualityFrame, n: int = 1,
                    k: PhysicalConstants = PhysicalConstants()) -> list[dict]:
    """One row per applicable reduction: angle, reduced frame, phase before and after."""
    rows = []
    before = invariant_phase(frame, n, k)
    for name, fn in REDUCTIONS.items():
        try:
            theta, reduced = fn(frame)
        except DegenerateReductionError:
            continue
        rows.append({
            "reduction": name,
            "theta": theta,
            "q": reduced.q,
            "g": reduced.g,
            "Phi_e": reduced.flux_e,
            "Phi_m": reduced.flux_m,
            "phase_before": before,
            "phase_after": reduced_phase(name, reduced, n, k),
        })
    return rows
