"""Deterministic invariant suites shared by the ``verify`` subcommand and the acceptance tests.

Every check takes a seeded generator (or none), runs a fixed number of cases
in index order and returns a :class:`CheckResult`. Wall-clock time is never
part of a result so repeated runs are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import duality, dynamics, interference, paths, poisson, ring
from .core import DyonCharge, PhysicalConstants, Position, SolenoidConfig
from .fields import verify_maxwell_integral

WINDINGS = (-2, -1, 1, 2, 3)
ALPHAS = (0.0, 0.25, 0.5, 0.9)
DELTAS = (0.05, 0.1, 0.2, 0.5)
TIME_STEPS = (0.01, 0.005, 0.0025)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tol: float
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "residual": self.residual,
                "tol": self.tol, **self.details}


def _random_frame(rng, charge=5.0, flux=10.0):
    q, g = rng.uniform(-charge, charge, 2)
    fe, fm = rng.uniform(-flux, flux, 2)
    return DyonCharge(float(q), float(g)), float(fe), float(fm)


def check_phase_closed_form(rng, n_cases: int = 200, k=PhysicalConstants()) -> CheckResult:
    """Quadrature phase on random enclosing paths against ``n (q Phi_m - g Phi_e)``."""
    worst = 0.0
    for i in range(n_cases):
        d, fe, fm = _random_frame(rng)
        radius = float(rng.uniform(0.5, 2.0))
        s = SolenoidConfig(radius, fe, fm)
        n = WINDINGS[i % len(WINDINGS)]
        path = paths.random_enclosing_path(rng, radius, n, polygonal=bool(i % 2))
        circ_a, circ_c = paths.potential_circulations(s, path)
        phase = (d.q * circ_a + d.g * circ_c) / k.hbar_c
        exact = paths.expected_phase(d, s, n, k)
        winding = paths.winding_number(path)
        if winding != n:
            return CheckResult("phase_closed_form", False, math.inf, 1e-8,
                               {"case": i, "winding": winding, "expected_winding": n})
        worst = max(worst, abs(phase - exact) / abs(exact))
    return CheckResult("phase_closed_form", worst < 1e-8, worst, 1e-8, {"cases": n_cases})


def check_topological_dichotomy(rng, n_cases: int = 100, k=PhysicalConstants()) -> CheckResult:
    worst = 0.0
    for i in range(n_cases):
        d, fe, fm = _random_frame(rng)
        s = SolenoidConfig(float(rng.uniform(0.5, 2.0)), fe, fm)
        path = paths.random_non_enclosing_path(rng, s.radius, polygonal=bool(i % 2))
        if paths.winding_number(path) != 0:
            return CheckResult("topological_dichotomy", False, math.inf, 1e-9, {"case": i})
        circ_a, circ_c = paths.potential_circulations(s, path)
        worst = max(worst, abs(d.q * circ_a + d.g * circ_c) / k.hbar_c)
    return CheckResult("topological_dichotomy", worst < 1e-9, worst, 1e-9, {"cases": n_cases})


def check_gauge_invariance(rng, n_cases: int = 100, k=PhysicalConstants()) -> CheckResult:
    worst = 0.0
    for i in range(n_cases):
        d, fe, fm = _random_frame(rng)
        s = SolenoidConfig(1.0, fe, fm)
        n = WINDINGS[i % len(WINDINGS)]
        path = paths.random_enclosing_path(rng, s.radius, n, polygonal=bool(i % 2))
        gauge_a = paths.HarmonicGauge(tuple(rng.uniform(-10, 10, 9)))
        gauge_c = paths.HarmonicGauge(tuple(rng.uniform(-10, 10, 9)))
        base = paths.accumulate_phase(d, s, path, k).phase
        shifted = paths.gauge_shifted_phase(d, s, path, gauge_a, gauge_c, k).phase
        worst = max(worst, abs(shifted - base))
    return CheckResult("gauge_invariance", worst < 1e-8, worst, 1e-8, {"cases": n_cases})


def _rel(a: float, b: float, scale: float) -> float:
    return abs(a - b) / scale if scale > 0 else abs(a - b)


def check_duality_invariance(rng, n_cases: int = 1000, k=PhysicalConstants()) -> CheckResult:
    """Rotation invariants plus the four reductions (zeroed component and phase)."""
    worst_inv = worst_red = 0.0
    for _ in range(n_cases):
        d, fe, fm = _random_frame(rng)
        frame = duality.DualityFrame.of(d, fe, fm)
        theta = float(rng.uniform(-math.pi, math.pi))
        rotated = duality.rotate(frame, theta)
        scale = abs(frame.q * frame.flux_m) + abs(frame.g * frame.flux_e)
        worst_inv = max(worst_inv,
                        _rel(rotated.bilinear, frame.bilinear, scale),
                        _rel(rotated.charge_norm2, frame.charge_norm2, frame.charge_norm2),
                        _rel(rotated.flux_norm2, frame.flux_norm2, frame.flux_norm2))
        before = duality.invariant_phase(frame, 1, k)
        for name, reduce in duality.REDUCTIONS.items():
            _, reduced = reduce(frame)
            zeroed = {"ab_by_charge": reduced.g, "ab_by_flux": reduced.flux_e,
                      "dwf_by_charge": reduced.q, "dwf_by_flux": reduced.flux_m}[name]
            norm = math.sqrt(frame.charge_norm2 if "charge" in name else frame.flux_norm2)
            after = duality.reduced_phase(name, reduced, 1, k)
            worst_red = max(worst_red, abs(zeroed) / norm, _rel(after, before, scale))
    worst = max(worst_inv, worst_red)
    return CheckResult("duality_invariance", worst < 1e-12, worst, 1e-12,
                       {"cases": n_cases, "invariant_residual": worst_inv, "reduction_residual": worst_red})


def check_ab_dwf_limits(rng, n_cases: int = 100, k=PhysicalConstants()) -> CheckResult:
    """Pure-charge frames reduce with zero angle and give the AB/DWF phases bit for bit."""
    mismatches = 0
    for _ in range(n_cases):
        d, fe, fm = _random_frame(rng)
        electric = duality.DualityFrame(d.q, 0.0, fe, fm)
        theta, reduced = duality.reduce_ab_by_charge(electric)
        if theta != 0 or duality.reduced_phase("ab", reduced, 1, k) != duality.ab_phase(d.q, fm, k):
            mismatches += 1
        if duality.invariant_phase(electric, 1, k) != duality.ab_phase(d.q, fm, k):
            mismatches += 1
        magnetic = duality.DualityFrame(0.0, d.g, fe, fm)
        theta, reduced = duality.reduce_dwf_by_charge(magnetic)
        if theta != 0 or duality.reduced_phase("dwf", reduced, 1, k) != duality.dwf_phase(d.g, fe, k):
            mismatches += 1
        if duality.invariant_phase(magnetic, 1, k) != duality.dwf_phase(d.g, fe, k):
            mismatches += 1
    return CheckResult("ab_dwf_limits", mismatches == 0, float(mismatches), 0.0, {"cases": n_cases})


def check_poisson_oracle(s: SolenoidConfig | None = None) -> CheckResult:
    s = SolenoidConfig(1.0, 1.0, 1.0) if s is None else s
    errors, monotone = {}, True
    for which in ("A", "C"):
        prof = poisson.solve_radial_potential(s, which=which)
        errors[f"rel_err_{which}"] = prof.max_rel_error()
        study = [err for _, _, err in poisson.refinement_study(s, which, levels=4)]
        errors[f"refinement_{which}"] = study
        monotone = monotone and all(b < a for a, b in zip(study, study[1:]))
    worst = max(errors["rel_err_A"], errors["rel_err_C"])
    return CheckResult("poisson_oracle", worst < 1e-3 and monotone, worst, 1e-3,
                       {**errors, "monotone": monotone})


def check_ring_spectrum(cfg: ring.RingConfig | None = None, n_grid: int = 2048,
                        n_levels: int = 10) -> CheckResult:
    """Level accuracy for both routes; flow symmetries exact (analytic) and to 1e-8 (twisted FD)."""
    cfg = ring.RingConfig(1.0, 1.0) if cfg is None else cfg
    worst = {}
    for method in ring.METHODS:
        w = 0.0
        for a in ALPHAS:
            c = cfg.with_alpha(a)
            num = ring.fd_eigensystem(c, n_grid, n_levels, method=method)
            ana = ring.analytic_levels(c, n_levels=n_levels).energies
            w = max(w, float(np.max(ring.relative_errors(num, ana, c))))
        worst[method] = w
    analytic_flow = ring.spectral_flow(cfg, ALPHAS, n_levels)
    twisted_flow = ring.spectral_flow(cfg, ALPHAS, n_levels, source="twisted", n_grid=n_grid)
    centred_flow = ring.spectral_flow(cfg, ALPHAS, n_levels, source="centered", n_grid=n_grid)
    accuracy = max(worst.values())
    symmetric = (analytic_flow.periodicity_deviation == 0 and analytic_flow.reflection_deviation == 0
                 and twisted_flow.periodicity_deviation < 1e-8 and twisted_flow.reflection_deviation < 1e-8)
    return CheckResult("ring_spectrum", accuracy < 1e-4 and symmetric, accuracy, 1e-4, {
        "rel_err_centered": worst["centered"],
        "rel_err_twisted": worst["twisted"],
        "analytic_periodicity": analytic_flow.periodicity_deviation,
        "analytic_reflection": analytic_flow.reflection_deviation,
        "twisted_periodicity": twisted_flow.periodicity_deviation,
        "twisted_reflection": twisted_flow.reflection_deviation,
        "centered_periodicity": centred_flow.periodicity_deviation,
        "centered_reflection": centred_flow.reflection_deviation,
    })


def check_interference(geo: interference.TwoSlitGeometry | None = None,
                       lambda_bar: float = 0.05, k=PhysicalConstants()) -> CheckResult:
    geo = interference.TwoSlitGeometry() if geo is None else geo
    p0 = interference.fringe_pattern(geo, 0.0, lambda_bar)
    shift_err = 0.0
    for delta in DELTAS:
        p1 = interference.fringe_pattern(geo, delta, lambda_bar)
        got = interference.extract_shift(p0, p1)
        want = interference.predicted_shift(geo, lambda_bar, delta)
        shift_err = max(shift_err, abs(got - want) / p0.spacing)
    d = DyonCharge(1.0, 0.3)
    s = SolenoidConfig(1.0, 0.5, 2 * math.pi * 0.1)
    diff = interference.path_phase_difference(d, s, geo, k)
    loop = interference.loop_phase(d, s, geo, k)
    phase_err = abs(diff - loop.phase)
    passed = shift_err < 0.01 and phase_err < 1e-8 and loop.winding == 1
    return CheckResult("interference", passed, shift_err, 0.01,
                       {"phase_residual": phase_err, "winding": loop.winding})


def check_dynamics(rng, n_points: int = 1000, k=PhysicalConstants()) -> CheckResult:
    d = DyonCharge(1.0, 0.5)
    s = SolenoidConfig(1.0, 1.0, 2.0)
    worst_force = worst_h = 0.0
    for _ in range(n_points):
        rho = float(rng.uniform(1.05, 10.0))
        phi = float(rng.uniform(-math.pi, math.pi))
        p = Position.from_cylindrical(rho, phi, float(rng.uniform(-5, 5)))
        v = rng.uniform(-0.05, 0.05, 3)
        worst_force = max(worst_force, float(np.max(np.abs(dynamics.generalized_force(d, s, p, v, k)))))
    for i in range(n_points):
        rho = float(rng.uniform(0.05, 0.95) if i % 2 else rng.uniform(1.05, 10.0))
        p = Position.from_cylindrical(rho, float(rng.uniform(-math.pi, math.pi)), float(rng.uniform(-5, 5)))
        st = dynamics.ParticleState(float(rng.uniform(0.5, 2.0)), p, rng.uniform(-0.05, 0.05, 3))
        kinetic = 0.5 * st.mass * float(st.velocity @ st.velocity)
        worst_h = max(worst_h, _rel(dynamics.hamiltonian(d, s, st, k), kinetic, kinetic))
    traj = dynamics.integrate_trajectory(d, s, 1.0, [0.3, 0.1, 0.0], [0.01, 0.02, 0.005], 1e-4, 400, k)
    el = dynamics.euler_lagrange_residual(d, s, traj, "interior", k)
    passed = worst_force == 0 and worst_h < 1e-12 and el.residual < 1e-5
    return CheckResult("dynamics", passed, el.residual, 1e-5,
                       {"max_exterior_force": worst_force, "hamiltonian_residual": worst_h,
                        "identity_residual": el.identity_residual})


def check_translation_symmetry(k=PhysicalConstants()) -> CheckResult:
    d = DyonCharge(1.0, 0.5)
    s = SolenoidConfig(1.0, 1.0, 2.0)
    eps = 1e-4 * s.radius
    directions = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (0.3, -0.5, 0.8))
    ratios, worst = [], 0.0
    for n_hat in directions:
        series = []
        for dt in TIME_STEPS:
            steps = int(round(4.0 / dt))
            traj = dynamics.circular_trajectory(1.0, (0.1, -0.05), 0.4, 0.5, dt, steps, vz=0.01)
            rep = dynamics.translation_symmetry_residual(d, s, traj, eps, n_hat, k)
            series.append(rep.residual / rep.max_abs_lagrangian)
        worst = max(worst, max(series))
        # an axial shift makes K linear in t: no truncation error, nothing to decay
        if n_hat[0] or n_hat[1]:
            ratios += [a / b for a, b in zip(series, series[1:])]
    orders = [math.log2(r) for r in ratios]
    second_order = all(1.8 < o < 2.2 for o in orders)
    return CheckResult("translation_symmetry", worst < 1e-8 and second_order, worst, 1e-8,
                       {"orders": orders})


def check_dirac_scenario(rng, n_cases: int = 100, k=PhysicalConstants()) -> CheckResult:
    nulls = 0
    worst = 0.0
    for _ in range(n_cases):
        f_e = float(rng.uniform(-10, 10))
        f_m = f_e / (2 * k.alpha)
        radius = float(rng.uniform(0.1, 3.0))
        if interference.dirac_scenario(f_m, f_e, radius, 1, k) != 0.0:
            nulls += 1
        f_m = float(rng.uniform(-10, 10))
        n = int(rng.integers(-3, 4))
        got = interference.dirac_scenario(f_m, f_e, radius, n, k)
        # independent route: elementary dyon around the fluxes pi radius^2 times each field
        dyon = DyonCharge(k.e, k.g0)
        want = paths.expected_phase(dyon, SolenoidConfig(radius, math.pi * radius**2 * f_e, math.pi * radius**2 * f_m), n, k)
        scale = abs(n) * math.pi * radius**2 * (abs(k.e * f_m) + abs(k.g0 * f_e))
        worst = max(worst, _rel(got, want, scale))
    return CheckResult("dirac_scenario", nulls == 0 and worst < 1e-12, worst, 1e-12,
                       {"nonzero_nulls": nulls})


def check_maxwell() -> CheckResult:
    s = SolenoidConfig(1.0, 0.7, -1.3)
    worst = 0.0
    for r in (0.3, 0.8, 1.5, 4.0):
        worst = max(worst, verify_maxwell_integral(s, r).max_residual)
    return CheckResult("maxwell_integral", worst < 1e-6, worst, 1e-6)


def check_scenario_path(d: DyonCharge, s: SolenoidConfig, path, k=PhysicalConstants()) -> CheckResult:
    res = paths.accumulate_phase(d, s, path, k)
    exact = paths.expected_phase(d, s, res.winding, k)
    err = abs(res.phase - exact)
    return CheckResult("scenario_path_phase", err < 1e-8 * max(1.0, abs(exact)), err, 1e-8,
                       {"phase": res.phase, "winding": res.winding})


def run_all(seed: int = 0, scale: float = 1.0, k=PhysicalConstants()) -> list[CheckResult]:
    """Full suite. ``scale`` shrinks the randomised case counts (at least one case each)."""
    def count(n):
        return max(1, int(round(n * scale)))

    streams = np.random.SeedSequence(seed).spawn(7)
    rngs = [np.random.default_rng(st) for st in streams]
    return [
        check_maxwell(),
        check_phase_closed_form(rngs[0], count(200), k),
        check_topological_dichotomy(rngs[1], count(100), k),
        check_gauge_invariance(rngs[2], count(100), k),
        check_duality_invariance(rngs[3], count(1000), k),
        check_ab_dwf_limits(rngs[4], count(100), k),
        check_poisson_oracle(),
        check_ring_spectrum(),
        check_interference(k=k),
        check_dynamics(rngs[5], count(1000), k),
        check_translation_symmetry(k),
        check_dirac_scenario(rngs[6], count(100), k),
    ]
