"""Command-line runner: ``dyonphase <subcommand> --scenario FILE [options]``.

Data goes to stdout (or ``--out``), diagnostics to stderr. Exit status is
0 when everything passes, 1 for input or validation errors and 2 when a
verification fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import dynamics, duality, interference, paths, poisson, ring, verify
from .core import DyonPhaseError, InternalConsistencyError, NumericFailureError, SolenoidConfig
from .scenario import RingSpec, Scenario, load_scenario

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2
HELP = {
    "verify": "run every invariant suite and report residuals",
    "phase": "accumulated phase around the scenario path",
    "spectrum": "ring levels, analytic against finite difference",
    "interference": "two-slit fringe shift",
    "duality": "duality reductions of the scenario frame",
    "oracle": "radial Poisson solve against the closed-form potential",
    "dynamics": "Euler-Lagrange and translation residuals of a trajectory file",
}
SUBCOMMANDS = tuple(HELP)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2, which is reserved for failed checks
        raise UsageError(message)


# --- formatting -----------------------------------------------------------------

def fmt_float(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _json_value(v, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v) if math.isfinite(v) else "null"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, Path):
        return _json_value(str(v), indent, level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f'{inner}{_json_value(str(k), indent, level + 1)}: {_json_value(val, indent, level + 1)}'
                 for k, val in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        if len(v) == 0:
            return "[]"
        if all(isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool) for x in v):
            return "[" + ", ".join(_json_value(x, indent, level + 1) for x in v) + "]"
        return "[\n" + ",\n".join(inner + _json_value(x, indent, level + 1) for x in v) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(v).__name__}")


def to_json(obj) -> str:
    """JSON with every float at 17 significant digits; non-finite values become null."""
    return _json_value(obj, 2, 0) + "\n"


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in columns])
    return buf.getvalue()


def _csv_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_csv_cell(x) for x in v)
    return str(v)


def _diag(msg: str) -> None:
    print(f"dyonphase: {msg}", file=sys.stderr)


# --- subcommands ----------------------------------------------------------------
# Each returns (data_text, status, figure_callback or None).

def cmd_verify(sc: Scenario, fmt: str, seed: int):
    checks = verify.run_all(seed, k=sc.constants)
    if sc.path is not None:
        checks.append(verify.check_scenario_path(sc.dyon, sc.solenoid, _scenario_path(sc), sc.constants))
    ok = all(c.passed for c in checks)
    for c in checks:
        if not c.passed:
            _diag(f"check failed: {c.name} residual={fmt_float(c.residual)} tol={fmt_float(c.tol)}")
    if fmt == "json":
        text = to_json({"seed": seed, "passed": ok, "checks": [c.as_dict() for c in checks]})
    else:
        rows = [{"name": c.name, "passed": c.passed, "residual": c.residual, "tol": c.tol} for c in checks]
        text = to_csv(["name", "passed", "residual", "tol"], rows)
    return text, EXIT_OK if ok else EXIT_FAILED, None


def _scenario_path(sc: Scenario) -> paths.SampledPath:
    spec = sc.path
    if spec is not None and spec.file is not None:
        return paths.read_path_file(spec.file)
    radius = 2.0 * sc.solenoid.radius if spec is None or spec.radius is None else spec.radius
    points = 256 if spec is None else spec.points
    turns = 1 if spec is None else spec.winding
    return paths.SampledPath.circle(radius, points, turns)


def cmd_phase(sc: Scenario, fmt: str, seed: int):
    path = _scenario_path(sc)
    res = paths.accumulate_phase(sc.dyon, sc.solenoid, path, sc.constants)
    summary = {
        "phase": res.phase,
        "winding": res.winding,
        "circulation_A": res.circulation_A,
        "circulation_C": res.circulation_C,
        "expected_phase": paths.expected_phase(sc.dyon, sc.solenoid, res.winding, sc.constants),
        "field_form": paths.nonlocality_form(sc.dyon, sc.solenoid, res.winding, sc.constants),
    }
    text = to_json(summary) if fmt == "json" else to_csv(list(summary), [summary])

    def figure(out):
        from .plotting import plot_path
        plot_path(path.points, sc.solenoid.radius, out, title=f"winding {res.winding}")
    return text, EXIT_OK, figure


def _ring_inputs(sc: Scenario):
    spec = sc.ring or RingSpec()
    b = 2.0 * sc.solenoid.radius if spec.b is None else spec.b
    if spec.alpha_f is not None:
        cfg = ring.RingConfig(b, spec.mass, spec.alpha_f)
    else:
        cfg = ring.RingConfig.from_physical(sc.dyon, sc.solenoid, b, spec.mass, sc.constants)
    if spec.sweep_start is not None or spec.sweep_stop is not None:
        start = cfg.alpha_f if spec.sweep_start is None else spec.sweep_start
        stop = start if spec.sweep_stop is None else spec.sweep_stop
        alphas = np.linspace(start, stop, max(1, spec.sweep_count))
    else:
        alphas = np.array([cfg.alpha_f])
    return spec, cfg, alphas


def cmd_spectrum(sc: Scenario, fmt: str, seed: int):
    spec, cfg, alphas = _ring_inputs(sc)
    k = sc.constants
    rows, ana_curves, fd_curves = [], [], []
    for a in alphas:
        c = cfg.with_alpha(float(a))
        ana = ring.analytic_levels(c, k=k, n_levels=spec.n_levels).energies
        num = ring.fd_eigensystem(c, spec.n_grid, spec.n_levels, k, spec.method)
        err = ring.relative_errors(num, ana, c, k)
        ana_curves.append(ana)
        fd_curves.append(num)
        rows += [{"alpha_f": float(a), "level_index": i, "E_analytic": ana[i], "E_fd": num[i],
                  "rel_err": err[i]} for i in range(spec.n_levels)]
    worst = max(r["rel_err"] for r in rows)
    status = EXIT_OK if worst < 1e-4 else EXIT_FAILED
    if status != EXIT_OK:
        _diag(f"finite-difference levels deviate by {fmt_float(worst)} (tolerance 1e-4)")
    columns = ["alpha_f", "level_index", "E_analytic", "E_fd", "rel_err"]
    if fmt == "json":
        text = to_json({"b": cfg.b, "mass": cfg.mass, "method": spec.method, "n_grid": spec.n_grid,
                        "max_rel_err": worst, "rows": rows})
    else:
        text = to_csv(columns, rows)

    def figure(out):
        from .plotting import plot_spectral_flow
        plot_spectral_flow(alphas, ana_curves, fd_curves, out)
    return text, status, figure


def cmd_interference(sc: Scenario, fmt: str, seed: int):
    spec = sc.interference
    if spec is None:
        from .scenario import InterferenceSpec
        spec = InterferenceSpec()
    geo = interference.TwoSlitGeometry(spec.l, spec.d, spec.source_distance, spec.solenoid_x,
                                       spec.solenoid_y, spec.slit_width)
    if spec.delta is not None:
        delta = spec.delta
    else:
        delta = interference.path_phase_difference(sc.dyon, sc.solenoid, geo, sc.constants)
    p0 = interference.fringe_pattern(geo, 0.0, spec.lambda_bar, spec.n_samples)
    p1 = interference.fringe_pattern(geo, delta, spec.lambda_bar, spec.n_samples)
    extracted = interference.extract_shift(p0, p1)
    predicted = interference.predicted_shift(geo, spec.lambda_bar, delta)
    # shifts are only observable modulo one fringe
    diff = extracted - predicted
    abs_err = abs(diff - p0.spacing * round(diff / p0.spacing))
    rel_err = abs_err / abs(predicted) if predicted != 0 else abs_err
    summary = {"delta": delta, "predicted_shift": predicted, "extracted_shift": extracted,
               "rel_err": rel_err, "fringe_spacing": p0.spacing}
    status = EXIT_OK if abs_err < 0.01 * p0.spacing else EXIT_FAILED
    if status != EXIT_OK:
        _diag(f"extracted shift misses the prediction by {fmt_float(abs_err / p0.spacing)} fringes")
    if fmt == "json":
        text = to_json(summary)
    else:
        rows = [{"x": x, "P0": a, "P_delta": b} for x, a, b in zip(p0.x, p0.intensity, p1.intensity)]
        text = to_csv(["x", "P0", "P_delta"], rows)
        _diag("summary " + " ".join(f"{k}={fmt_float(v)}" for k, v in summary.items()))

    def figure(out):
        from .plotting import plot_fringes
        plot_fringes(p0.x, p0.intensity, p1.intensity, delta, out)
    return text, status, figure


def cmd_duality(sc: Scenario, fmt: str, seed: int):
    primed = duality.DualityFrame.of(sc.dyon, sc.solenoid.flux_e, sc.solenoid.flux_m)
    theta = 0.0 if sc.duality is None else sc.duality.theta
    frame = duality.rotate(primed, theta)
    rows = duality.reduction_table(frame, sc.n, sc.constants)
    scale = abs(sc.n) * (abs(frame.q * frame.flux_m) + abs(frame.g * frame.flux_e)) / sc.constants.hbar_c
    worst = max((abs(r["phase_after"] - r["phase_before"]) for r in rows), default=0.0)
    status = EXIT_OK if worst <= 1e-12 * scale else EXIT_FAILED
    if not rows:
        _diag("every reduction is degenerate for this frame (all charges or fluxes vanish)")
    columns = ["reduction", "theta", "q", "g", "Phi_e", "Phi_m", "phase_before", "phase_after"]
    if fmt == "json":
        text = to_json({"theta": theta, "invariant": frame.bilinear, "reductions": rows})
    else:
        text = to_csv(columns, rows)

    def figure(out):
        from .plotting import plot_reductions
        plot_reductions(rows, out)
    return text, status, figure


def cmd_oracle(sc: Scenario, fmt: str, seed: int):
    spec = sc.oracle
    s = sc.solenoid
    default = poisson.RadialGrid.default(s)
    which = "A" if spec is None else spec.which
    grid = default if spec is None else poisson.RadialGrid(
        default.rho_max if spec.rho_max is None else spec.rho_max, spec.n_points,
        default.sigma if spec.sigma is None else spec.sigma)
    flux = s.flux_m if which == "A" else s.flux_e
    if flux == 0:
        _diag(f"flux for {which} is zero; solving with unit flux instead")
        s = SolenoidConfig(s.radius, 0.0 if which == "A" else 1.0, 1.0 if which == "A" else 0.0)
    prof = poisson.solve_radial_potential(s, grid, which)
    err = prof.max_rel_error()
    status = EXIT_OK if err < 1e-3 else EXIT_FAILED
    if status != EXIT_OK:
        _diag(f"oracle error {fmt_float(err)} exceeds 1e-3")
    if fmt == "json":
        text = to_json({"which": which, "n_points": grid.n_points, "sigma": grid.sigma,
                        "rho_max": grid.rho_max, "max_rel_err": err, "passed": status == EXIT_OK})
    else:
        rows = [{"rho": r, "numeric": a, "analytic": b, "abs_err": e}
                for r, a, b, e in zip(prof.rho, prof.numeric, prof.analytic, prof.abs_err)]
        text = to_csv(["rho", "numeric", "analytic", "abs_err"], rows)
        _diag(f"max_rel_err={fmt_float(err)}")

    def figure(out):
        from .plotting import plot_profile
        plot_profile(prof.rho, prof.numeric, prof.analytic, s.radius, out, label=f"{which}_phi")
    return text, status, figure


def cmd_dynamics(sc: Scenario, fmt: str, seed: int):
    spec = sc.dynamics
    if spec is None or spec.trajectory_file is None:
        raise UsageError("dynamics needs 'trajectory_file' in the scenario")
    traj = dynamics.read_trajectory_csv(spec.trajectory_file, spec.particle_mass)
    el = dynamics.euler_lagrange_residual(sc.dyon, sc.solenoid, traj, None, sc.constants)
    region = dynamics.trajectory_region(sc.solenoid, traj)
    report = {"region": region, "n_checked": el.n_checked,
              "euler_lagrange_residual": el.residual, "identity_residual": el.identity_residual}
    if region == "interior":
        eps = 1e-4 * sc.solenoid.radius if spec.eps is None else spec.eps
        worst = 0.0
        for axis in np.eye(3):
            rep = dynamics.translation_symmetry_residual(sc.dyon, sc.solenoid, traj, eps, axis, sc.constants)
            worst = max(worst, rep.residual)
            report["max_abs_lagrangian"] = rep.max_abs_lagrangian
        report["translation_residual"] = worst
    ok = el.residual < 1e-5
    if "translation_residual" in report:
        ok = ok and report["translation_residual"] < 1e-8 * report["max_abs_lagrangian"]
    if not ok:
        _diag("trajectory fails the Euler-Lagrange or translation check")
    text = to_json(report) if fmt == "json" else to_csv(list(report), [report])

    def figure(out):
        from .plotting import plot_trajectory
        plot_trajectory(traj.positions, sc.solenoid.radius, out)
    return text, EXIT_OK if ok else EXIT_FAILED, figure


COMMANDS = {
    "verify": cmd_verify,
    "phase": cmd_phase,
    "spectrum": cmd_spectrum,
    "interference": cmd_interference,
    "duality": cmd_duality,
    "oracle": cmd_oracle,
    "dynamics": cmd_dynamics,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dyonphase", description="Dyon phase verification runner.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=HELP[name])
        p.add_argument("--scenario", required=True, help="key = value scenario file")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write data here instead of stdout")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--figure", help="also render a figure to this image file")
    return parser


def run(subcommand: str, sc: Scenario, fmt: str = "csv", seed: int | None = None,
        out: str | None = None, figure: str | None = None) -> int:
    """Execute one subcommand on a parsed scenario and return the exit status."""
    if subcommand not in COMMANDS:
        _diag(f"unknown subcommand {subcommand!r}")
        return EXIT_INPUT
    if fmt not in ("csv", "json"):
        _diag(f"unknown format {fmt!r}")
        return EXIT_INPUT
    seed = sc.seed if seed is None else seed
    try:
        text, status, render = COMMANDS[subcommand](sc, fmt, seed)
    except UsageError as exc:
        _diag(f"input error: {exc}")
        return EXIT_INPUT
    except (NumericFailureError, InternalConsistencyError) as exc:
        _diag(f"verification failure: {exc}")
        return EXIT_FAILED
    except (DyonPhaseError, ValueError) as exc:
        _diag(f"input error: {exc}")
        return EXIT_INPUT
    if figure and render is None:
        _diag(f"{subcommand} has no figure; ignoring --figure")
    elif figure:
        render(figure)
        _diag(f"figure written to {figure}")
    if out:
        Path(out).write_text(text)
        return status
    try:
        sys.stdout.write(text)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
    return status


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _diag(f"usage error: {exc}")
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        sc = load_scenario(args.scenario)
    except DyonPhaseError as exc:
        _diag(f"input error: {exc}")
        return EXIT_INPUT
    return run(args.command, sc, args.format, args.seed, args.out, args.figure)


if __name__ == "__main__":
    sys.exit(main())
