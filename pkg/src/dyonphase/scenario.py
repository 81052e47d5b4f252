"""Flat ``key = value`` scenario files.

Blank lines and ``#`` comments are ignored. Keys are grouped into optional
blocks (ring, interference, duality, oracle, dynamics); a block exists as
soon as one of its keys appears. File paths resolve against ``base_dir``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .core import DyonCharge, ParameterError, PhysicalConstants, SolenoidConfig


class ScenarioError(ParameterError):
    """Malformed or inconsistent scenario input."""


FLOAT, INT, TEXT, PATH = "float", "int", "text", "path"

CORE_KEYS = {
    "hbar": FLOAT, "c": FLOAT, "alpha": FLOAT, "e": FLOAT,
    "q": FLOAT, "g": FLOAT, "Phi_e": FLOAT, "Phi_m": FLOAT, "R": FLOAT,
    "n": INT, "seed": INT,
}
BLOCK_KEYS = {
    "path": {"path_file": PATH, "path_radius": FLOAT, "path_points": INT, "path_winding": INT},
    "ring": {"b": FLOAT, "mass": FLOAT, "alpha_f": FLOAT, "n_grid": INT, "n_levels": INT,
             "method": TEXT, "sweep_start": FLOAT, "sweep_stop": FLOAT, "sweep_count": INT},
    "interference": {"l": FLOAT, "d": FLOAT, "lambda_bar": FLOAT, "source_distance": FLOAT,
                     "solenoid_x": FLOAT, "solenoid_y": FLOAT, "slit_width": FLOAT,
                     "delta": FLOAT, "n_samples": INT},
    "duality": {"theta": FLOAT},
    "oracle": {"rho_max": FLOAT, "n_points": INT, "sigma": FLOAT, "which": TEXT},
    "dynamics": {"trajectory_file": PATH, "particle_mass": FLOAT, "eps": FLOAT},
}
KEY_TYPES = dict(CORE_KEYS)
for _block in BLOCK_KEYS.values():
    KEY_TYPES.update(_block)


@dataclass(frozen=True)
class PathSpec:
    file: Path | None = None
    radius: float | None = None
    points: int = 256
    winding: int = 1


@dataclass(frozen=True)
class RingSpec:
    b: float | None = None
    mass: float = 1.0
    alpha_f: float | None = None
    n_grid: int = 2048
    n_levels: int = 10
    method: str = "centered"
    sweep_start: float | None = None
    sweep_stop: float | None = None
    sweep_count: int = 1


@dataclass(frozen=True)
class InterferenceSpec:
    l: float = 1000.0
    d: float = 10.0
    lambda_bar: float = 0.05
    source_distance: float = 500.0
    solenoid_x: float | None = None
    solenoid_y: float = 0.0
    slit_width: float | None = None
    delta: float | None = None
    n_samples: int = 2001


@dataclass(frozen=True)
class DualitySpec:
    theta: float = 0.0


@dataclass(frozen=True)
class OracleSpec:
    rho_max: float | None = None
    n_points: int = 4096
    sigma: float | None = None
    which: str = "A"


@dataclass(frozen=True)
class DynamicsSpec:
    trajectory_file: Path | None = None
    particle_mass: float = 1.0
    eps: float | None = None


@dataclass(frozen=True)
class Scenario:
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    dyon: DyonCharge = field(default_factory=lambda: DyonCharge(0.0, 0.0))
    solenoid: SolenoidConfig = field(default_factory=SolenoidConfig)
    n: int = 1
    seed: int = 0
    path: PathSpec | None = None
    ring: RingSpec | None = None
    interference: InterferenceSpec | None = None
    duality: DualitySpec | None = None
    oracle: OracleSpec | None = None
    dynamics: DynamicsSpec | None = None


def _convert(key: str, raw: str, lineno: int, base_dir: Path):
    kind = KEY_TYPES[key]
    if kind == TEXT:
        return raw
    if kind == PATH:
        p = Path(raw)
        p = p if p.is_absolute() else base_dir / p
        if not p.is_file():
            raise ScenarioError(f"line {lineno}: {key}: file not found: {p}")
        return p
    try:
        value = int(raw) if kind == INT else float(raw)
    except ValueError:
        raise ScenarioError(f"line {lineno}: {key}: expected {kind}, got {raw!r}") from None
    if kind == FLOAT and not math.isfinite(value):
        raise ScenarioError(f"line {lineno}: {key}: value must be finite")
    return value


def _tokenise(text: str, base_dir: Path) -> dict:
    values, seen, unknown = {}, {}, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ScenarioError(f"line {lineno}: empty key or value in {raw.strip()!r}")
        if key not in KEY_TYPES:
            unknown.append(f"{key} (line {lineno})")
            continue
        converted = _convert(key, value, lineno, base_dir)
        if key in values and values[key] != converted:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r} conflicts with line {seen[key]}")
        values[key] = converted
        seen.setdefault(key, lineno)
    if unknown:
        raise ScenarioError("unknown keys: " + ", ".join(unknown))
    return values


def _block(values: dict, name: str, cls):
    keys = BLOCK_KEYS[name]
    present = {k: values[k] for k in keys if k in values}
    if not present:
        return None
    rename = {"path_file": "file", "path_radius": "radius", "path_points": "points",
              "path_winding": "winding"}
    return cls(**{rename.get(k, k): v for k, v in present.items()})


def parse_scenario(text: str, base_dir: str | Path = ".") -> Scenario:
    values = _tokenise(text, Path(base_dir))
    try:
        k = PhysicalConstants(**{key: values[key] for key in ("hbar", "c", "alpha", "e") if key in values})
        dyon = DyonCharge(values.get("q", 0.0), values.get("g", 0.0))
        solenoid = SolenoidConfig(values.get("R", 1.0), values.get("Phi_e", 0.0), values.get("Phi_m", 0.0))
    except ParameterError as exc:
        raise ScenarioError(str(exc)) from exc
    path = _block(values, "path", PathSpec)
    if path is not None and path.file is not None and path.radius is not None:
        raise ScenarioError("give either path_file or path_radius, not both")
    ring = _block(values, "ring", RingSpec)
    if ring is not None and ring.method not in ("centered", "twisted"):
        raise ScenarioError(f"method must be 'centered' or 'twisted', got {ring.method!r}")
    oracle = _block(values, "oracle", OracleSpec)
    if oracle is not None and oracle.which not in ("A", "C"):
        raise ScenarioError(f"which must be 'A' or 'C', got {oracle.which!r}")
    return Scenario(
        constants=k, dyon=dyon, solenoid=solenoid,
        n=values.get("n", 1), seed=values.get("seed", 0),
        path=path, ring=ring,
        interference=_block(values, "interference", InterferenceSpec),
        duality=_block(values, "duality", DualitySpec),
        oracle=oracle,
        dynamics=_block(values, "dynamics", DynamicsSpec),
    )


def load_scenario(path: str | Path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {p}: {exc.strerror}") from exc
    return parse_scenario(text, p.parent)
