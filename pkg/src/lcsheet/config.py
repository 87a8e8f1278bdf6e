"""Run configuration: JSON loading, schema validation and defaults."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from . import worldsheet
from .errors import ConfigError, LightconeError
from .expr import evaluate as eval_expr
from .expr import parse_expr
from .fixtures import fixture
from .verify import DEFAULT_TOLERANCES

COMMANDS = ("validate", "curvature", "front", "singular", "verify")
DEFAULT_GRID = {"t": worldsheet.DEFAULT_GRID, "xi": worldsheet.DEFAULT_GRID,
                "verify_t": 5, "verify_xi": 4}


def schema() -> dict:
    text = resources.files("lcsheet").joinpath("data/config.schema.json").read_text()
    return json.loads(text)


@dataclass
class RunConfig:
    spec: worldsheet.WorldSheetSpec
    grid: dict
    tolerances: dict
    out_dir: str = "lcsheet_out"
    formats: tuple = ("csv", "obj")
    command: str | None = None
    raw: dict = field(default_factory=dict)

    def u_counts(self):
        return tuple(self.grid["u"])

    def set_grid(self, axis, count):
        """Apply an ``--grid AXIS=N`` override; ``u`` sets every u-axis."""
        if count < 1:
            raise ConfigError(f"grid count for {axis!r} must be positive")
        s = self.spec.s
        if axis == "u":
            self.grid["u"] = [count] * s
        elif axis.startswith("u") and axis[1:].isdigit() and 1 <= int(axis[1:]) <= s:
            self.grid["u"][int(axis[1:]) - 1] = count
        elif axis in DEFAULT_GRID:
            self.grid[axis] = count
        else:
            names = ["u"] + [f"u{i + 1}" for i in range(s)] + sorted(DEFAULT_GRID)
            raise ConfigError(f"unknown grid axis {axis!r}; expected one of {names}")

    def set_tolerance(self, key, value):
        if key not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance {key!r}; expected one of "
                              f"{sorted(DEFAULT_TOLERANCES)}")
        self.tolerances[key] = value


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path)


def _bound(value, params, where):
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(eval_expr(parse_expr(value, [], params), []))
    except LightconeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def spec_from_dict(ws: dict) -> worldsheet.WorldSheetSpec:
    dims = ws["dims"]
    amb, s, k = dims["ambient"], dims["s"], dims["k"]
    if s + k != amb:
        raise ConfigError(f"dimension mismatch: /worldsheet/dims/s ({s}) + /worldsheet/dims/k "
                          f"({k}) must equal /worldsheet/dims/ambient ({amb})")
    coords = ws["coords"]
    if len(coords) != amb:
        raise ConfigError(f"/worldsheet/coords has {len(coords)} entries but "
                          f"/worldsheet/dims/ambient is {amb}")
    u_dom = ws["domain"]["u"]
    if len(u_dom) != s:
        raise ConfigError(f"/worldsheet/domain/u has {len(u_dom)} intervals, expected s = {s}")
    periodic = ws.get("periodic", [False] * s)
    if len(periodic) != s:
        raise ConfigError(f"/worldsheet/periodic has {len(periodic)} entries, expected s = {s}")
    params = dict(ws.get("parameters", {}))
    u_domain = [(_bound(lo, params, f"/worldsheet/domain/u/{i}/0"),
                 _bound(hi, params, f"/worldsheet/domain/u/{i}/1"))
                for i, (lo, hi) in enumerate(u_dom)]
    t_lo, t_hi = ws["domain"]["t"]
    t_domain = (_bound(t_lo, params, "/worldsheet/domain/t/0"),
                _bound(t_hi, params, "/worldsheet/domain/t/1"))
    try:
        return worldsheet.WorldSheetSpec.from_strings(
            coords, s, u_domain, t_domain, periodic=periodic, params=params,
            name=ws.get("name", "worldsheet"))
    except LightconeError as exc:
        raise ConfigError(f"/worldsheet: {exc}") from None


def parse_config(data: dict) -> RunConfig:
    """Validate a decoded config against the schema and fill in defaults."""
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        msg = "; ".join(f"{_pointer(e.absolute_path)}: {e.message}" for e in errors)
        raise ConfigError(f"config does not match schema: {msg}")
    if "worldsheet" in data:
        spec = spec_from_dict(data["worldsheet"])
    else:
        spec = fixture(data["fixture"])
    grid = dict(DEFAULT_GRID)
    grid.update({k: v for k, v in data.get("grid", {}).items() if k != "u"})
    u = list(data.get("grid", {}).get("u", [worldsheet.DEFAULT_GRID] * spec.s))
    if len(u) != spec.s:
        raise ConfigError(f"/grid/u has {len(u)} counts, expected s = {spec.s}")
    grid["u"] = u
    tol = dict(DEFAULT_TOLERANCES)
    for key, val in data.get("tolerances", {}).items():
        if key not in DEFAULT_TOLERANCES:
            raise ConfigError(f"/tolerances/{key}: unknown tolerance")
        tol[key] = val
    out = data.get("outputs", {})
    return RunConfig(spec, grid, tol, out.get("dir", "lcsheet_out"),
                     tuple(out.get("formats", ("csv", "obj"))), data.get("command"), data)


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
                          f"{exc.msg}") from None
    return parse_config(data)


def fixture_config(name) -> RunConfig:
    spec = fixture(name)
    grid = dict(DEFAULT_GRID)
    grid["u"] = [worldsheet.DEFAULT_GRID] * spec.s
    return RunConfig(spec, grid, dict(DEFAULT_TOLERANCES), raw={"fixture": name})
