"""JSON run configuration for the command-line front end.

Values are stored exactly as written, in the config's ``units``;
conversion to rad/s happens in :meth:`RunConfig.system_params` and the
other accessors, so serializing and re-parsing is lossless.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from .errors import ConfigError, DomainError, GridError
from .model import UNITS, DeviceGeometry, SystemParams, to_angular
from .sweep import SCALES, Grid

SIDEBANDS = ("red", "blue")
FORMATS = ("csv", "json")
AXIS_NAMES = ("G0", "log_ratio")
RATE_KEYS = ("gamma_a", "gamma_a_p", "gamma_b", "gamma_b_p")
DEVICE_KEYS = ("omega_a", "omega_b", "n", "r", "l", "d", "tau", "C")
TOP_KEYS = (
    "description", "units", "sideband", "output_format", *RATE_KEYS,
    "g_alpha", "device", "alpha", "omega", "sweep", "locus", "figure",
)


@dataclass(frozen=True)
class SweepSpec:
    """Detuning axis (normalized ``Omega`` or raw ``omega``) and optional parameter axis."""

    detuning: Grid
    normalized: bool = True
    axis: str | None = None
    axis_grid: Grid | None = None


@dataclass(frozen=True)
class RunConfig:
    gamma_a: float
    gamma_a_p: float
    gamma_b: float
    gamma_b_p: float
    g_alpha: complex | None = None
    device: DeviceGeometry | None = None
    alpha: complex | None = None
    sideband: str = "red"
    units: str = "angular"
    output_format: str = "csv"
    omega: float = 0.0
    sweep: SweepSpec | None = None
    locus: Grid | None = None
    figure_axis: Grid | None = None
    figure_Omega: Grid | None = None
    description: str | None = None

    def rate(self, value):
        return to_angular(value, self.units)

    def system_params(self) -> SystemParams:
        rates = [self.rate(getattr(self, k)) for k in RATE_KEYS]
        if self.g_alpha is not None:
            return SystemParams(*rates, self.rate(self.g_alpha))
        dev = replace(
            self.device,
            omega_a=self.rate(self.device.omega_a),
            omega_b=self.rate(self.device.omega_b),
        )
        return SystemParams.from_device(dev, self.alpha, *rates)

    def omega_angular(self) -> float:
        return self.rate(self.omega)

    def with_units(self, units: str) -> "RunConfig":
        if units not in UNITS:
            raise ConfigError("$.units", f"must be one of {UNITS}")
        return replace(self, units=units)

    def to_dict(self) -> dict:
        out = {"units": self.units, "sideband": self.sideband,
               "output_format": self.output_format}
        if self.description is not None:
            out["description"] = self.description
        for k in RATE_KEYS:
            out[k] = getattr(self, k)
        if self.g_alpha is not None:
            out["g_alpha"] = _complex_out(self.g_alpha)
        else:
            out["device"] = {k: getattr(self.device, k) for k in DEVICE_KEYS}
            out["alpha"] = _complex_out(self.alpha)
        out["omega"] = self.omega
        if self.sweep is not None:
            sw = {("Omega" if self.sweep.normalized else "omega"): self.sweep.detuning.to_dict()}
            if self.sweep.axis is not None:
                sw["axis"] = {"name": self.sweep.axis, **self.sweep.axis_grid.to_dict()}
            out["sweep"] = sw
        if self.locus is not None:
            out["locus"] = self.locus.to_dict()
        fig = {}
        if self.figure_axis is not None:
            fig["axis"] = self.figure_axis.to_dict()
        if self.figure_Omega is not None:
            fig["Omega"] = self.figure_Omega.to_dict()
        if fig:
            out["figure"] = fig
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _complex_out(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _number(data, key, path, default=None, required=True):
    if key not in data:
        if required:
            raise ConfigError(f"{path}.{key}", "missing required number")
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{path}.{key}", "must be finite")
    return float(value)


def _choice(data, key, path, options, default):
    value = data.get(key, default)
    if value not in options:
        raise ConfigError(f"{path}.{key}", f"must be one of {options}, got {value!r}")
    return value


def _object(value, path):
    if not isinstance(value, dict):
        raise ConfigError(path, "expected an object")
    return value


def _check_keys(data, allowed, path):
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}", "unknown key")


def _complex(data, path):
    data = _object(data, path)
    _check_keys(data, ("re", "im"), path)
    return complex(_number(data, "re", path), _number(data, "im", path, 0.0, required=False))


def _grid(data, path, extra=()):
    data = _object(data, path)
    _check_keys(data, ("start", "stop", "num", "scale", *extra), path)
    num = data.get("num")
    if isinstance(num, bool) or not isinstance(num, int):
        raise ConfigError(f"{path}.num", f"expected an integer, got {num!r}")
    try:
        return Grid(
            _number(data, "start", path), _number(data, "stop", path), num,
            _choice(data, "scale", path, SCALES, "linear"),
        )
    except GridError as exc:
        raise ConfigError(path, str(exc)) from None


def _sweep(data, path):
    data = _object(data, path)
    _check_keys(data, ("Omega", "omega", "axis"), path)
    if ("Omega" in data) == ("omega" in data):
        raise ConfigError(path, "give exactly one of 'Omega' (normalized) or 'omega'")
    normalized = "Omega" in data
    key = "Omega" if normalized else "omega"
    detuning = _grid(data[key], f"{path}.{key}")
    axis = axis_grid = None
    if "axis" in data:
        apath = f"{path}.axis"
        adata = _object(data["axis"], apath)
        axis = _choice(adata, "name", apath, AXIS_NAMES, None)
        axis_grid = _grid(adata, apath, extra=("name",))
    return SweepSpec(detuning, normalized, axis, axis_grid)


def parse_config(data: dict) -> RunConfig:
    """Validate a decoded JSON object; errors carry a JSON path."""
    data = _object(data, "$")
    _check_keys(data, TOP_KEYS, "$")
    rates = {k: _number(data, k, "$") for k in RATE_KEYS}
    has_g = "g_alpha" in data
    has_dev = "device" in data or "alpha" in data
    if has_g == has_dev:
        raise ConfigError("$", "give either 'g_alpha' or both 'device' and 'alpha'")
    g_alpha = device = alpha = None
    if has_g:
        g_alpha = _complex(data["g_alpha"], "$.g_alpha")
    else:
        if "device" not in data or "alpha" not in data:
            raise ConfigError("$", "'device' and 'alpha' must be given together")
        ddata = _object(data["device"], "$.device")
        _check_keys(ddata, DEVICE_KEYS, "$.device")
        fields = {k: _number(ddata, k, "$.device") for k in DEVICE_KEYS}
        try:
            device = DeviceGeometry(**fields)
        except DomainError as exc:
            raise ConfigError(f"$.device.{exc.field}", str(exc)) from None
        alpha = _complex(data["alpha"], "$.alpha")
    description = data.get("description")
    if description is not None and not isinstance(description, str):
        raise ConfigError("$.description", "expected a string")
    fig = _object(data.get("figure", {}), "$.figure")
    _check_keys(fig, ("axis", "Omega"), "$.figure")
    cfg = RunConfig(
        **rates,
        g_alpha=g_alpha,
        device=device,
        alpha=alpha,
        sideband=_choice(data, "sideband", "$", SIDEBANDS, "red"),
        units=_choice(data, "units", "$", UNITS, "angular"),
        output_format=_choice(data, "output_format", "$", FORMATS, "csv"),
        omega=_number(data, "omega", "$", 0.0, required=False),
        sweep=_sweep(data["sweep"], "$.sweep") if "sweep" in data else None,
        locus=_grid(data["locus"], "$.locus") if "locus" in data else None,
        figure_axis=_grid(fig["axis"], "$.figure.axis") if "axis" in fig else None,
        figure_Omega=_grid(fig["Omega"], "$.figure.Omega") if "Omega" in fig else None,
        description=description,
    )
    try:
        cfg.system_params()
    except DomainError as exc:
        raise ConfigError(f"$.{exc.field}", str(exc)) from None
    return cfg


def loads(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from None
    return parse_config(data)


def load(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
