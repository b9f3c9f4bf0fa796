"""Sweep grids and tabulated results with CSV/JSON serialization."""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridError

SCALES = ("linear", "log")


@dataclass(frozen=True)
class Grid:
    """Evenly spaced axis, linear or logarithmic (base 10)."""

    start: float
    stop: float
    num: int
    scale: str = "linear"

    def __post_init__(self):
        if self.scale not in SCALES:
            raise GridError(f"unknown scale {self.scale!r}; expected one of {SCALES}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise GridError("grid bounds must be finite")
        if int(self.num) != self.num or self.num < 2:
            raise GridError(f"grid needs at least 2 points, got num={self.num!r}")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise GridError("log grid bounds must be positive")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.num)
        return np.linspace(self.start, self.stop, self.num)

    def to_dict(self):
        return {"start": self.start, "stop": self.stop, "num": self.num, "scale": self.scale}


def as_axis(values) -> np.ndarray:
    """Coerce a Grid or array-like into a non-empty 1-D float array."""
    arr = values.values() if isinstance(values, Grid) else np.asarray(values, dtype=float)
    arr = np.atleast_1d(arr)
    if arr.ndim != 1 or arr.size == 0:
        raise GridError("sweep axis is empty")
    return arr


def _fmt(value):
    if isinstance(value, (str, np.str_)):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    return format(float(value), ".17g")


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class SweepResult:
    """Values tabulated on a 1-D or 2-D grid.

    ``values`` arrays have shape ``tuple(len(a) for a in axes.values())``.
    ``overlays`` are curves indexed by the first axis only (e.g. pole
    frequencies drawn on top of a color map); in CSV they are repeated on
    every row that shares the first-axis coordinate.
    """

    axes: dict
    values: dict
    overlays: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise GridError("a sweep has one or two axes")
        shape = tuple(len(v) for v in self.axes.values())
        for name, arr in self.values.items():
            if np.shape(arr) != shape:
                raise GridError(f"{name} has shape {np.shape(arr)}, expected {shape}")
        first = shape[0]
        for name, arr in self.overlays.items():
            if np.shape(arr) != (first,):
                raise GridError(f"overlay {name} must have length {first}")

    @property
    def shape(self):
        return tuple(len(v) for v in self.axes.values())

    def header(self):
        return [*self.axes, *self.values, *self.overlays]

    def rows(self):
        """Rows in stable order: first axis outermost."""
        names = list(self.axes)
        if len(names) == 1:
            for i, x in enumerate(self.axes[names[0]]):
                yield [x, *(v[i] for v in self.values.values()),
                       *(o[i] for o in self.overlays.values())]
        else:
            xs, ys = self.axes[names[0]], self.axes[names[1]]
            for i, x in enumerate(xs):
                for j, y in enumerate(ys):
                    yield [x, y, *(v[i][j] for v in self.values.values()),
                           *(o[i] for o in self.overlays.values())]

    def to_csv(self, fh=None):
        """Write CSV with 17 significant digits and LF line endings."""
        out = io.StringIO() if fh is None else fh
        out.write(",".join(self.header()) + "\n")
        for row in self.rows():
            out.write(",".join(_fmt(v) for v in row) + "\n")
        if fh is None:
            return out.getvalue()

    def to_dict(self):
        return {
            "axes": _jsonable(self.axes),
            "values": _jsonable(self.values),
            "overlays": _jsonable(self.overlays),
            "meta": _jsonable(self.meta),
        }

    def to_json(self, fh=None):
        text = json.dumps(self.to_dict(), indent=1)
        if fh is None:
            return text
        fh.write(text + "\n")


def fwhm(x, y):
    """Full width at half maximum of the peak of ``y`` sampled on ``x``.

    Crossings are located by linear interpolation. A peak that does not
    fall below half maximum inside the sampled range gets width ``inf``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    k = int(np.argmax(y))
    half = 0.5 * y[k]
    left = k
    while left > 0 and y[left - 1] >= half:
        left -= 1
    right = k
    while right < len(y) - 1 and y[right + 1] >= half:
        right += 1
    if left == 0 or right == len(y) - 1:
        return math.inf

    def cross(i_out, i_in):
        y0, y1 = y[i_out], y[i_in]
        return x[i_out] + (half - y0) * (x[i_in] - x[i_out]) / (y1 - y0)

    return cross(right + 1, right) - cross(left - 1, left)
