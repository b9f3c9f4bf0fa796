"""Datasets behind the standard plots (root loci, efficiency, gain, nonclassicality).

Each builder takes base parameters whose decay rates and intrinsic splits
are reused; the pump strength (and for ``fig6`` the decay ratio) is swept.
Default grids:

=====  ===============================================================
fig3   red root locus, |g alpha| / sqrt(Gamma_a Gamma_b) in [0, 2], 201 pts
fig4   R(0)/eta vs G0, log-spaced [1e-2, 1e2], 101 pts
fig5   R/eta over G0 in [0, 10] (121 pts) x Omega in [-6, 6] (241 pts), Gamma_a = Gamma_b
fig6   R/eta over ln(Gamma_b/Gamma_a) in [-3, 3] (121 pts) x Omega, G0 = 1
fig7   blue root locus, same axis as fig3
fig8   idler gain R(0)/eta vs G0, fig4 grid restricted to G0 < 1
fig9   Lambda(0) vs G0, fig4 grid restricted to G0 <= 1
=====  ===============================================================
"""
from __future__ import annotations

import math

import numpy as np

from . import blue, red
from .errors import DomainError
from .model import SystemParams, derive_rates
from .sweep import Grid, SweepResult

FIGURES = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9")

DEFAULT_BASE = SystemParams(1.0, 0.0, 0.25, 0.0, 0.0)

LOCUS_GRID = Grid(0.0, 2.0, 201)
G0_LOG_GRID = Grid(1e-2, 1e2, 101, "log")
G0_LINEAR_GRID = Grid(0.0, 10.0, 121)
LOG_RATIO_GRID = Grid(-3.0, 3.0, 121)
OMEGA_GRID = Grid(-6.0, 6.0, 241)


def _locus(base, axis, module):
    mean = math.sqrt(base.Gamma_a * base.Gamma_b)
    result = module.root_locus(base, axis.values() * mean)
    result.meta["normalization"] = mean
    return result


def _zero_detuning(base, G0s, fn, names):
    values = {name: np.empty(G0s.size) for name in names}
    for i, G0 in enumerate(G0s):
        q = red.with_cooperativity(base, float(G0))
        for name, v in zip(names, fn(q)):
            values[name][i] = v
    return SweepResult(axes={"G0": G0s}, values=values)


def fig4(base, axis=None):
    def point(q):
        R, _ = red.conversion_efficiency(q, 0.0)
        return (R / derive_rates(q).eta,)

    result = _zero_detuning(base, (axis or G0_LOG_GRID).values(), point, ("R0_over_eta",))
    result.meta["sideband"] = "red"
    return result


def fig8(base, axis=None):
    G0s = (axis or G0_LOG_GRID).values()
    G0s = G0s[G0s < 1.0]

    def point(q):
        gain = blue.idler_gain(q, 0.0) / derive_rates(q).eta
        return gain, 10.0 * math.log10(gain) if gain > 0 else -math.inf

    result = _zero_detuning(base, G0s, point, ("R0_over_eta", "R0_over_eta_dB"))
    result.meta["sideband"] = "blue"
    return result


def fig9(base, axis=None):
    G0s = (axis or G0_LOG_GRID).values()
    G0s = G0s[G0s <= 1.0]
    result = _zero_detuning(base, G0s, lambda q: (blue.nonclassicality(q, 0.0),), ("Lambda0",))
    result.meta["sideband"] = "blue"
    return result


def build(fig_id: str, base: SystemParams | None = None, axis: Grid | None = None,
          Omega: Grid | None = None) -> SweepResult:
    """Dataset for ``fig_id``; ``axis`` and ``Omega`` override the default grids."""
    base = DEFAULT_BASE if base is None else base
    if fig_id == "fig3":
        return _locus(base, axis or LOCUS_GRID, red)
    if fig_id == "fig7":
        return _locus(base, axis or LOCUS_GRID, blue)
    if fig_id == "fig4":
        return fig4(base, axis)
    if fig_id == "fig5":
        equal = red.with_log_ratio(base, 0.0)
        return red.efficiency_map(equal, "G0", axis or G0_LINEAR_GRID, Omega or OMEGA_GRID)
    if fig_id == "fig6":
        critical = red.with_cooperativity(base, 1.0)
        return red.efficiency_map(critical, "log_ratio", axis or LOG_RATIO_GRID, Omega or OMEGA_GRID)
    if fig_id == "fig8":
        return fig8(base, axis)
    if fig_id == "fig9":
        return fig9(base, axis)
    raise DomainError("fig", fig_id, f"must be one of {', '.join(FIGURES)}")
