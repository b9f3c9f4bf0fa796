"""eo-bridge command-line interface.

    eo-bridge <poles|smatrix|sweep|figure|verify> --config <path>
              [--fig figN] [--out <dir>] [--omega <f>]
              [--units angular|cyclic] [--format csv|json]

Exit codes: 0 success, 1 config error, 2 physics error (threshold or
instability), 3 verification failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys

import numpy as np

from . import blue, checks, figures, red
from .config import load
from .errors import (ConfigError, ConvergenceError, DivergenceError, DomainError,
                     GridError, SingularityError, ThresholdError)
from .model import UNITS, derive_rates
from .sweep import SweepResult

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_VERIFY = 0, 1, 2, 3
COMMANDS = ("poles", "smatrix", "sweep", "figure", "verify")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(
        prog="eo-bridge",
        description="Input-output analysis of a cavity electro-optic modulator.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--fig", help="figure id for the figure command: "
                        + ", ".join(figures.FIGURES))
    parser.add_argument("--out", help="output directory (default: stdout)")
    parser.add_argument("--omega", type=float, help="detuning for smatrix, in config units")
    parser.add_argument("--units", choices=UNITS, help="override the config's units")
    parser.add_argument("--format", choices=("csv", "json"), dest="fmt",
                        help="output format (default: config's output_format)")
    return parser


def _emit(result: SweepResult, name, fmt, out_dir, stdout):
    text = result.to_csv() if fmt == "csv" else result.to_json() + "\n"
    _write(text, f"{name}.{fmt}", out_dir, stdout)


def _write(text, filename, out_dir, stdout):
    if out_dir is None:
        stdout.write(text)
        return
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, filename), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_poles(cfg):
    p = cfg.system_params()
    grid = cfg.locus or figures.LOCUS_GRID
    mags = grid.values() * math.sqrt(p.Gamma_a * p.Gamma_b)
    if cfg.sideband == "red":
        result = red.root_locus(p, mags)
        ps = red.poles(p)
        point = {"p_plus": ps.p_plus, "p_minus": ps.p_minus, "regime": ps.regime.value}
    else:
        result = blue.root_locus(p, mags)
        bp = blue.blue_poles(p)
        point = {"pi_plus": bp.pi_plus, "pi_minus": bp.pi_minus,
                 "above_threshold": bp.above_threshold}
    result.meta["point"] = {"g_alpha_abs": abs(p.g_alpha), **point}
    return result


def cmd_smatrix(cfg, omega=None):
    p = cfg.system_params()
    w = cfg.omega_angular() if omega is None else cfg.rate(omega)
    if cfg.sideband == "red":
        m = red.scattering_matrix(p, w)
        rows, cols = red.OUTPUT_PORTS, red.INPUT_PORTS
    else:
        m = blue.blue_scattering_matrix(p, w)
        rows, cols = blue.OUTPUT_PORTS, blue.INPUT_PORTS
    return {"sideband": cfg.sideband, "omega": w, "rows": list(rows), "cols": list(cols),
            "re": m.s.real.tolist(), "im": m.s.imag.tolist()}


def smatrix_csv(data):
    buf = io.StringIO()
    buf.write("out,in,re,im\n")
    for i, r in enumerate(data["rows"]):
        for j, c in enumerate(data["cols"]):
            buf.write(f"{r},{c},{data['re'][i][j]:.17g},{data['im'][i][j]:.17g}\n")
    return buf.getvalue()


def _spectrum(q, sideband, omegas):
    rates = derive_rates(q)
    if sideband == "red":
        R, T = red.conversion_efficiency(q, omegas)
        return {"R": R, "T": T, "R_over_eta": R / rates.eta}
    spectra = blue.noise_spectra(q, omegas)
    return {
        "R": spectra.R, "R_A_p": spectra.R_A_p, "R_B_p": spectra.R_B_p,
        "K_re": spectra.K.real, "K_im": spectra.K.imag,
        "Lambda": blue.nonclassicality(q, omegas),
    }


def cmd_sweep(cfg):
    if cfg.sweep is None:
        raise ConfigError("$.sweep", "required for the sweep command")
    p = cfg.system_params()
    spec = cfg.sweep
    det = spec.detuning.values()
    det_name = "Omega" if spec.normalized else "omega"

    def omegas_for(q):
        if spec.normalized:
            return red.from_normalized_detuning(det, q.Gamma_a, q.Gamma_b)
        return cfg.rate(det)

    if spec.axis is None:
        return SweepResult(axes={det_name: det}, values=_spectrum(p, cfg.sideband, omegas_for(p)),
                           meta={"sideband": cfg.sideband})
    if cfg.sideband == "red" and spec.normalized:
        return red.efficiency_map(p, spec.axis, spec.axis_grid, det)
    xs = spec.axis_grid.values()
    columns = None
    for i, x in enumerate(xs):
        q = red.AXES[spec.axis](p, float(x))
        row = _spectrum(q, cfg.sideband, omegas_for(q))
        if columns is None:
            columns = {k: np.empty((xs.size, det.size)) for k in row}
        for k, v in row.items():
            columns[k][i] = v
    return SweepResult(axes={spec.axis: xs, det_name: det}, values=columns,
                       meta={"sideband": cfg.sideband})


def cmd_figure(cfg, fig_id):
    if fig_id not in figures.FIGURES:
        raise _UsageError(f"unknown figure {fig_id!r}; valid ids: {', '.join(figures.FIGURES)}")
    base = cfg.system_params() if cfg is not None else None
    axis = cfg.figure_axis if cfg is not None else None
    Omega = cfg.figure_Omega if cfg is not None else None
    return figures.build(fig_id, base, axis, Omega)


def cmd_verify(cfg):
    return checks.run_checks(cfg.system_params(), cfg.sideband)


class _UsageError(Exception):
    pass


def run(args, stdout, stderr) -> int:
    if args.command != "figure" and not args.config:
        raise ConfigError("--config", f"required for the {args.command} command")
    cfg = load(args.config) if args.config else None
    if cfg is not None and args.units:
        cfg = cfg.with_units(args.units)
    fmt = args.fmt or (cfg.output_format if cfg else "csv")

    if args.command == "poles":
        _emit(cmd_poles(cfg), "poles", fmt, args.out, stdout)
    elif args.command == "smatrix":
        data = cmd_smatrix(cfg, args.omega)
        text = smatrix_csv(data) if fmt == "csv" else json.dumps(data, indent=1) + "\n"
        _write(text, f"smatrix.{fmt}", args.out, stdout)
    elif args.command == "sweep":
        _emit(cmd_sweep(cfg), "sweep", fmt, args.out, stdout)
    elif args.command == "figure":
        if not args.fig:
            raise _UsageError(f"--fig is required; valid ids: {', '.join(figures.FIGURES)}")
        _emit(cmd_figure(cfg, args.fig), args.fig, fmt, args.out, stdout)
    else:
        results = cmd_verify(cfg)
        for r in results:
            stdout.write(r.line() + "\n")
        worst = checks.max_residual(results, "invariant")
        ok = all(r.passed for r in results)
        stdout.write(f"{'OK' if ok else 'FAILED'}  max invariant residual={worst:.3e}\n")
        return EXIT_OK if ok else EXIT_VERIFY
    return EXIT_OK


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return run(args, stdout, stderr)
    except (ConfigError, GridError, DomainError, _UsageError, OSError) as exc:
        stderr.write(f"eo-bridge: error: {exc}\n")
        return EXIT_CONFIG
    except (ThresholdError, DivergenceError, ConvergenceError, SingularityError) as exc:
        stderr.write(f"eo-bridge: physics error: {exc}\n")
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
