"""Consistency checks between the closed forms and the time-domain oracle.

Used by ``eo-bridge verify``. Each check reports its worst residual and
the tolerance it is held to.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import blue, red, timedomain
from .model import SystemParams, derive_rates

#: Absolute tolerance of the algebraic invariants.
INVARIANT_TOL = 1e-10
#: Relative tolerance of time-domain vs closed-form steady states.
ORACLE_TOL = 1e-6
#: Tolerance of time-domain vs partial-fraction transients, relative to the peak output.
TRANSIENT_TOL = 1e-8
#: Relative tolerance of the Lyapunov vs quadrature flux comparison.
FLUX_TOL = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float
    kind: str = "invariant"

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<34s} residual={self.residual:.3e}  tol={self.tol:.0e}"


def detuning_grid(p: SystemParams, num=21):
    return np.linspace(-3.0, 3.0, num) * p.max_rate


def pole_match_residual(eigenvalues, pole_pair):
    """Largest distance between two eigenvalues and two poles under the best pairing."""
    (l1, l2), (q1, q2) = eigenvalues, pole_pair
    return min(max(abs(l1 - q1), abs(l2 - q2)), max(abs(l1 - q2), abs(l2 - q1)))


def _eigen_residual(p, sideband):
    lam = timedomain.drift_matrix(p, sideband).eigenvalues()
    if sideband == "red":
        ps = red.poles(p)
        ref = (ps.p_plus, ps.p_minus)
    else:
        bp = blue.blue_poles(p)
        ref = (bp.pi_plus, bp.pi_minus)
    return pole_match_residual(lam, ref) / p.max_rate


def _oracle_residual(p, sideband, omegas):
    matrix = red.smatrix_at if sideband == "red" else blue.blue_smatrix_at
    worst = 0.0
    for w in omegas:
        S = matrix(p, -1j * w)
        for j, port in enumerate(("A", "B")):
            ratio = timedomain.steady_state_ratio(p, sideband, port, w)
            ref = S[:, j]
            worst = max(worst, float(np.max(np.abs(ratio - ref)) / np.max(np.abs(ref))))
    return worst


def red_checks(p: SystemParams, oracle=True):
    omegas = detuning_grid(p)
    rates = derive_rates(p)
    rot = p.with_g_alpha(p.g_alpha * cmath.exp(0.7j))
    out = [
        CheckResult("drift eigenvalues = poles", _eigen_residual(p, "red"), 1e-12),
        CheckResult(
            "S rows orthonormal",
            max(red.scattering_matrix(p, w).unitarity_residual() for w in omegas),
            INVARIANT_TOL,
        ),
        CheckResult(
            "|S| invariant under pump phase",
            max(float(np.max(np.abs(np.abs(red.scattering_matrix(p, w).s)
                                    - np.abs(red.scattering_matrix(rot, w).s))))
                for w in omegas),
            INVARIANT_TOL,
        ),
        CheckResult(
            "R(w) = R(-w)",
            float(np.max(np.abs(red.conversion_efficiency(p, omegas)[0]
                                - red.conversion_efficiency(p, -omegas)[0]))),
            INVARIANT_TOL,
        ),
        CheckResult(
            "R(0) = 4 eta G0 / (1 + G0)^2",
            abs(red.conversion_efficiency(p, 0.0)[0]
                - 4 * rates.eta * rates.G0 / (1 + rates.G0) ** 2),
            INVARIANT_TOL,
        ),
        CheckResult(
            "vacuum moments vanish",
            max(abs(v) for v in vars(timedomain.lyapunov_steady_state(p, "red")).values()),
            INVARIANT_TOL,
        ),
    ]
    if oracle:
        out.append(CheckResult(
            "time-domain steady state = S",
            _oracle_residual(p, "red", omegas[::5]), ORACLE_TOL, "oracle",
        ))
        run = timedomain.integrate_mean_field(p, "red", a0=1.0, b0=0.5j, record_every=50)
        ref = red.transient_response(p, 1.0, 0.5j, run.t)
        # outputs scale with sqrt(gamma); compare relative to the peak amplitude
        peak = max(np.max(np.abs(ref.A_out)), np.max(np.abs(ref.B_out)))
        err = max(np.max(np.abs(run.A_out - ref.A_out)), np.max(np.abs(run.B_out - ref.B_out)))
        out.append(CheckResult("time-domain transient = F", float(err / peak),
                               TRANSIENT_TOL, "oracle"))
    return out


def blue_checks(p: SystemParams, oracle=True):
    omegas = detuning_grid(p)
    rates = derive_rates(p)
    spectra = blue.noise_spectra(p, omegas)
    out = [
        CheckResult("drift eigenvalues = poles", _eigen_residual(p, "blue"), 1e-12),
        CheckResult(
            "S J_in S^dag = J_out",
            max(blue.blue_scattering_matrix(p, w).symplectic_residual() for w in omegas),
            INVARIANT_TOL,
        ),
        CheckResult(
            "|K|^2 = R^2/eta + R",
            float(np.max(np.abs(np.abs(spectra.K) ** 2 - spectra.R**2 / rates.eta - spectra.R))),
            INVARIANT_TOL,
        ),
        CheckResult(
            "R(0) = 4 eta G0 / (1 - G0)^2",
            abs(blue.idler_gain(p, 0.0) - 4 * rates.eta * rates.G0 / (1 - rates.G0) ** 2),
            INVARIANT_TOL * max(1.0, blue.idler_gain(p, 0.0)),
        ),
    ]
    if oracle:
        out.append(CheckResult(
            "time-domain steady state = S",
            _oracle_residual(p, "blue", omegas[::5]), ORACLE_TOL, "oracle",
        ))
        moments = timedomain.lyapunov_steady_state(p, "blue")
        flux = blue.integrated_flux(p, "b")
        lyap = p.gamma_b * moments.n_b
        out.append(CheckResult(
            "Lyapunov flux = spectral integral",
            abs(lyap - flux) / flux if flux else abs(lyap),
            FLUX_TOL, "oracle",
        ))
    return out


def run_checks(p: SystemParams, sideband: str, oracle=True):
    if sideband == "red":
        return red_checks(p, oracle)
    return blue_checks(p, oracle)


def max_residual(results, kind=None):
    vals = [r.residual for r in results if kind is None or r.kind == kind]
    return max(vals) if vals else math.nan
