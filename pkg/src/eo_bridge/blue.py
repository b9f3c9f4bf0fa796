"""Blue-sideband pumping: nondegenerate parametric amplification.

With the pump at omega_a + omega_b the optical mode couples to the
conjugate of the microwave mode, so the natural field vector is
(a, b^dagger) and the input-output map is a Bogoliubov transformation.
Its denominator is

    DD(s) = (s + Gamma_a/2)(s + Gamma_b/2) - |g alpha|^2 = (s - pi_+)(s - pi_-),

the red-sideband polynomial with |g alpha|^2 negated. Both poles stay
real; pi_+ reaches the origin at G0 = 1, the oscillation threshold, and
every spectral quantity here refuses to evaluate beyond it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, ThresholdError
from .model import SystemParams, derive_rates
from .red import _characteristic, _real_roots
from .sweep import SweepResult, as_axis

log = logging.getLogger(__name__)

INPUT_PORTS = ("A", "B+", "A'", "B'+")
OUTPUT_PORTS = ("A_out", "B_out+")
J_IN = np.diag([1.0, -1.0, 1.0, -1.0])
J_OUT = np.diag([1.0, -1.0])

#: Largest G0 for which the first-order pair state is reported as valid.
PERTURBATIVE_G0 = 0.01


def at_or_above_threshold(p: SystemParams) -> bool:
    return 4.0 * p.coupling_sq >= p.Gamma_a * p.Gamma_b


def _require_below_threshold(p, what):
    if at_or_above_threshold(p):
        raise ThresholdError(derive_rates(p).G0, what)


@dataclass(frozen=True)
class BluePoleSet:
    pi_plus: float
    pi_minus: float
    above_threshold: bool


def blue_denominator(p: SystemParams, s):
    return _characteristic(p.Gamma_a, p.Gamma_b, -p.coupling_sq, s)


def blue_poles(p: SystemParams) -> BluePoleSet:
    near, far = _real_roots(p.Gamma_a, p.Gamma_b, -p.coupling_sq)
    return BluePoleSet(near, far, at_or_above_threshold(p))


def _pole_product(p: SystemParams, omega):
    """(omega^2 + pi_+^2)(omega^2 + pi_-^2) = |DD(-i omega)|^2."""
    bp = blue_poles(p)
    w2 = np.square(np.asarray(omega, dtype=float))
    return (w2 + bp.pi_plus**2) * (w2 + bp.pi_minus**2)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class BogoliubovMatrix:
    """2x4 map (A_out, B_out^dagger) <- (A, B^dagger, A', B'^dagger)."""

    s: np.ndarray
    omega: float
    sideband: str = "blue"

    def entry(self, out: str, inp: str) -> complex:
        return complex(self.s[OUTPUT_PORTS.index(out), INPUT_PORTS.index(inp)])

    def symplectic_residual(self) -> float:
        """max |S J_in S^dagger - J_out|."""
        return float(np.max(np.abs(self.s @ J_IN @ self.s.conj().T - J_OUT)))


def blue_smatrix_at(p: SystemParams, s: complex) -> np.ndarray:
    """Closed-form Bogoliubov matrix at complex Laplace variable s."""
    ga, gap, gb, gbp = p.gamma_a, p.gamma_a_p, p.gamma_b, p.gamma_b_p
    g = p.g_alpha
    gc = g.conjugate()
    k = p.coupling_sq
    sa, sb = s + 0.5 * p.Gamma_a, s + 0.5 * p.Gamma_b
    num = np.array(
        [
            [(-s + 0.5 * (ga - gap)) * sb + k, 1j * g * math.sqrt(ga * gb),
             math.sqrt(ga * gap) * sb, 1j * g * math.sqrt(ga * gbp)],
            [-1j * gc * math.sqrt(ga * gb), (-s + 0.5 * (gb - gbp)) * sa + k,
             -1j * gc * math.sqrt(gap * gb), math.sqrt(gb * gbp) * sa],
        ],
        dtype=complex,
    )
    return num / blue_denominator(p, s)


def blue_scattering_matrix(p: SystemParams, omega: float) -> BogoliubovMatrix:
    _require_below_threshold(p, "input-output spectra")
    return BogoliubovMatrix(s=blue_smatrix_at(p, -1j * omega), omega=float(omega))


def idler_gain(p: SystemParams, omega):
    """Idler gain |S_BA(-i omega)|^2 = |S_AB(-i omega)|^2."""
    _require_below_threshold(p, "idler gain")
    return _scalar(p.coupling_sq * p.gamma_a * p.gamma_b / _pole_product(p, omega))


@dataclass(frozen=True)
class NoiseSpectra:
    """Output noise densities per unit bandwidth for vacuum inputs.

    ``R`` is the idler gain; ``R_A_p`` and ``R_B_p`` are the extra
    optical and microwave photon fluxes fed by the parasitic channels;
    ``K`` is the phase-sensitive cross-correlation <A_out(w) B_out(-w)>.
    """

    R: np.ndarray
    R_A_p: np.ndarray
    R_B_p: np.ndarray
    K: np.ndarray


def noise_spectra(p: SystemParams, omega) -> NoiseSpectra:
    _require_below_threshold(p, "noise spectra")
    w = np.asarray(omega, dtype=float)
    prod = _pole_product(p, w)
    k = p.coupling_sq
    base = k / prod
    bracket = (1j * w + 0.5 * p.Gamma_a) * (-1j * w + 0.5 * p.Gamma_b) + k
    K = 1j * p.g_alpha * math.sqrt(p.gamma_a * p.gamma_b) / prod * bracket
    return NoiseSpectra(
        R=_scalar(base * p.gamma_a * p.gamma_b),
        R_A_p=_scalar(base * p.gamma_a * p.gamma_b_p),
        R_B_p=_scalar(base * p.gamma_a_p * p.gamma_b),
        K=complex(K) if np.ndim(K) == 0 else K,
    )


def nonclassicality(p: SystemParams, omega):
    """Lambda(omega) = ln(1 + eta / R(omega)).

    Evaluated as ln(1 + |DD|^2 / (|g alpha|^2 Gamma_a Gamma_b)) so that the
    threshold G0 = 1 gives exactly 0 at zero detuning. Zero coupling gives
    +inf (no pairs, nothing to compare against). Refuses G0 > 1.
    """
    if 4.0 * p.coupling_sq > p.Gamma_a * p.Gamma_b:
        raise ThresholdError(derive_rates(p).G0, "nonclassicality")
    denom = p.coupling_sq * p.Gamma_a * p.Gamma_b
    prod = _pole_product(p, omega)
    if denom == 0:
        return _scalar(np.full(np.shape(prod), math.inf))
    with np.errstate(over="ignore"):
        # a tiny coupling can overflow the ratio; log1p(inf) = inf is the right limit
        return _scalar(np.log1p(prod / denom))


def heralding_efficiency(p: SystemParams) -> float:
    """R / (R + R'_A): chance a detected optical photon has its microwave partner."""
    return p.gamma_b / p.Gamma_b


@dataclass(frozen=True)
class PairStateSummary:
    pair_rate_density: np.ndarray
    accidental_a: np.ndarray
    accidental_b: np.ndarray
    heralding_efficiency_b: float


@dataclass(frozen=True)
class PairState:
    """First-order photon-pair state on a detuning grid.

    Row i describes the pair (optical at ``omega[i]``, microwave at
    ``-omega[i]``) with raw amplitude ``amplitude[i]`` = S_AB(-i omega).
    The Fock kets are unnormalized; no normalization is applied.
    """

    omega: np.ndarray
    amplitude: np.ndarray
    summary: PairStateSummary
    G0: float
    perturbative: bool

    def to_sweep(self) -> SweepResult:
        return SweepResult(
            axes={"omega": self.omega},
            values={
                "omega_partner": -self.omega,
                "amplitude_re": self.amplitude.real,
                "amplitude_im": self.amplitude.imag,
                "R": self.summary.pair_rate_density,
                "R_A_p": self.summary.accidental_a,
                "R_B_p": self.summary.accidental_b,
            },
            meta={
                "sideband": "blue",
                "G0": self.G0,
                "perturbative": self.perturbative,
                "heralding_efficiency_b": self.summary.heralding_efficiency_b,
            },
        )


def pair_state(p: SystemParams, omega_grid, perturbative_limit=PERTURBATIVE_G0) -> PairState:
    """Pair amplitudes and rate densities for vacuum inputs.

    Above ``perturbative_limit`` the state is still produced but marked
    ``perturbative=False``.
    """
    _require_below_threshold(p, "pair state")
    w = as_axis(omega_grid)
    G0 = derive_rates(p).G0
    perturbative = G0 <= perturbative_limit
    if not perturbative:
        log.warning("G0=%.3g exceeds the perturbative limit %.3g", G0, perturbative_limit)
    spectra = noise_spectra(p, w)
    amplitude = 1j * p.g_alpha * math.sqrt(p.gamma_a * p.gamma_b) / blue_denominator(p, -1j * w)
    summary = PairStateSummary(
        pair_rate_density=np.asarray(spectra.R),
        accidental_a=np.asarray(spectra.R_A_p),
        accidental_b=np.asarray(spectra.R_B_p),
        heralding_efficiency_b=heralding_efficiency(p),
    )
    return PairState(w, np.asarray(amplitude, dtype=complex), summary, G0, perturbative)


def integrated_flux(p: SystemParams, mode: str = "b") -> float:
    """Total output photon flux of one band, integral of (R + R'_X) d omega / 2 pi.

    ``mode`` is ``"a"`` (optical) or ``"b"`` (microwave). Integrated over
    the whole real line by adaptive quadrature.
    """
    _require_below_threshold(p, "output flux")
    if mode == "a":
        weight = p.gamma_a * p.Gamma_b
    elif mode == "b":
        weight = p.gamma_b * p.Gamma_a
    else:
        raise DomainError("mode", mode, "must be 'a' or 'b'")
    k = p.coupling_sq
    if k == 0:
        return 0.0
    # the density is even in omega: integrate the half line and double
    half, _ = integrate.quad(
        lambda w: k * weight / float(_pole_product(p, w)), 0.0, math.inf,
        epsabs=0.0, epsrel=1e-12, limit=200,
    )
    return 2.0 * half / (2.0 * math.pi)


def root_locus(p: SystemParams, magnitudes) -> SweepResult:
    """Blue poles as |g alpha| runs over ``magnitudes``; both stay on the real axis."""
    mags = as_axis(magnitudes)
    plus = np.empty(mags.size)
    minus = np.empty(mags.size)
    above = np.empty(mags.size, dtype=bool)
    for i, m in enumerate(mags):
        bp = blue_poles(p.with_g_alpha(m))
        plus[i], minus[i], above[i] = bp.pi_plus, bp.pi_minus, bp.above_threshold
    zeros = np.zeros(mags.size)
    return SweepResult(
        axes={"g_alpha_abs": mags},
        values={"re_p_plus": plus, "im_p_plus": zeros, "re_p_minus": minus,
                "im_p_minus": zeros, "above_threshold": above},
        meta={"sideband": "blue", "threshold": math.sqrt(p.Gamma_a * p.Gamma_b) / 2.0},
    )
