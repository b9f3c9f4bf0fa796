"""Red-sideband pumping: beam-splitter-like frequency conversion.

With the pump at omega_a - omega_b the optical and microwave resonators
exchange excitations. The traveling fields obey a lossy beam-splitter
relation whose transfer functions share the denominator

    D(s) = (s + Gamma_a/2)(s + Gamma_b/2) + |g alpha|^2 = (s - p_+)(s - p_-).

Spectra follow from s = -i omega, omega being the detuning from the
carriers.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError
from .model import SystemParams, derive_rates
from .sweep import SweepResult, as_axis

INPUT_PORTS = ("A", "B", "A'", "B'")
OUTPUT_PORTS = ("A_out", "B_out")

# |discriminant| below this fraction of (Gamma_a + Gamma_b)^2 counts as degenerate
CRITICAL_TOL = 1e-12


class Regime(str, enum.Enum):
    OVERDAMPED = "overdamped"
    CRITICAL = "critical"
    RABI_SPLIT = "rabi_split"


@dataclass(frozen=True)
class PoleSet:
    p_plus: complex
    p_minus: complex
    regime: Regime


def _characteristic(Gamma_a, Gamma_b, k, s):
    """(s + Gamma_a/2)(s + Gamma_b/2) + k; the blue sideband uses k = -|g alpha|^2."""
    return (s + 0.5 * Gamma_a) * (s + 0.5 * Gamma_b) + k


def _discriminant(Gamma_a, Gamma_b, k):
    return ((Gamma_a - Gamma_b) / 4.0) ** 2 - k


def _real_roots(Gamma_a, Gamma_b, k):
    """Both roots of the characteristic polynomial when they are real.

    The root nearer the origin comes from the product of the roots,
    Gamma_a Gamma_b / 4 + k, which avoids cancellation and makes it
    exactly zero when that product vanishes.
    """
    center = -(Gamma_a + Gamma_b) / 4.0
    far = center - math.sqrt(max(_discriminant(Gamma_a, Gamma_b, k), 0.0))
    near = (0.25 * Gamma_a * Gamma_b + k) / far
    return near, far


def denominator(p: SystemParams, s):
    """D(s) for complex s (scalar or array)."""
    return _characteristic(p.Gamma_a, p.Gamma_b, p.coupling_sq, s)


def poles(p: SystemParams) -> PoleSet:
    Ga, Gb = p.Gamma_a, p.Gamma_b
    k = p.coupling_sq
    disc = _discriminant(Ga, Gb, k)
    if abs(disc) < CRITICAL_TOL * (Ga + Gb) ** 2:
        regime = Regime.CRITICAL
    elif disc > 0:
        regime = Regime.OVERDAMPED
    else:
        regime = Regime.RABI_SPLIT
    if disc >= 0:
        near, far = _real_roots(Ga, Gb, k)
        return PoleSet(complex(near), complex(far), regime)
    center = -(Ga + Gb) / 4.0
    split = math.sqrt(-disc)
    return PoleSet(complex(center, split), complex(center, -split), regime)


def transient_matrix(p: SystemParams, s: complex) -> np.ndarray:
    """F(s): map from initial intracavity amplitudes to the output transforms."""
    ps = poles(p)
    scale = p.max_rate
    if min(abs(s - ps.p_plus), abs(s - ps.p_minus)) <= 1e-12 * scale:
        raise SingularityError(f"F(s) is singular at s={s!r} (pole of D)")
    ra, rb = math.sqrt(p.gamma_a), math.sqrt(p.gamma_b)
    g = p.g_alpha
    num = np.array(
        [
            [ra * (s + 0.5 * p.Gamma_b), 1j * ra * g],
            [1j * rb * g.conjugate(), rb * (s + 0.5 * p.Gamma_a)],
        ],
        dtype=complex,
    )
    return num / denominator(p, s)


@dataclass(frozen=True)
class TransientResponse:
    t: np.ndarray
    A_out: np.ndarray
    B_out: np.ndarray
    regime: Regime

    @property
    def confluent(self) -> bool:
        """True when the poles coincide and the t*exp(p t) term is active."""
        return self.regime is Regime.CRITICAL


def _shc(z):
    """sinh(z)/z, accurate near z = 0."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-3
    safe = np.where(small, 1.0, z)
    z2 = z * z
    return np.where(small, 1.0 + z2 / 6.0 + z2 * z2 / 120.0, np.sinh(safe) / safe)


def _partial_fraction_kernels(center, delta, t):
    """Inverse Laplace transforms of 1/D(s) and s/D(s).

    With poles center +/- delta these are
    E1 = (e^{p+ t} - e^{p- t}) / (p+ - p-) and E2 = dE1/dt. Written via
    sinh(delta t)/delta they stay finite as delta -> 0, where they reduce
    to the confluent forms t e^{p t} and (1 + p t) e^{p t}.
    """
    t = np.asarray(t, dtype=float)
    z = delta * t
    far = np.abs(z) > 1.0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        # split exponentials for large |delta t| so sinh cannot overflow
        ep = np.exp((center + delta) * t)
        em = np.exp((center - delta) * t)
        d = delta if delta != 0 else 1.0
        e1_far = (ep - em) / (2 * d)
        e2_far = ((center + delta) * ep - (center - delta) * em) / (2 * d)
    decay = np.exp(center * t)
    z_near = np.where(far, 0.0, z)
    shc = _shc(z_near)
    e1_near = t * decay * shc
    e2_near = decay * (center * t * shc + np.cosh(z_near))
    return np.where(far, e1_far, e1_near), np.where(far, e2_far, e2_near)


def transient_response(p: SystemParams, a0: complex, b0: complex, t) -> TransientResponse:
    """Output amplitudes radiated by initial intracavity amplitudes, no drive.

    Partial fractions over the two poles of D; the degenerate case is the
    confluent limit of the same expression and is flagged via ``regime``.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("t", t, "must be non-negative")
    regime = poles(p).regime
    Ga, Gb = p.Gamma_a, p.Gamma_b
    center = -(Ga + Gb) / 4.0
    delta = cmath.sqrt(_discriminant(Ga, Gb, p.coupling_sq))
    e1, e2 = _partial_fraction_kernels(center, delta, t_arr)
    g = p.g_alpha
    # (sI - M)^{-1} = (N0 + s I) / D(s)
    a = (0.5 * Gb * e1 + e2) * a0 + 1j * g * e1 * b0
    b = 1j * g.conjugate() * e1 * a0 + (0.5 * Ga * e1 + e2) * b0
    return TransientResponse(
        t=t_arr,
        A_out=math.sqrt(p.gamma_a) * a,
        B_out=math.sqrt(p.gamma_b) * b,
        regime=regime,
    )


@dataclass(frozen=True)
class ScatteringMatrix:
    """2x4 map (A_out, B_out) <- (A, B, A', B') at one detuning."""

    s: np.ndarray
    omega: float
    sideband: str = "red"

    def entry(self, out: str, inp: str) -> complex:
        row = OUTPUT_PORTS.index(out if out.endswith("_out") else out + "_out")
        return complex(self.s[row, INPUT_PORTS.index(inp)])

    def unitarity_residual(self) -> float:
        """max |S S^dagger - I|; zero for a flux-conserving map."""
        return float(np.max(np.abs(self.s @ self.s.conj().T - np.eye(2))))


def smatrix_at(p: SystemParams, s: complex) -> np.ndarray:
    """Closed-form red-sideband S(s) for complex Laplace variable s."""
    ga, gap, gb, gbp = p.gamma_a, p.gamma_a_p, p.gamma_b, p.gamma_b_p
    Ga, Gb = p.Gamma_a, p.Gamma_b
    g = p.g_alpha
    gc = g.conjugate()
    k = p.coupling_sq
    sa, sb = s + 0.5 * Ga, s + 0.5 * Gb
    num = np.array(
        [
            [(-s + 0.5 * (ga - gap)) * sb - k, 1j * g * math.sqrt(ga * gb),
             math.sqrt(ga * gap) * sb, 1j * g * math.sqrt(ga * gbp)],
            [1j * gc * math.sqrt(ga * gb), (-s + 0.5 * (gb - gbp)) * sa - k,
             1j * gc * math.sqrt(gap * gb), math.sqrt(gb * gbp) * sa],
        ],
        dtype=complex,
    )
    return num / denominator(p, s)


def scattering_matrix(p: SystemParams, omega: float) -> ScatteringMatrix:
    return ScatteringMatrix(s=smatrix_at(p, -1j * omega), omega=float(omega))


def conversion_efficiency(p: SystemParams, omega):
    """Conversion efficiency R and direct reflection T at detuning omega.

    R(omega) = |g alpha|^2 gamma_a gamma_b / |(-i omega - p_+)(-i omega - p_-)|^2
    and T(omega) = |S_AA(-i omega)|^2. Accepts scalar or array omega.
    """
    ps = poles(p)
    s = -1j * np.asarray(omega, dtype=float)
    prod = np.abs((s - ps.p_plus) * (s - ps.p_minus)) ** 2
    R = p.coupling_sq * p.gamma_a * p.gamma_b / prod
    sb = s + 0.5 * p.Gamma_b
    saa = ((-s + 0.5 * (p.gamma_a - p.gamma_a_p)) * sb - p.coupling_sq) / denominator(p, s)
    T = np.abs(saa) ** 2
    if np.ndim(R) == 0:
        return float(R), float(T)
    return R, T


def critical_pump(Gamma_a: float, Gamma_b: float) -> float:
    """|g alpha| giving G0 = 1."""
    if not Gamma_a > 0:
        raise DomainError("Gamma_a", Gamma_a)
    if not Gamma_b > 0:
        raise DomainError("Gamma_b", Gamma_b)
    return math.sqrt(Gamma_a * Gamma_b) / 2.0


def to_normalized_detuning(omega, Gamma_a, Gamma_b):
    """Omega = 2 omega / sqrt(Gamma_a Gamma_b)."""
    return 2.0 * np.asarray(omega) / math.sqrt(Gamma_a * Gamma_b)


def from_normalized_detuning(Omega, Gamma_a, Gamma_b):
    return 0.5 * np.asarray(Omega) * math.sqrt(Gamma_a * Gamma_b)


def with_cooperativity(p: SystemParams, G0: float) -> SystemParams:
    magnitude = math.sqrt(G0 * p.Gamma_a * p.Gamma_b) / 2.0
    phase = cmath.phase(p.g_alpha) if p.g_alpha else 0.0
    return p.with_g_alpha(cmath.rect(magnitude, phase))


def with_log_ratio(p: SystemParams, x: float) -> SystemParams:
    """Same geometric-mean decay, intrinsic splits and G0; ln(Gamma_b/Gamma_a) = x."""
    mean = math.sqrt(p.Gamma_a * p.Gamma_b)
    Ga, Gb = mean * math.exp(-0.5 * x), mean * math.exp(0.5 * x)
    fa, fb = p.gamma_a / p.Gamma_a, p.gamma_b / p.Gamma_b
    q = SystemParams(fa * Ga, (1 - fa) * Ga, fb * Gb, (1 - fb) * Gb, p.g_alpha)
    return with_cooperativity(q, derive_rates(p).G0)


AXES = {"G0": with_cooperativity, "log_ratio": with_log_ratio}


def efficiency_map(p: SystemParams, axis: str, axis_values, Omega_values) -> SweepResult:
    """Tabulate R/eta over (axis, normalized detuning Omega).

    ``axis`` is ``"G0"`` (vary the pump at the decay rates of ``p``) or
    ``"log_ratio"`` (vary ln(Gamma_b/Gamma_a) at the geometric-mean decay
    and cooperativity of ``p``). Overlays hold 2 Im(p_+-)/sqrt(Gamma_a Gamma_b).
    """
    if axis not in AXES:
        raise DomainError("axis", axis, f"must be one of {sorted(AXES)}")
    xs = as_axis(axis_values)
    Omegas = as_axis(Omega_values)
    table = np.empty((xs.size, Omegas.size))
    upper = np.empty(xs.size)
    lower = np.empty(xs.size)
    for i, x in enumerate(xs):
        q = AXES[axis](p, float(x))
        rates = derive_rates(q)
        mean = math.sqrt(q.Gamma_a * q.Gamma_b)
        omegas = from_normalized_detuning(Omegas, q.Gamma_a, q.Gamma_b)
        R, _ = conversion_efficiency(q, omegas)
        table[i] = R / rates.eta
        ps = poles(q)
        upper[i] = 2.0 * ps.p_plus.imag / mean
        lower[i] = 2.0 * ps.p_minus.imag / mean
    return SweepResult(
        axes={axis: xs, "Omega": Omegas},
        values={"R_over_eta": table},
        overlays={"Omega_pole_plus": upper, "Omega_pole_minus": lower},
        meta={"sideband": "red"},
    )


def root_locus(p: SystemParams, magnitudes) -> SweepResult:
    """Poles of D as |g alpha| runs over ``magnitudes`` (rad/s)."""
    mags = as_axis(magnitudes)
    cols = {k: np.empty(mags.size) for k in ("re_p_plus", "im_p_plus", "re_p_minus", "im_p_minus")}
    regimes = np.empty(mags.size, dtype=object)
    for i, m in enumerate(mags):
        ps = poles(p.with_g_alpha(m))
        cols["re_p_plus"][i], cols["im_p_plus"][i] = ps.p_plus.real, ps.p_plus.imag
        cols["re_p_minus"][i], cols["im_p_minus"][i] = ps.p_minus.real, ps.p_minus.imag
        regimes[i] = ps.regime.value
    return SweepResult(
        axes={"g_alpha_abs": mags},
        values={**cols, "regime": regimes},
        meta={"sideband": "red", "break_in": abs(p.Gamma_a - p.Gamma_b) / 4.0},
    )
