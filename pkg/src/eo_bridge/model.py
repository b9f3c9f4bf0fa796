"""Physical parameters of the cavity electro-optic modulator.

Every rate and frequency in the package is an angular frequency (rad/s).
Only ratios and products of like-unit rates enter the results, so the
choice matters only when converting user input given in Hz; see
:func:`to_angular`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

#: CODATA 2018 values, SI units.
CONSTANTS = {
    "hbar": 1.054571817e-34,  # J s
    "c": 299792458.0,  # m / s
}

UNITS = ("angular", "cyclic")


def to_angular(value, units="angular"):
    """Convert a rate given in ``units`` to rad/s."""
    if units == "angular":
        return value
    if units == "cyclic":
        return 2.0 * math.pi * value
    raise ValueError(f"unknown units {units!r}; expected one of {UNITS}")


def _check_positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise DomainError(name, value)


@dataclass(frozen=True)
class DeviceGeometry:
    """Material and resonator constants that fix the electro-optic coupling.

    Attributes
    ----------
    omega_a, omega_b : float
        Optical and microwave resonance frequencies (rad/s).
    n : float
        Optical refractive index of the electro-optic medium.
    r : float
        Electro-optic coefficient (m/V). Zero is allowed and gives g = 0.
    l, d : float
        Length and thickness of the medium (m).
    tau : float
        Optical round-trip time (s).
    C : float
        Capacitance of the microwave resonator (F).
    """

    omega_a: float
    omega_b: float
    n: float
    r: float
    l: float
    d: float
    tau: float
    C: float

    def __post_init__(self):
        for name in ("omega_a", "omega_b", "n", "l", "d", "tau", "C"):
            _check_positive(name, getattr(self, name))
        if not (math.isfinite(self.r) and self.r >= 0):
            raise DomainError("r", self.r, "must be finite and non-negative")
        if not self.omega_a > self.omega_b:
            raise DomainError(
                "omega_a", self.omega_a, f"must exceed omega_b={self.omega_b!r}"
            )


def coupling_coefficient(dev: DeviceGeometry) -> float:
    """Electro-optic coupling rate g (rad/s) of a device.

    g = omega_a n^3 r l / (c tau d) * sqrt(hbar omega_b / (2 C))
    """
    hbar, c = CONSTANTS["hbar"], CONSTANTS["c"]
    prefactor = dev.omega_a * dev.n**3 * dev.r * dev.l / (c * dev.tau * dev.d)
    return prefactor * math.sqrt(hbar * dev.omega_b / (2.0 * dev.C))


@dataclass(frozen=True)
class SystemParams:
    """Complete dynamical description of the two coupled resonators.

    ``gamma_a`` and ``gamma_b`` couple the resonators to the accessible
    traveling fields, ``gamma_a_p`` and ``gamma_b_p`` are parasitic decay
    rates, and ``g_alpha`` is the pump-enhanced coupling g*alpha. All in
    rad/s.
    """

    gamma_a: float
    gamma_a_p: float
    gamma_b: float
    gamma_b_p: float
    g_alpha: complex = 0j

    def __post_init__(self):
        _check_positive("gamma_a", self.gamma_a)
        _check_positive("gamma_b", self.gamma_b)
        for name in ("gamma_a_p", "gamma_b_p"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(name, value, "must be finite and non-negative")
        g = complex(self.g_alpha)
        if not (math.isfinite(g.real) and math.isfinite(g.imag)):
            raise DomainError("g_alpha", self.g_alpha, "must be finite")
        object.__setattr__(self, "g_alpha", g)

    @property
    def Gamma_a(self) -> float:
        return self.gamma_a + self.gamma_a_p

    @property
    def Gamma_b(self) -> float:
        return self.gamma_b + self.gamma_b_p

    @property
    def coupling_sq(self) -> float:
        """|g alpha|^2."""
        return self.g_alpha.real**2 + self.g_alpha.imag**2

    @property
    def cooperativity(self) -> float:
        return 4.0 * self.coupling_sq / (self.Gamma_a * self.Gamma_b)

    @property
    def max_rate(self) -> float:
        return max(self.Gamma_a, self.Gamma_b, abs(self.g_alpha))

    def with_g_alpha(self, g_alpha) -> "SystemParams":
        return SystemParams(
            self.gamma_a, self.gamma_a_p, self.gamma_b, self.gamma_b_p, g_alpha
        )

    @classmethod
    def from_device(cls, dev, alpha, gamma_a, gamma_a_p, gamma_b, gamma_b_p):
        """Build parameters from a device geometry and intracavity pump amplitude."""
        return cls(
            gamma_a, gamma_a_p, gamma_b, gamma_b_p,
            coupling_coefficient(dev) * complex(alpha),
        )

    @classmethod
    def from_cooperativity(
        cls, G0, Gamma_a=1.0, Gamma_b=1.0, eta_a=1.0, eta_b=1.0, phase=0.0
    ) -> "SystemParams":
        """Parameters with the given cooperativity and total decay rates.

        ``eta_a`` and ``eta_b`` are the fractions gamma/Gamma of each
        resonator's decay that goes into the traveling field, so the
        intrinsic efficiency is ``eta_a * eta_b``.
        """
        if G0 < 0:
            raise DomainError("G0", G0, "must be non-negative")
        for name, frac in (("eta_a", eta_a), ("eta_b", eta_b)):
            if not 0 < frac <= 1:
                raise DomainError(name, frac, "must lie in (0, 1]")
        magnitude = math.sqrt(G0 * Gamma_a * Gamma_b) / 2.0
        return cls(
            gamma_a=eta_a * Gamma_a,
            gamma_a_p=(1.0 - eta_a) * Gamma_a,
            gamma_b=eta_b * Gamma_b,
            gamma_b_p=(1.0 - eta_b) * Gamma_b,
            g_alpha=magnitude * complex(math.cos(phase), math.sin(phase)),
        )


@dataclass(frozen=True)
class DerivedRates:
    Gamma_a: float
    Gamma_b: float
    G0: float
    eta: float


def derive_rates(p: SystemParams) -> DerivedRates:
    """Total decay rates, cooperativity and intrinsic efficiency."""
    Gamma_a, Gamma_b = p.Gamma_a, p.Gamma_b
    return DerivedRates(
        Gamma_a=Gamma_a,
        Gamma_b=Gamma_b,
        G0=4.0 * p.coupling_sq / (Gamma_a * Gamma_b),
        eta=p.gamma_a * p.gamma_b / (Gamma_a * Gamma_b),
    )
