"""Input-output relations of a cavity electro-optic modulator.

Red-sideband pumping converts photons between a traveling microwave field
and a traveling optical field like a beam splitter; blue-sideband pumping
turns the device into a nondegenerate parametric amplifier. The
``timedomain`` module integrates the underlying equations of motion
independently of the closed forms.
"""
from .model import DerivedRates, DeviceGeometry, SystemParams, coupling_coefficient, derive_rates
from .red import (PoleSet, Regime, ScatteringMatrix, conversion_efficiency, critical_pump,
                  denominator, efficiency_map, poles, scattering_matrix, transient_matrix,
                  transient_response)
from .blue import (BluePoleSet, BogoliubovMatrix, PairStateSummary, blue_poles,
                   blue_scattering_matrix, idler_gain, noise_spectra, nonclassicality,
                   pair_state)
from .timedomain import Drive, integrate_mean_field, lyapunov_steady_state
from .sweep import Grid, SweepResult

__version__ = "0.1.0"
