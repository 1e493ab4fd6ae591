"""Reference structures used by the demos and regression tests.

The double-racetrack parameters correspond to a silicon-wire platform
with 1 dB/cm propagation loss.  Effective and group index are plausible
values chosen so that 1550.07 nm is exactly a resonance of resonator 1
and so that the resonator-2 line near 1550.3 nm sits about 31 GHz from
its nearest resonator-1 neighbor; with the slightly-too-strong
directional coupler of :func:`racetracks_residual_dc` that proximity
halves the resonator-2 circulating intensity while barely affecting
resonator 1.
"""

from __future__ import annotations

import math

from .coupler import DirectionalCoupler, GenericUnitary, MachZehnder
from .network import DoubleRacetrack, SingleRing
from .units import C_VACUUM
from .waveguide import WaveguideModel

LAMBDA_IN = 1550.07e-9     # resonator-1 anchor resonance [m]
LENGTH_1 = 641e-6          # racetrack 1 [m]
LENGTH_2 = 432e-6          # racetrack 2 [m]
SIGMA_1 = 0.933            # bus self-coupling, resonator 1
SIGMA_2 = 0.993            # bus self-coupling, resonator 2
XI = 23.0                  # 1 dB/cm power loss [1/m]
GROUP_INDEX = 4.2
MODE_NUMBER_1 = 987        # anchor mode of resonator 1 at LAMBDA_IN
DC_KAPPA_IDEAL = 0.064e6   # 1/m; kappa*L = 2*pi at DC_LENGTH
DC_KAPPA_RESIDUAL = 0.068e6
DC_LENGTH = 98.2e-6
CROSS_COUPLING = -0.00161j  # measured-coupler residual cross term


def silicon_waveguide(xi: float = XI) -> WaveguideModel:
    """Waveguide model anchoring LAMBDA_IN on the resonator-1 comb."""
    omega0 = 2.0 * math.pi * C_VACUUM / LAMBDA_IN
    n_eff = MODE_NUMBER_1 * LAMBDA_IN / LENGTH_1
    return WaveguideModel(omega0=omega0, n_eff=n_eff,
                          v_g=C_VACUUM / GROUP_INDEX, xi=xi)


def racetracks_measured_coupler() -> DoubleRacetrack:
    """Nearly uncoupled pair with the lumped measured coupler
    (cross coupling -0.00161j)."""
    return DoubleRacetrack(LENGTH_1, LENGTH_2, SIGMA_1, SIGMA_2,
                           GenericUnitary.from_cross_coupling(CROSS_COUPLING),
                           silicon_waveguide())


def racetracks_ideal_dc() -> DoubleRacetrack:
    """Directional-coupler pair at the uncoupling point
    (kappa * L_DC = 2*pi to 3 decimal places)."""
    return DoubleRacetrack(LENGTH_1, LENGTH_2, SIGMA_1, SIGMA_2,
                           DirectionalCoupler(DC_KAPPA_IDEAL, DC_LENGTH),
                           silicon_waveguide())


def racetracks_residual_dc() -> DoubleRacetrack:
    """Same geometry with the coupling constant 6% high, as if the DC
    gap came out slightly narrow in fabrication."""
    return DoubleRacetrack(LENGTH_1, LENGTH_2, SIGMA_1, SIGMA_2,
                           DirectionalCoupler(DC_KAPPA_RESIDUAL, DC_LENGTH),
                           silicon_waveguide())


def racetracks_mzi(sigma: float = 2 ** -0.5,
                   length: float = 100e-6) -> DoubleRacetrack:
    """MZI-coupled pair, 50:50 point couplers and a pi arm imbalance
    (broadband uncoupling)."""
    return DoubleRacetrack(LENGTH_1, LENGTH_2, SIGMA_1, SIGMA_2,
                           MachZehnder(sigma, sigma, math.pi, length),
                           silicon_waveguide())


def reference_ring(length: float = 600e-6, xi: float = 5.0,
                   critical: bool = True) -> SingleRing:
    """Single-ring benchmark; critically coupled by default."""
    wg = silicon_waveguide(xi=xi)
    sigma = wg.round_trip_amplitude(length) if critical else 0.995
    return SingleRing(length, sigma, wg)
