"""Linear response and photon-pair generation in linearly uncoupled
racetrack resonators.

Two racetracks share a coupling region (directional coupler, MZI, or a
measured unitary) designed so light entering from one resonator returns
to it; energy then moves between the resonators only through the
third-order nonlinear interaction.  The package models the linear port
spectra and circulating enhancements of such structures, and the
spontaneous four-wave-mixing pair generation they support, with every
closed-form rate cross-checked against direct numerical quadrature.
"""

from .coupler import (DirectionalCoupler, EnvelopePair, GenericUnitary,
                      MachZehnder, dc_envelopes, mzi_envelopes, sigma_mzi,
                      transfer_matrix)
from .errors import (BracketError, ConfigError, DegenerateStructureError,
                     EnergyConservationError, FitError, GridResolutionError,
                     NumericError, QuadratureError, RingpairError)
from .network import (DoubleRacetrack, PortResponse, ResonanceInfo,
                      SingleRing, characterize_resonance, find_resonances,
                      intensity_enhancement, isolation, solve_linear,
                      spectrum)
from .numerics import (LorentzianFit, QuadratureResult, find_root_bracketed,
                       fit_lorentzian, integrate_adaptive)
from .overlap import (SpatialOverlapModel, j_channel, j_spatial_analytic,
                      j_total)
from .sfwm import (BiphotonResult, CWPump, NonlinearSpec, PulsedPump,
                   ResonanceTriple, SfwmResult, biphoton_wavefunction,
                   lorentzian_pair_integral, pair_rate_cw,
                   pair_rate_finesse_form, pair_rate_q_form, pairs_per_pulse,
                   ratio_to_ring, s_perp_from_gamma)
from .units import C_VACUUM, HBAR
from .waveguide import WaveguideModel, free_spectral_range

__version__ = "0.1.0"

__all__ = [
    "BiphotonResult", "BracketError", "C_VACUUM", "CWPump", "ConfigError",
    "DegenerateStructureError", "DirectionalCoupler", "DoubleRacetrack",
    "EnergyConservationError", "EnvelopePair", "FitError", "GenericUnitary",
    "GridResolutionError", "HBAR", "LorentzianFit", "MachZehnder",
    "NonlinearSpec", "NumericError", "PortResponse", "PulsedPump",
    "QuadratureError", "QuadratureResult", "ResonanceInfo", "ResonanceTriple",
    "RingpairError", "SfwmResult", "SingleRing", "SpatialOverlapModel",
    "WaveguideModel", "biphoton_wavefunction", "characterize_resonance",
    "dc_envelopes", "find_resonances", "find_root_bracketed",
    "fit_lorentzian", "free_spectral_range", "intensity_enhancement",
    "integrate_adaptive", "isolation", "j_channel", "j_spatial_analytic",
    "j_total", "lorentzian_pair_integral", "mzi_envelopes", "pair_rate_cw",
    "pair_rate_finesse_form", "pair_rate_q_form", "pairs_per_pulse",
    "ratio_to_ring", "s_perp_from_gamma", "sigma_mzi", "solve_linear",
    "spectrum", "transfer_matrix",
]
