"""Dispersion, loss, and propagation phase of the shared waveguide mode.

Every waveguide in a structure (buses, racetracks, coupler channels) is
assumed to carry the same single transverse mode, described by a complex
propagation constant k(w) + i*xi/2.  The real part is a Taylor series
around a reference frequency w0:

    k(w) = k0 + (w - w0)/v_g + 0.5*beta2*(w - w0)^2

with k0 = n_eff * w0 / c.  The quadratic (GVD) term is carried for
completeness but defaults to zero; resonance finding and the pair-rate
formulas are validated only at beta2 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .units import C_VACUUM


@dataclass(frozen=True)
class WaveguideModel:
    """Single-mode waveguide dispersion and loss model.

    Parameters
    ----------
    omega0 : float
        Reference angular frequency [rad/s].
    n_eff : float
        Effective index at omega0.
    v_g : float
        Group velocity [m/s].
    beta2 : float, optional
        Group-velocity dispersion [s^2/m].  Default 0.
    xi : float, optional
        Power attenuation coefficient [1/m]; the field amplitude decays
        as exp(-xi*L/2) over a length L.  Default 0 (lossless).
    """
    omega0: float
    n_eff: float
    v_g: float
    beta2: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if self.n_eff <= 0:
            raise ValueError(f"n_eff must be positive, got {self.n_eff}")
        if self.v_g <= 0:
            raise ValueError(f"v_g must be positive, got {self.v_g}")
        if self.xi < 0:
            raise ValueError(f"xi must be non-negative, got {self.xi}")

    @property
    def k0(self) -> float:
        """Propagation constant at the reference frequency [1/m]."""
        return self.n_eff * self.omega0 / C_VACUUM

    def k_real(self, omega):
        """Real part of the propagation constant at ``omega`` [1/m].

        Accepts a scalar or ndarray of angular frequencies; all entries
        must be positive.
        """
        if np.any(np.asarray(omega) <= 0):
            raise ValueError("omega must be positive")
        detuning = np.asarray(omega, dtype=float) - self.omega0
        k = self.k0 + detuning / self.v_g
        if self.beta2 != 0.0:
            k = k + 0.5 * self.beta2 * detuning ** 2
        return k if k.ndim else float(k)

    def propagate(self, amplitude, length: float, omega):
        """Propagate a complex field amplitude over ``length`` meters.

        Applies exp(i*k(w)*L - xi*L/2), i.e. the full complex
        propagation constant: phase from the dispersive real part and
        amplitude decay from the loss term.
        """
        if length < 0:
            raise ValueError(f"length must be non-negative, got {length}")
        phase = self.k_real(omega) * length
        return amplitude * np.exp(1j * phase - 0.5 * self.xi * length)

    def round_trip_amplitude(self, ring_length: float,
                             literal_loss_exponent: bool = False) -> float:
        """Round-trip amplitude transmission a of a resonator.

        Returns a = exp(-xi*L/2), so that 1 - a^2 = 1 - exp(-xi*L) is
        the round-trip *power* loss, consistent with the complex
        propagation constant k + i*xi/2.  ``literal_loss_exponent=True``
        selects the alternative convention a = exp(-xi*L) used by some
        references that quote the loss factor directly in amplitude.
        """
        if ring_length <= 0:
            raise ValueError(f"ring_length must be positive, got {ring_length}")
        exponent = self.xi * ring_length
        if not literal_loss_exponent:
            exponent *= 0.5
        return float(np.exp(-exponent))


def free_spectral_range(model: WaveguideModel, ring_length: float) -> float:
    """FSR = v_g / L of a resonator of length L [1/s, ordinary frequency].

    The spacing between adjacent resonances in angular frequency is
    2*pi times this value.
    """
    if ring_length <= 0:
        raise ValueError("ring_length must be positive")
    return model.v_g / ring_length
