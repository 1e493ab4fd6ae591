"""2x2 transfer descriptions of the coupling region between resonators.

Three variants are supported:

* ``DirectionalCoupler``: two parallel waveguides exchanging power
  sinusoidally with coupling constant kappa;  cross transmission nulls
  at kappa*L = n*pi, which realizes linear uncoupling.
* ``MachZehnder``: two point couplers joined by two arms with a lumped
  relative phase; with identical point couplers and delta_phi = pi the
  structure is linearly uncoupling for any splitting ratio.
* ``GenericUnitary``: a user-supplied (e.g. measured or fitted) matrix
  for near-uncoupled studies.

All matrices describe the slowly varying field envelopes only; the
common propagation factor exp(i*k(w)*L_cp) and the loss over the coupler
length are applied separately by the network solver.  Point couplers use
the [[sigma, i*kappa], [i*kappa, sigma]] convention with sigma and kappa
real non-negative.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EnvelopePair:
    """Field envelopes of the two coupler channels at position z."""
    f_up: complex
    f_lo: complex
    z: float


@dataclass(frozen=True)
class DirectionalCoupler:
    """Directional coupler with coupling constant ``kappa`` [1/m] over
    ``length`` [m].  kappa is treated as frequency independent across
    the band of interest."""
    kappa: float
    length: float

    def __post_init__(self):
        if self.kappa < 0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")

    def transfer_matrix(self) -> np.ndarray:
        c = np.cos(self.kappa * self.length)
        s = np.sin(self.kappa * self.length)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)

    def envelopes(self, f1_in: complex, f2_in: complex, z) -> EnvelopePair:
        """Channel envelopes at position ``z`` inside the coupler for
        boundary amplitudes (f1_in, f2_in) at z = 0.

        f_up(z) = f1*cos(kz) - i*f2*sin(kz)
        f_lo(z) = -i*f1*sin(kz) + f2*cos(kz)
        """
        z_arr = np.asarray(z, dtype=float)
        if np.any(z_arr < 0) or np.any(z_arr > self.length):
            raise ValueError("z must lie within [0, coupler length]")
        c = np.cos(self.kappa * z_arr)
        s = np.sin(self.kappa * z_arr)
        f_up = f1_in * c - 1j * f2_in * s
        f_lo = -1j * f1_in * s + f2_in * c
        return EnvelopePair(f_up, f_lo, z)


@dataclass(frozen=True)
class MachZehnder:
    """Mach-Zehnder coupler: point couplers with self-coupling
    ``sigma_sx`` / ``sigma_dx`` joined by arms of length ``length`` [m]
    with lumped phase difference ``delta_phi`` [rad] on the lower arm."""
    sigma_sx: float
    sigma_dx: float
    delta_phi: float
    length: float

    def __post_init__(self):
        for name in ("sigma_sx", "sigma_dx"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")

    @property
    def kappa_sx(self) -> float:
        """Cross coupling of the sx point coupler (sigma^2+kappa^2=1)."""
        return float(np.sqrt(1.0 - self.sigma_sx ** 2))

    @property
    def kappa_dx(self) -> float:
        return float(np.sqrt(1.0 - self.sigma_dx ** 2))

    def transfer_matrix(self) -> np.ndarray:
        ssx, sdx = self.sigma_sx, self.sigma_dx
        ksx, kdx = self.kappa_sx, self.kappa_dx
        ph = cmath.exp(1j * self.delta_phi)
        return np.array([
            [ssx * sdx - ksx * kdx * ph, 1j * (ssx * kdx + ksx * sdx * ph)],
            [1j * (ksx * sdx + ssx * kdx * ph), -ksx * kdx + ssx * sdx * ph],
        ], dtype=complex)

    def envelopes(self, f1_in: complex, f2_in: complex) -> EnvelopePair:
        """Arm envelopes for circulating amplitudes (f1_in, f2_in)
        entering the coupler.  The envelopes are z independent; the
        lower arm carries the lumped phase."""
        sdx, kdx = self.sigma_dx, self.kappa_dx
        f_up = sdx * f1_in + 1j * kdx * f2_in
        f_lo = (1j * kdx * f1_in + sdx * f2_in) * cmath.exp(1j * self.delta_phi)
        return EnvelopePair(f_up, f_lo, 0.0)


@dataclass(frozen=True)
class GenericUnitary:
    """User-supplied coupler matrix.

    Input is accepted if unitary within 1e-6 (elementwise) and is then
    renormalized to an exactly unitary matrix by polar decomposition, so
    downstream code can rely on machine-precision unitarity.  The
    coupler is treated as lumped (zero physical length).
    """
    x11: complex
    x12: complex
    x21: complex
    x22: complex
    length: float = 0.0

    def __post_init__(self):
        x = np.array([[self.x11, self.x12], [self.x21, self.x22]],
                     dtype=complex)
        dev = np.abs(x @ x.conj().T - np.eye(2)).max()
        if dev > 1e-6:
            raise ValueError(
                f"matrix is not unitary within 1e-6 (deviation {dev:.2e})")
        if dev > 1e-15:
            u, _, vh = np.linalg.svd(x)
            x = u @ vh
        object.__setattr__(self, "x11", complex(x[0, 0]))
        object.__setattr__(self, "x12", complex(x[0, 1]))
        object.__setattr__(self, "x21", complex(x[1, 0]))
        object.__setattr__(self, "x22", complex(x[1, 1]))

    @classmethod
    def from_cross_coupling(cls, x12: complex) -> "GenericUnitary":
        """Symmetric near-identity coupler with the given cross term,
        completing the diagonal as sqrt(1 - |x12|^2)."""
        mag = abs(x12)
        if mag > 1.0:
            raise ValueError("cross coupling magnitude must be <= 1")
        diag = float(np.sqrt(1.0 - mag * mag))
        return cls(diag, x12, x12, diag)

    @classmethod
    def identity(cls) -> "GenericUnitary":
        return cls(1.0, 0.0, 0.0, 1.0)

    def transfer_matrix(self) -> np.ndarray:
        return np.array([[self.x11, self.x12], [self.x21, self.x22]],
                        dtype=complex)


CouplerSpec = DirectionalCoupler | MachZehnder | GenericUnitary


def coupler_length(spec: CouplerSpec) -> float:
    """Physical length the coupler occupies along each racetrack [m]."""
    return spec.length


def transfer_matrix(spec: CouplerSpec) -> np.ndarray:
    """Envelope transfer matrix of any coupler variant (excludes the
    common propagation factor over the coupler length)."""
    return spec.transfer_matrix()


def sigma_mzi(sigma_sx: float, sigma_dx: float, delta_phi: float) -> complex:
    """Effective straight-through coefficient of the MZI coupler.

    Equals the (1, 1) element of the transfer matrix:
    sigma_sx*sigma_dx - kappa_sx*kappa_dx*exp(i*delta_phi).
    With identical point couplers and delta_phi an odd multiple of pi
    the modulus is 1 for any splitting ratio.
    """
    for name, v in (("sigma_sx", sigma_sx), ("sigma_dx", sigma_dx)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {v}")
    ksx = np.sqrt(1.0 - sigma_sx ** 2)
    kdx = np.sqrt(1.0 - sigma_dx ** 2)
    return sigma_sx * sigma_dx - ksx * kdx * cmath.exp(1j * delta_phi)


def dc_envelopes(f1_in: complex, f2_in: complex, kappa: float, z,
                 length: float | None = None) -> EnvelopePair:
    """Directional-coupler channel envelopes at position z; functional
    form of :meth:`DirectionalCoupler.envelopes`."""
    dc = DirectionalCoupler(kappa, length if length is not None else
                            (np.max(np.atleast_1d(z)) or 1.0))
    return dc.envelopes(f1_in, f2_in, z)


def mzi_envelopes(f1_in: complex, f2_in: complex,
                  spec: MachZehnder) -> EnvelopePair:
    """Arm envelopes of the MZI coupler; functional form of
    :meth:`MachZehnder.envelopes`."""
    return spec.envelopes(f1_in, f2_in)
