"""Longitudinal overlap integrals of the four interacting fields.

The strength of the nonlinear interaction between modes of the two
resonators is set by the integral, over the coupling region, of the
product of the four slowly varying channel envelopes:

    J_ch = int_0^L conj(f_1) conj(f_2) f_3 f_4 exp(i dk z) dz
    J    = sum over channels of J_ch

For each structure the envelopes are combinations of a small fixed
z-basis (cos/sin for the directional coupler, constants for the MZI
arms and the single ring), so J also admits a factored evaluation:
boundary-amplitude polynomial algebra against precomputed basis
integrals.  The factored path is used in the frequency-integral hot
loops; :func:`j_channel`/:func:`j_total` are the direct quadrature
route the fast path is tested against.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .coupler import DirectionalCoupler, GenericUnitary, MachZehnder
from .network import SingleRing, StructureSpec, solve_linear
from .numerics import integrate_adaptive


def sinc(x):
    """Unnormalized sinc, sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x) / np.pi)


def _phase_integral(delta_k: float, length: float) -> complex:
    """int_0^L exp(i dk z) dz = L exp(i dk L / 2) sinc(dk L / 2)."""
    half = 0.5 * delta_k * length
    return length * cmath.exp(1j * half) * float(sinc(half))


def j_channel(envelopes, delta_k: float, length: float,
              rel_tol: float = 1e-9) -> complex:
    """Overlap integral of one channel by adaptive quadrature.

    Parameters
    ----------
    envelopes : callable
        Maps an ndarray of positions z in [0, length] to an array of
        shape (4, len(z)): the envelope of each of the four interacting
        fields.  The first two rows enter conjugated.
    delta_k : float
        Wavevector mismatch k1 + k2 - k3 - k4 [1/m].
    length : float
        Channel length [m].

    Returns
    -------
    complex
        The integral, in meters times the amplitude units.  An absolute
        tolerance floor scaled to the integrand magnitude allows exact
        nulls (full sinc zeros) to converge.
    """
    if length <= 0:
        raise ValueError(f"length must be positive, got {length}")

    def integrand(z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        f = np.asarray(envelopes(z)) * np.ones((4, z.size))
        return (np.conj(f[0]) * np.conj(f[1]) * f[2] * f[3]
                * np.exp(1j * delta_k * z))

    scale = float(np.max(np.abs(integrand(np.linspace(0.0, length, 33)))))
    floor = rel_tol * scale * length if scale > 0 else 1e-300
    res = integrate_adaptive(integrand, 0.0, length,
                             rel_tol=rel_tol, abs_tol=floor)
    return complex(res.value)


def _boundary_amplitudes(structure: StructureSpec, omegas):
    """Default boundary amplitudes from the linear solve: the generated
    fields (slots 0, 1) see the structure from the Drop-side bus, the
    pump (slots 2, 3) from the In bus."""
    amps = []
    for slot, w in enumerate(omegas):
        port = "in" if isinstance(structure, SingleRing) or slot >= 2 else "add"
        r = solve_linear(structure, w, port)
        amps.append((r.circ1, r.circ2))
    return amps


def j_total(structure: StructureSpec, omegas, amplitudes=None,
            rel_tol: float = 1e-9) -> complex:
    """Total overlap integral, summed over both coupler channels.

    Parameters
    ----------
    structure : StructureSpec
        Single ring, or double racetrack with a DC or MZI coupler (a
        lumped generic unitary has no interaction-region model).
    omegas : sequence of 4 floats
        (w1, w2, w3, w4); the wavevector mismatch is evaluated from the
        structure's dispersion.
    amplitudes : sequence of 4 (f1, f2) pairs, optional
        Circulating boundary amplitudes per frequency, (resonator 1,
        resonator 2) at the coupler entrance.  Defaults to the values
        from the linear solve for unit bus input.

    Notes
    -----
    Each channel is integrated by adaptive quadrature; see
    :class:`SpatialOverlapModel` for the equivalent factored fast path.
    """
    omegas = [float(w) for w in omegas]
    if len(omegas) != 4:
        raise ValueError("expected exactly four frequencies")
    wg = structure.waveguide
    delta_k = (wg.k_real(omegas[0]) + wg.k_real(omegas[1])
               - wg.k_real(omegas[2]) - wg.k_real(omegas[3]))
    if amplitudes is None:
        amplitudes = _boundary_amplitudes(structure, omegas)
    f1 = np.array([a[0] for a in amplitudes], dtype=complex)
    f2 = np.array([a[1] for a in amplitudes], dtype=complex)

    if isinstance(structure, SingleRing):
        length = structure.length
        channels = [lambda z: f1[:, None] * np.ones_like(z)]
    else:
        cp = structure.coupler
        if isinstance(cp, DirectionalCoupler):
            length, kappa = cp.length, cp.kappa

            def ch_up(z, a=f1, b=f2):
                return (a[:, None] * np.cos(kappa * z)
                        - 1j * b[:, None] * np.sin(kappa * z))

            def ch_lo(z, a=f1, b=f2):
                return (b[:, None] * np.cos(kappa * z)
                        - 1j * a[:, None] * np.sin(kappa * z))

            channels = [ch_up, ch_lo]
        elif isinstance(cp, MachZehnder):
            length = cp.length
            up = cp.sigma_dx * f1 + 1j * cp.kappa_dx * f2
            lo = ((1j * cp.kappa_dx * f1 + cp.sigma_dx * f2)
                  * cmath.exp(1j * cp.delta_phi))
            channels = [lambda z, c=up: c[:, None] * np.ones_like(z),
                        lambda z, c=lo: c[:, None] * np.ones_like(z)]
        else:
            raise ValueError(
                "lumped generic couplers define no interaction region")
    return sum(j_channel(ch, delta_k, length, rel_tol) for ch in channels)


def j_spatial_analytic(structure: StructureSpec,
                       delta_k: float = 0.0) -> complex:
    """Closed-form spatial overlap factor (unit boundary amplitudes).

    ring : L exp(i dk L / 2) sinc(dk L / 2)
    DC   : -(L/4) (1 - sinc(4 kappa L))      at dk = 0, perfect uncoupling
    MZI  : -2 sigma^2 kappa^2 L              at dk = 0, identical point
           couplers with pi phase difference; equals -L/2 at 50:50.

    Coupler forms with nonzero mismatch are unsupported; fall back to
    :func:`j_total` quadrature there.
    """
    if isinstance(structure, SingleRing):
        return _phase_integral(delta_k, structure.length)
    cp = structure.coupler
    if isinstance(cp, GenericUnitary):
        raise ValueError("no analytic overlap for a lumped generic coupler")
    if delta_k != 0.0:
        raise ValueError(
            "analytic coupler overlap requires delta_k = 0; use j_total")
    if isinstance(cp, DirectionalCoupler):
        arg = 4.0 * cp.kappa * cp.length
        return complex(-0.25 * cp.length * (1.0 - float(sinc(arg))))
    s2 = cp.sigma_dx ** 2
    return complex(-2.0 * s2 * (1.0 - s2) * cp.length)


class SpatialOverlapModel:
    """Factored evaluation of J from boundary amplitudes.

    The four envelopes are expanded on the structure's z-basis; their
    product is a degree-4 polynomial in the basis functions whose
    integrals are precomputed once per wavevector mismatch.  Exact (to
    quadrature tolerance of the basis integrals) and vectorizes over
    frequency grids.
    """

    def __init__(self, structure: StructureSpec):
        if isinstance(structure, SingleRing):
            self.kind = "ring"
            self.length = structure.length
        else:
            cp = structure.coupler
            if isinstance(cp, DirectionalCoupler):
                self.kind = "dc"
                self.kappa = cp.kappa
                self.length = cp.length
            elif isinstance(cp, MachZehnder):
                self.kind = "mzi"
                self.sigma_dx = cp.sigma_dx
                self.kappa_dx = cp.kappa_dx
                self.arm_phase = cmath.exp(1j * cp.delta_phi)
                self.length = cp.length
            else:
                raise ValueError(
                    "lumped generic couplers define no interaction region")
        self._integrals: dict[float, np.ndarray] = {}

    def channel_coefficients(self, f1, f2):
        """Per-channel z-basis coefficients of the envelope for
        circulating amplitudes (f1, f2) at the coupler entrance."""
        if self.kind == "ring":
            return [(f1,)]
        if self.kind == "dc":
            # envelope = c0*cos(kz) + c1*sin(kz)
            return [(f1, -1j * np.asarray(f2, dtype=complex)),
                    (f2, -1j * np.asarray(f1, dtype=complex))]
        up = self.sigma_dx * np.asarray(f1, dtype=complex) \
            + 1j * self.kappa_dx * np.asarray(f2, dtype=complex)
        lo = (1j * self.kappa_dx * np.asarray(f1, dtype=complex)
              + self.sigma_dx * np.asarray(f2, dtype=complex)) * self.arm_phase
        return [(up,), (lo,)]

    def basis_integrals(self, delta_k: float) -> np.ndarray:
        """Integrals of the degree-4 basis products against
        exp(i dk z); cached per mismatch value."""
        key = float(delta_k)
        if key not in self._integrals:
            if self.kind in ("ring", "mzi"):
                vals = np.array([_phase_integral(key, self.length)])
            else:
                kappa, length = self.kappa, self.length
                vals = []
                for q in range(5):
                    def f(z, q=q):
                        return (np.cos(kappa * z) ** (4 - q)
                                * np.sin(kappa * z) ** q
                                * np.exp(1j * key * z))
                    res = integrate_adaptive(f, 0.0, length, rel_tol=1e-12,
                                             abs_tol=1e-15 * length)
                    vals.append(res.value)
                vals = np.array(vals)
            self._integrals[key] = vals
        return self._integrals[key]

    def pair_polynomial(self, pair_a, pair_b, conjugate: bool):
        """Per-channel basis polynomial of the product of two envelopes
        with boundary amplitudes ``pair_a`` and ``pair_b``."""
        coeff_a = self.channel_coefficients(*pair_a)
        coeff_b = self.channel_coefficients(*pair_b)
        out = []
        for ch_a, ch_b in zip(coeff_a, coeff_b):
            a = [np.asarray(x, dtype=complex) for x in ch_a]
            b = [np.asarray(x, dtype=complex) for x in ch_b]
            if conjugate:
                a = [np.conj(x) for x in a]
                b = [np.conj(x) for x in b]
            out.append(_poly_mul(a, b))
        return out

    def j_from_pair_polynomials(self, poly_12, poly_34,
                                delta_k: float = 0.0):
        """J from precomputed per-channel pair polynomials (the
        conjugated 1,2 product and the plain 3,4 product)."""
        iq = self.basis_integrals(delta_k)
        total = 0.0
        for p12, p34 in zip(poly_12, poly_34):
            p = _poly_mul(p12, p34)
            total = total + sum(p[q] * iq[q] for q in range(len(p)))
        return total

    def j_from_amplitudes(self, amplitude_pairs, delta_k: float = 0.0):
        """J for four boundary-amplitude pairs (broadcastable arrays);
        the first two slots enter conjugated."""
        p12 = self.pair_polynomial(amplitude_pairs[0], amplitude_pairs[1],
                                   conjugate=True)
        p34 = self.pair_polynomial(amplitude_pairs[2], amplitude_pairs[3],
                                   conjugate=False)
        return self.j_from_pair_polynomials(p12, p34, delta_k)


def _poly_mul(a, b):
    out = [0.0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out
