"""Photon-pair generation by spontaneous four-wave mixing.

Two pump photons circulating in resonator 1 are annihilated and a
signal/idler pair is created on two resonances of resonator 2 (or of
the same ring, for the single-ring reference).  The continuous-wave
pair rate in the Lorentzian-lineshape approximation factorizes into

    R = (1/4pi) (gamma_nl P / w_P)^2 * FE_product
        * pi G_S G_I / (G_S + G_I) * w_S w_I * |J_spatial|^2

with FE_product the product of the peak intensity enhancements (pump
squared twice) and J_spatial the structure's spatial overlap factor.
Both the analytic factorization and the direct frequency-domain
quadrature are implemented, along with quality-factor and finesse
rewritings, pulsed-pump pairs per pulse, and the joint spectral
amplitude of the generated pair.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import EnergyConservationError, GridResolutionError
from .network import (ResonanceInfo, SingleRing, StructureSpec,
                      solve_linear)
from .numerics import integrate_adaptive
from .overlap import SpatialOverlapModel, j_spatial_analytic, j_total, sinc
from .units import HBAR

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- pumps

@dataclass(frozen=True)
class CWPump:
    """Continuous-wave pump of ``power`` watts.  ``omega`` may pin the
    pump frequency; if omitted it sits on the pump resonance."""
    power: float
    omega: float | None = None

    def __post_init__(self):
        if self.power <= 0:
            raise ValueError(f"pump power must be positive, got {self.power}")


@dataclass(frozen=True, eq=False)
class PulsedPump:
    """Pulsed pump: normalized spectral amplitude on a frequency grid.

    ``amplitude`` is phi_P sampled on ``omega_grid`` with
    int |phi_P|^2 dw = 1 (checked to 1e-6); ``mean_photons`` is the
    average photon number per pulse.
    """
    omega_grid: np.ndarray
    amplitude: np.ndarray
    mean_photons: float

    def __post_init__(self):
        grid = np.asarray(self.omega_grid, dtype=float)
        amp = np.asarray(self.amplitude, dtype=complex)
        if grid.ndim != 1 or grid.shape != amp.shape or grid.size < 9:
            raise ValueError("omega_grid and amplitude must be equal-length "
                             "1-D arrays with at least 9 samples")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("omega_grid must be strictly increasing")
        if self.mean_photons <= 0:
            raise ValueError("mean_photons must be positive")
        norm = float(np.trapezoid(np.abs(amp) ** 2, grid))
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(
                f"pump profile is not normalized: int |phi|^2 dw = {norm!r}")
        object.__setattr__(self, "omega_grid", grid)
        object.__setattr__(self, "amplitude", amp)

    @classmethod
    def gaussian(cls, center: float, sigma_omega: float, mean_photons: float,
                 n_points: int = 257, span_sigmas: float = 8.0) -> "PulsedPump":
        """Gaussian profile of standard deviation ``sigma_omega`` in the
        spectral amplitude, phi(w) = (2 pi s^2)^(-1/4) exp(-(w-w0)^2/(4s^2))."""
        if sigma_omega <= 0:
            raise ValueError("sigma_omega must be positive")
        grid = np.linspace(center - span_sigmas * sigma_omega,
                           center + span_sigmas * sigma_omega, n_points)
        amp = ((2.0 * math.pi * sigma_omega ** 2) ** -0.25
               * np.exp(-((grid - center) ** 2) / (4.0 * sigma_omega ** 2)))
        return cls(grid, amp, mean_photons)

    def phi(self, omega):
        """Spectral amplitude at arbitrary frequencies (zero outside the
        tabulated support)."""
        w = np.asarray(omega, dtype=float)
        re = np.interp(w, self.omega_grid, self.amplitude.real, left=0.0,
                       right=0.0)
        im = np.interp(w, self.omega_grid, self.amplitude.imag, left=0.0,
                       right=0.0)
        return re + 1j * im

    def effective_duration(self) -> float:
        """Pulse duration Delta_T consistent with the CW limit
        R = |beta|^2 / Delta_T of the pairs-per-pulse integral.

        Equals 1 / int |f(t)|^4 dt for the normalized time-domain
        profile, evaluated spectrally as 2*pi / int |A|^2 dW with
        A(W) = int phi(w) phi(W - w) dw.  For a Gaussian of spectral
        std s this is sqrt(pi)/s.
        """
        grid = self.omega_grid
        omega_sum = np.linspace(2.0 * grid[0], 2.0 * grid[-1],
                                2 * grid.size - 1)
        auto = np.array([np.trapezoid(self.amplitude * self.phi(s - grid),
                                      grid) for s in omega_sum])
        return TWO_PI / float(np.trapezoid(np.abs(auto) ** 2, omega_sum))


# ------------------------------------------------- nonlinearity, triples

@dataclass(frozen=True)
class NonlinearSpec:
    """Waveguide nonlinear power factor gamma_nl [1/(W m)].

    ``s_perp`` optionally carries an independently supplied transverse
    nonlinear coupling at frequency degeneracy; use
    :meth:`check_s_perp` to enforce consistency with gamma_nl.
    """
    gamma_nl: float
    s_perp: float | None = None

    def __post_init__(self):
        if self.gamma_nl < 0:
            raise ValueError(f"gamma_nl must be >= 0, got {self.gamma_nl}")

    def check_s_perp(self, omega_p: float, rel_tol: float = 1e-6):
        if self.s_perp is None:
            return
        expected = s_perp_from_gamma(self.gamma_nl, omega_p, omega_p,
                                     omega_p, omega_p, omega_p)
        if expected == 0.0 or abs(self.s_perp - expected) > rel_tol * expected:
            raise ValueError(
                f"s_perp = {self.s_perp!r} is inconsistent with gamma_nl "
                f"(expected {expected!r} at omega_p = {omega_p:g})")


def s_perp_from_gamma(gamma_nl: float, omega1: float, omega2: float,
                      omega3: float, omega4: float, omega_p: float) -> float:
    """Transverse nonlinear coupling implied by the power factor:
    hbar^2 gamma_nl sqrt(w1 w2 w3 w4) / (4 pi^2 w_P)."""
    return (HBAR ** 2 * gamma_nl
            * math.sqrt(omega1 * omega2 * omega3 * omega4)
            / (4.0 * math.pi ** 2 * omega_p))


@dataclass(frozen=True)
class ResonanceTriple:
    """Pump, signal, and idler resonances of one SFWM process.

    Construction enforces energy conservation |2 w_P - w_S - w_I| within
    ``energy_tolerance`` (default: a tenth of the narrowest linewidth).
    """
    pump: ResonanceInfo
    signal: ResonanceInfo
    idler: ResonanceInfo
    energy_tolerance: float | None = None

    def __post_init__(self):
        tol = self.energy_tolerance
        if tol is None:
            tol = 0.1 * min(self.pump.gamma, self.signal.gamma,
                            self.idler.gamma)
        if self.energy_mismatch > tol:
            raise EnergyConservationError(
                f"|2 w_P - w_S - w_I| = {self.energy_mismatch:.6g} rad/s "
                f"exceeds the tolerance {tol:.6g} rad/s")

    @property
    def energy_mismatch(self) -> float:
        return abs(2.0 * self.pump.omega - self.signal.omega
                   - self.idler.omega)


@dataclass(frozen=True)
class SfwmResult:
    """Pair rate with the factors that produced it.

    ``fe_product`` is the product of peak intensity enhancements
    (signal * idler * pump^2); ``method`` records whether the rate came
    from the closed form or from frequency quadrature.
    """
    rate_pairs_per_s: float
    j_spatial: complex
    fe_product: float
    method: str
    ratio_to_ring: float | None = None


def _same_resonance(a: ResonanceInfo, b: ResonanceInfo) -> bool:
    return (a.resonator_index == b.resonator_index
            and a.mode_index == b.mode_index)


def _validate_triple(structure: StructureSpec, triple: ResonanceTriple,
                     distinct: bool):
    if isinstance(structure, SingleRing):
        want = {1}
    else:
        want = None
    idx = (triple.pump.resonator_index, triple.signal.resonator_index,
           triple.idler.resonator_index)
    if want is not None:
        if set(idx) != want:
            raise ValueError("single-ring triples must use resonator 1")
    elif idx != (1, 2, 2):
        raise ValueError("double-racetrack triples need the pump on "
                         "resonator 1 and signal/idler on resonator 2")
    if distinct and _same_resonance(triple.signal, triple.idler):
        raise ValueError("signal and idler must be distinct resonances for "
                         "the CW rate conventions (no degenerate SFWM)")


def _dedupe(resonances):
    seen, out = set(), []
    for r in resonances:
        key = (r.resonator_index, r.mode_index)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def _lorentzian_amplitude(resonances):
    """Complex circulating-amplitude model: sum of peak-normalized
    Lorentzian lines sqrt(FE_max^2) * (G/2) / (G/2 - i (w - w_m))."""
    rs = [(math.sqrt(r.fe_max_sq), 0.5 * r.gamma, r.omega)
          for r in _dedupe(resonances)]

    def g(omega):
        w = np.asarray(omega, dtype=float)
        total = np.zeros(w.shape, dtype=complex)
        for peak, half, center in rs:
            total = total + peak * half / (half - 1j * (w - center))
        return total if total.ndim else complex(total)

    return g


def _amplitude_models(structure: StructureSpec, triple: ResonanceTriple):
    """(resonator-1, resonator-2) circulating amplitude functions."""
    if isinstance(structure, SingleRing):
        g1 = _lorentzian_amplitude([triple.pump, triple.signal, triple.idler])
        return g1, lambda w: np.zeros(np.shape(w), dtype=complex)
    g1 = _lorentzian_amplitude([triple.pump])
    g2 = _lorentzian_amplitude([triple.signal, triple.idler])
    return g1, g2


def _merged_windows(resonances, n_linewidths: float):
    """Disjoint frequency intervals of +-n linewidths per resonance."""
    spans = sorted((r.omega - n_linewidths * r.gamma,
                    r.omega + n_linewidths * r.gamma)
                   for r in _dedupe(resonances))
    merged = [list(spans[0])]
    for lo, hi in spans[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [tuple(m) for m in merged]


# ----------------------------------------------------------- CW rates

def lorentzian_pair_integral(gamma_s: float, gamma_i: float,
                             omega_s: float, omega_i: float,
                             omega_p: float | None = None) -> float:
    """Closed form of the frequency integral over the signal/idler
    Lorentzian product: pi * G_S G_I / (G_S + G_I) * w_S w_I.

    Valid for linewidths much smaller than the resonance frequencies
    and the free spectral range (cross-resonance products neglected).
    """
    if gamma_s <= 0 or gamma_i <= 0:
        raise ValueError("linewidths must be positive")
    return (math.pi * gamma_s * gamma_i / (gamma_s + gamma_i)
            * omega_s * omega_i)


def _pump_frequency(triple: ResonanceTriple, pump: CWPump) -> float:
    omega_p = triple.pump.omega
    if pump.omega is not None and abs(pump.omega - omega_p) > 0.1 * triple.pump.gamma:
        raise ValueError("CW pump frequency must sit on the pump resonance")
    return omega_p


def pair_rate_cw(structure: StructureSpec, triple: ResonanceTriple,
                 pump: CWPump, nl: NonlinearSpec,
                 method: str = "analytic",
                 boundary_amplitudes: str = "lorentzian",
                 window_linewidths: float = 12.0,
                 rel_tol: float = 1e-6) -> SfwmResult:
    """Continuous-wave pair generation rate [pairs/s].

    ``method="analytic"`` evaluates the Lorentzian factorization with
    the structure's closed-form spatial overlap.  ``method="quadrature"``
    integrates |J|^2 over the signal/idler windows directly, with
    boundary amplitudes either from the Lorentzian line model (default,
    ``"lorentzian"``) or from the full linear solve (``"solve"``).
    """
    _validate_triple(structure, triple, distinct=True)
    nl.check_s_perp(triple.pump.omega)
    omega_p = _pump_frequency(triple, pump)
    prefactor = (nl.gamma_nl * pump.power / omega_p) ** 2 / (4.0 * math.pi)
    fe_product = (triple.signal.fe_max_sq * triple.idler.fe_max_sq
                  * triple.pump.fe_max_sq ** 2)

    if method == "analytic":
        j_sp = j_spatial_analytic(structure)
        lor = lorentzian_pair_integral(triple.signal.gamma, triple.idler.gamma,
                                       triple.signal.omega, triple.idler.omega,
                                       omega_p)
        rate = prefactor * fe_product * lor * abs(j_sp) ** 2
        return SfwmResult(rate, j_sp, fe_product, "analytic")
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    if boundary_amplitudes not in ("lorentzian", "solve"):
        raise ValueError(f"unknown amplitude model {boundary_amplitudes!r}")

    g1, g2 = _amplitude_models(structure, triple)
    single = isinstance(structure, SingleRing)

    def amp_pair(w, slot):
        if boundary_amplitudes == "solve":
            port = "in" if single or slot >= 2 else "add"
            r = solve_linear(structure, w, port)
            return (r.circ1, r.circ2)
        if single:
            return (complex(g1(w)), 0.0)
        if slot < 2:
            return (0.0, complex(g2(w)))
        return (complex(g1(w)), 0.0)

    def integrand(w1_arr):
        out = np.empty(w1_arr.shape, dtype=float)
        for i, w1 in enumerate(np.atleast_1d(w1_arr)):
            w2 = 2.0 * omega_p - w1
            amps = [amp_pair(w1, 0), amp_pair(w2, 1),
                    amp_pair(omega_p, 2), amp_pair(omega_p, 3)]
            j = j_total(structure, (w1, w2, omega_p, omega_p), amps,
                        rel_tol=1e-8)
            out[i] = w1 * w2 * abs(j) ** 2
        return out

    total = 0.0
    for lo, hi in _merged_windows([triple.signal, triple.idler],
                                  window_linewidths):
        total += integrate_adaptive(integrand, lo, hi, rel_tol=rel_tol).value
    unit = [(0.0, 1.0), (0.0, 1.0), (1.0, 0.0), (1.0, 0.0)]
    if single:
        unit = [(1.0, 0.0)] * 4
    j_ref = j_total(structure,
                    (triple.signal.omega, triple.idler.omega, omega_p, omega_p),
                    unit, rel_tol=1e-9)
    return SfwmResult(prefactor * total, j_ref, fe_product, "quadrature")


def pair_rate_q_form(structure: StructureSpec, triple: ResonanceTriple,
                     pump: CWPump, nl: NonlinearSpec) -> float:
    """CW rate in the loaded/coupling quality-factor form.

    Algebraically equivalent to the analytic Lorentzian form under
    G = w/Q and the peak-enhancement/Q_C identity; the MZI form assumes
    50:50 point couplers.
    """
    _validate_triple(structure, triple, distinct=True)
    omega_p = _pump_frequency(triple, pump)
    wg = structure.waveguide
    s, i, p = triple.signal, triple.idler, triple.pump
    q_factor = (p.q_loaded ** 4 * s.q_loaded ** 2 * i.q_loaded ** 2
                / (p.q_coupling ** 2 * s.q_coupling * i.q_coupling))
    denom = omega_p ** 4 * (s.omega * i.q_loaded + i.omega * s.q_loaded)
    base = ((nl.gamma_nl * pump.power) ** 2 * wg.v_g ** 4
            * s.omega * i.omega * q_factor / denom)
    if isinstance(structure, SingleRing):
        return 64.0 * base / structure.length ** 2
    cp = structure.coupler
    geo = (cp.length / (structure.length1 * structure.length2)) ** 2
    if hasattr(cp, "kappa"):  # directional coupler
        osc = (1.0 - float(sinc(4.0 * cp.kappa * cp.length))) ** 2
        return 4.0 * base * geo * osc
    return 16.0 * base * geo


def pair_rate_finesse_form(structure: StructureSpec, triple: ResonanceTriple,
                           pump: CWPump, nl: NonlinearSpec) -> float:
    """CW rate in terms of resonator finesses, valid at critical
    coupling where the peak intensity enhancement approaches F/pi.

    Geometry factors: L^2/4 (ring), L_DC^2/64, L_MZI^2/16.
    """
    _validate_triple(structure, triple, distinct=True)
    omega_p = _pump_frequency(triple, pump)
    s, i, p = triple.signal, triple.idler, triple.pump
    if isinstance(structure, SingleRing):
        geometry = structure.length ** 2 / 4.0
    elif hasattr(structure.coupler, "kappa"):
        geometry = structure.coupler.length ** 2 / 64.0
    else:
        geometry = structure.coupler.length ** 2 / 16.0
    pi = math.pi
    return ((nl.gamma_nl * pump.power / omega_p) ** 2
            * (s.finesse / pi) * (i.finesse / pi) * (p.finesse / pi) ** 2
            * s.gamma * i.gamma / (s.gamma + i.gamma)
            * s.omega * i.omega * geometry)


def ratio_to_ring(structure_kind: str, length1: float, length2: float,
                  coupler_length: float, ring_length: float) -> float:
    """Closed-form CW-rate ratio of a coupled-resonator structure to a
    single ring with matched enhancements and linewidths.

    DC: (L L_DC / (4 L1 L2))^2;  MZI: (L L_MZI / (2 L1 L2))^2.
    With L1 = L2 = 2L and a coupler of length pi*R these give 1/1024
    and 1/256.
    """
    kind = structure_kind.lower()
    if kind == "dc":
        factor = 4.0
    elif kind == "mzi":
        factor = 2.0
    else:
        raise ValueError(f"structure_kind must be 'dc' or 'mzi', got "
                         f"{structure_kind!r}")
    return (ring_length * coupler_length / (factor * length1 * length2)) ** 2


# ------------------------------------------------- pulsed pump, biphoton

def _simpson_weights(grid: np.ndarray) -> np.ndarray:
    """Composite Simpson weights on a uniform grid (odd point count;
    the final interval falls back to trapezoid when the count is even)."""
    n = grid.size
    if n < 3:
        h = grid[-1] - grid[0] if n == 2 else 0.0
        return np.array([0.5 * h] * n) if n == 2 else np.zeros(1)
    h = grid[1] - grid[0]
    m = n if n % 2 == 1 else n - 1
    w = np.zeros(n)
    w[0:m] = h / 3.0
    w[1:m - 1:2] *= 4.0
    w[2:m - 1:2] *= 2.0
    w[m - 1] = h / 3.0
    if m != n:  # trailing trapezoid panel
        w[-2] += 0.5 * h
        w[-1] += 0.5 * h
    return w


class _PulsedSfwmEngine:
    """Shared machinery of pairs_per_pulse and the joint spectral
    amplitude.

    The pair-number integrand concentrates on the energy-conservation
    anti-diagonal w1 + w2 = 2 w_P with a width set by the pump, so the
    integration grid is a tensor product in (w1, w1 + w2): uniform in
    both, each resolving its own scale.
    """

    def __init__(self, structure: StructureSpec, triple: ResonanceTriple,
                 pump: PulsedPump, nl: NonlinearSpec,
                 window_linewidths: float = 12.0):
        if structure.waveguide.beta2 != 0.0:
            raise ValueError("pulsed-pump integrals are validated only for "
                             "beta2 = 0 (phase matched)")
        _validate_triple(structure, triple, distinct=False)
        nl.check_s_perp(triple.pump.omega)
        self.overlap = SpatialOverlapModel(structure)
        self.single = isinstance(structure, SingleRing)
        self.g1, self.g2 = _amplitude_models(structure, triple)
        self.pump = pump
        self.nl = nl
        self.omega_p = triple.pump.omega
        self.windows = _merged_windows([triple.signal, triple.idler],
                                       window_linewidths)
        self.min_gamma = min(triple.signal.gamma, triple.idler.gamma)
        self.window_linewidths = window_linewidths
        self.sum_range = (2.0 * pump.omega_grid[0], 2.0 * pump.omega_grid[-1])
        self.prefactor = (math.sqrt(2.0) * HBAR * pump.mean_photons
                          * nl.gamma_nl / (4.0 * math.pi * self.omega_p))

    def _amp_pair(self, w, slot: int):
        if self.single:
            return (self.g1(w), 0.0)
        if slot < 2:
            return (0.0, self.g2(w))
        return (self.g1(w), 0.0)

    def joint_raw(self, omega1, omega2, n_pump: int):
        """Unnormalized joint spectral amplitude on broadcastable
        frequency arrays; int int |.|^2 equals the pair number."""
        w1 = np.asarray(omega1, dtype=float)
        w2 = np.asarray(omega2, dtype=float)
        total = w1 + w2
        w3_grid = np.linspace(self.pump.omega_grid[0],
                              self.pump.omega_grid[-1], n_pump)
        weights = _simpson_weights(w3_grid)
        phi3 = self.pump.phi(w3_grid)
        acc = np.zeros(np.broadcast(w1, w2).shape, dtype=complex)
        # the signal/idler polynomial does not involve the pump variable
        poly_12 = self.overlap.pair_polynomial(
            self._amp_pair(w1, 0), self._amp_pair(w2, 1), conjugate=True)
        for k in range(n_pump):
            w3 = w3_grid[k]
            w4 = total - w3
            pump_weight = phi3[k] * self.pump.phi(w4)
            if not np.any(pump_weight):
                continue
            poly_34 = self.overlap.pair_polynomial(
                self._amp_pair(w3, 2), self._amp_pair(w4, 3),
                conjugate=False)
            j = self.overlap.j_from_pair_polynomials(poly_12, poly_34, 0.0)
            acc += weights[k] * pump_weight * np.sqrt(w3 * w4) * j
        return self.prefactor * np.sqrt(w1 * w2) * acc

    def pair_number_on(self, n1: int, n_sum: int, n_pump: int) -> float:
        lo_s, hi_s = self.sum_range
        s_grid = np.linspace(lo_s, hi_s, n_sum)
        s_weights = _simpson_weights(s_grid)
        # the joint density varies on the scale of the narrowest line in
        # every window, so sample all windows at that density
        h_target = (2.0 * self.window_linewidths * self.min_gamma
                    / (n1 - 1))
        parts = []
        for lo, hi in self.windows:
            n_w = max(n1, int(math.ceil((hi - lo) / h_target)) + 1)
            if n_w % 2 == 0:
                n_w += 1
            w1 = np.linspace(lo, hi, n_w)[:, None]
            density = np.abs(self.joint_raw(w1, s_grid[None, :] - w1,
                                            n_pump)) ** 2
            inner = density @ s_weights
            parts.append(float(_simpson_weights(w1[:, 0]) @ inner))
        return math.fsum(parts)

    def pair_number(self, rel_change: float = 0.01,
                    max_refinements: int = 5,
                    start: tuple[int, int, int] = (65, 49, 49)):
        """Refine the tensor grids until the pair number is stable to
        ``rel_change``; returns (value, grid sizes used)."""
        n1, n_sum, n_pump = start
        prev = self.pair_number_on(n1, n_sum, n_pump)
        change = math.inf
        for _ in range(max_refinements):
            n1, n_sum, n_pump = 2 * n1 - 1, 2 * n_sum - 1, 2 * n_pump - 1
            cur = self.pair_number_on(n1, n_sum, n_pump)
            if cur == 0.0 or abs(cur - prev) <= rel_change * abs(cur):
                return cur, (n1, n_sum, n_pump)
            change = abs(cur - prev) / abs(cur)
            prev = cur
        raise GridResolutionError(
            f"pair number did not stabilize to {rel_change:.1%} under grid "
            f"refinement (last grids {n1}x{n_sum}x{n_pump}, last change "
            f"{change:.2%})")


def pairs_per_pulse(structure: StructureSpec, triple: ResonanceTriple,
                    pump: PulsedPump, nl: NonlinearSpec,
                    rel_change: float = 0.01,
                    window_linewidths: float = 12.0,
                    max_refinements: int = 5) -> float:
    """Number of generated pairs per pump pulse, |beta|^2.

    Low-gain expression: valid (and warned about) only for |beta|^2
    well below 1.  Scales with the squared pulse energy through the
    mean photon number, and reproduces the CW rate as
    |beta|^2 / effective_duration when the pump bandwidth is narrow
    compared to the resonance linewidths.
    """
    if nl.gamma_nl == 0.0:
        return 0.0
    engine = _PulsedSfwmEngine(structure, triple, pump, nl, window_linewidths)
    beta_sq, _ = engine.pair_number(rel_change, max_refinements)
    if beta_sq > 0.1:
        warnings.warn(f"|beta|^2 = {beta_sq:.3g} is outside the low-gain "
                      "regime; pair statistics are no longer Poissonian",
                      stacklevel=2)
    return beta_sq


@dataclass(frozen=True, eq=False)
class BiphotonResult:
    """Joint spectral amplitude of the generated pair.

    ``phi`` is normalized so the internal quadrature of |phi|^2 over
    the signal/idler windows is 1; ``beta_sq`` is the pre-normalization
    integral, i.e. the pairs per pulse.  Marginals are spectral
    densities of each photon on the corresponding grid.
    """
    omega1: np.ndarray
    omega2: np.ndarray
    phi: np.ndarray
    beta_sq: float
    norm_residual: float
    marginal1: np.ndarray
    marginal2: np.ndarray


def _default_jsa_grid(omega_p: float, triple: ResonanceTriple,
                      n_points: int, window_linewidths: float) -> np.ndarray:
    """Union of the signal and idler windows and their mirrors about the
    energy-conservation anti-diagonal, so the grid is symmetric under
    w -> 2 w_P - w and points land on the correlation ridge exactly."""
    spans = []
    for r in (triple.signal, triple.idler):
        half = window_linewidths * r.gamma
        spans.append((r.omega - half, r.omega + half))
        spans.append((2.0 * omega_p - r.omega - half,
                      2.0 * omega_p - r.omega + half))
    spans.sort()
    merged = [list(spans[0])]
    for lo, hi in spans[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return np.concatenate([np.linspace(lo, hi, n_points)
                           for lo, hi in merged])


def biphoton_wavefunction(structure: StructureSpec, triple: ResonanceTriple,
                          pump: PulsedPump, nl: NonlinearSpec,
                          grid2d=None, n_points: int = 121,
                          window_linewidths: float = 12.0,
                          rel_change: float = 0.01,
                          max_refinements: int = 5) -> BiphotonResult:
    """Normalized joint spectral amplitude phi(w1, w2) of the pair.

    The default rectangular grid covers the signal and idler windows
    and is mirror-symmetric about the energy-conservation anti-diagonal
    so that grid points hit the correlation ridge exactly.  The
    normalization integral runs on the anti-diagonal-adapted internal
    grids (refined as in :func:`pairs_per_pulse`), not on the plotting
    grid, so narrow pumps are handled correctly.
    """
    if nl.gamma_nl == 0.0:
        raise ValueError("biphoton wavefunction undefined for gamma_nl = 0")
    engine = _PulsedSfwmEngine(structure, triple, pump, nl, window_linewidths)
    beta_sq, (n1, n_sum, n_pump) = engine.pair_number(rel_change,
                                                      max_refinements)

    if grid2d is not None:
        omega1 = np.asarray(grid2d[0], dtype=float)
        omega2 = np.asarray(grid2d[1], dtype=float)
    else:
        omega1 = _default_jsa_grid(engine.omega_p, triple, n_points,
                                   window_linewidths)
        omega2 = (2.0 * engine.omega_p - omega1)[::-1]

    phi_raw = engine.joint_raw(omega1[:, None], omega2[None, :], n_pump)
    scale = math.sqrt(beta_sq)
    phi = phi_raw / scale

    # Marginals on the internal anti-diagonal scheme (resolves the ridge).
    s_grid = np.linspace(*engine.sum_range, n_sum)
    s_weights = _simpson_weights(s_grid)
    m1_raw = engine.joint_raw(omega1[:, None], s_grid[None, :] - omega1[:, None],
                              n_pump)
    marginal1 = (np.abs(m1_raw) ** 2 @ s_weights) / beta_sq
    m2_raw = engine.joint_raw(s_grid[None, :] - omega2[:, None], omega2[:, None],
                              n_pump)
    marginal2 = (np.abs(m2_raw) ** 2 @ s_weights) / beta_sq

    # |phi|^2 integrates to 1 on the defining scheme by construction;
    # re-running that quadrature makes the residual an actual number.
    recomputed = engine.pair_number_on(n1, n_sum, n_pump)
    residual = abs(recomputed / beta_sq - 1.0)
    return BiphotonResult(omega1, omega2, phi, beta_sq, residual,
                          marginal1, marginal2)
