"""Shared structures and triples for the test suite.

The "fig-like" double racetrack is the package preset (1 dB/cm silicon
wire, 641/432 um racetracks); the rate benchmarks use higher-finesse
critically coupled geometries so the Lorentzian-approximation formulas
are well inside their validity range.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

import ringpair as rp
from ringpair import presets


@pytest.fixture(scope="session")
def wg_lossless():
    return rp.WaveguideModel(omega0=2 * math.pi * rp.C_VACUUM / 1.55e-6,
                             n_eff=2.4, v_g=rp.C_VACUUM / 4.2, xi=0.0)


@pytest.fixture(scope="session")
def wg_low_loss():
    # 0.05 dB-ish/cm regime used by the rate benchmarks
    return rp.WaveguideModel(omega0=2 * math.pi * rp.C_VACUUM / 1.55e-6,
                             n_eff=2.4, v_g=rp.C_VACUUM / 4.2, xi=5.0)


def ring_triple(ring, separation=1):
    """Pump at the comb line nearest omega0, signal/idler +-separation."""
    wg = ring.waveguide
    band = (wg.omega0 * 0.997, wg.omega0 * 1.003)
    res = rp.find_resonances(ring, band)
    pump = min(res, key=lambda r: abs(r.omega - wg.omega0))
    by_mode = {r.mode_index: r for r in res}
    return rp.ResonanceTriple(pump,
                              by_mode[pump.mode_index + separation],
                              by_mode[pump.mode_index - separation])


def racetrack_triple(structure):
    """Equal-length racetracks: pump on the resonator-1 comb, signal and
    idler on the adjacent resonator-2 lines (energy conserving exactly)."""
    wg = structure.waveguide
    band = (wg.omega0 * 0.997, wg.omega0 * 1.003)
    res = rp.find_resonances(structure, band)
    r1 = [r for r in res if r.resonator_index == 1]
    r2 = {r.mode_index: r for r in res if r.resonator_index == 2}
    pump = min(r1, key=lambda r: abs(r.omega - wg.omega0))
    return rp.ResonanceTriple(pump, r2[pump.mode_index + 1],
                              r2[pump.mode_index - 1])


@pytest.fixture(scope="session")
def critical_ring(wg_low_loss):
    a = wg_low_loss.round_trip_amplitude(600e-6)
    return rp.SingleRing(600e-6, a, wg_low_loss)


@pytest.fixture(scope="session")
def critical_ring_triple(critical_ring):
    return ring_triple(critical_ring)


def critical_racetracks(coupler, wg, length=800e-6):
    a = wg.round_trip_amplitude(length)
    return rp.DoubleRacetrack(length, length, a, a, coupler, wg)


@pytest.fixture(scope="session")
def dc_structure(wg_low_loss):
    dc = rp.DirectionalCoupler(0.064e6, 2 * math.pi / 0.064e6)
    return critical_racetracks(dc, wg_low_loss)


@pytest.fixture(scope="session")
def mzi_structure(wg_low_loss):
    mzi = rp.MachZehnder(2 ** -0.5, 2 ** -0.5, math.pi, 100e-6)
    return critical_racetracks(mzi, wg_low_loss)


@pytest.fixture(scope="session")
def fig_structure():
    return presets.racetracks_measured_coupler()


@pytest.fixture(scope="session")
def nl300():
    return rp.NonlinearSpec(300.0)


@pytest.fixture(scope="session")
def pump_1mw():
    return rp.CWPump(1e-3)


def lorentzian(omega, center, fwhm, peak=1.0):
    h2 = 0.25 * fwhm * fwhm
    return peak * h2 / (h2 + (np.asarray(omega) - center) ** 2)
