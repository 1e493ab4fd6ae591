"""Run configuration: INI-style files with unit-suffixed values.

A run file has named sections with ``key = value`` pairs; values carry
explicit units ("641 um", "0.23 /cm", "1550.07 nm") and are normalized
to SI/angular on load.  Every emitted artifact embeds the fully
resolved configuration, which :func:`config_from_resolved` can reload
to reproduce the run bit for bit.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from typing import Any

from .coupler import DirectionalCoupler, GenericUnitary, MachZehnder
from .errors import ConfigError
from .network import DoubleRacetrack, SingleRing, StructureSpec
from .sfwm import NonlinearSpec
from .units import (C_VACUUM, parse_angle, parse_angular_frequency,
                    parse_dimensionless, parse_inverse_length, parse_length,
                    parse_power)
from .waveguide import WaveguideModel

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PumpConfig:
    mode: str                      # "cw" | "pulsed"
    power: float | None = None     # W (cw)
    omega: float | str = "auto"    # rad/s or "auto"
    bandwidth: float | None = None  # rad/s, spectral-amplitude std (pulsed)
    mean_photons: float | None = None


@dataclass(frozen=True)
class SweepConfig:
    omega_start: float
    omega_stop: float
    points: int


@dataclass(frozen=True)
class FieldsConfig:
    port: str = "in"
    omega: float | str = "auto"
    z_points: int = 401


@dataclass(frozen=True)
class RatesConfig:
    method: str = "both"           # analytic | quadrature | both
    energy_tolerance: float | str = "auto"
    window_linewidths: float = 12.0


@dataclass(frozen=True)
class BiphotonConfig:
    points: int = 101
    window_linewidths: float = 12.0


@dataclass(frozen=True)
class OutputConfig:
    format: str = "csv"
    path: str = "ringpair_out.csv"


@dataclass(frozen=True)
class RunConfig:
    waveguide: WaveguideModel
    structure: StructureSpec
    pump: PumpConfig
    nonlinear: NonlinearSpec
    sweep: SweepConfig
    output: OutputConfig
    fields: FieldsConfig = field(default_factory=FieldsConfig)
    rates: RatesConfig = field(default_factory=RatesConfig)
    biphoton: BiphotonConfig = field(default_factory=BiphotonConfig)


_REQUIRED = object()


class _Section:
    """Wraps one config section with located error reporting."""

    def __init__(self, name: str, mapping):
        self.name = name
        self.mapping = mapping

    def get(self, key: str, parser=None, default=_REQUIRED):
        if key not in self.mapping:
            if default is _REQUIRED:
                raise ConfigError(f"[{self.name}] missing required key {key!r}")
            return default
        raw = self.mapping[key]
        if parser is None:
            return raw.strip()
        try:
            return parser(raw)
        except ConfigError as exc:
            raise ConfigError(f"[{self.name}] {key}: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(f"[{self.name}] {key}: {exc}") from exc

    def get_int(self, key: str, default=_REQUIRED):
        return int(self.get(key, parse_dimensionless, default))


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number from {text!r}") from exc


def _parse_gamma_nl(text: str) -> float:
    for suffix in ("/W/m", "/(W m)", "/(W*m)", "1/(W m)", "W^-1 m^-1"):
        if text.strip().endswith(suffix):
            text = text.strip()[: -len(suffix)]
            break
    return parse_dimensionless(text)


def load_config(path: str) -> RunConfig:
    """Parse and validate a run file; raises ConfigError with the
    offending section/key on any problem."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh, source=path)
    except OSError:
        raise
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return _build_config(cp)


def _build_config(cp) -> RunConfig:
    def section(name, required=True):
        if not cp.has_section(name):
            if required:
                raise ConfigError(f"missing required section [{name}]")
            return None
        return _Section(name, dict(cp.items(name)))

    wg_sec = section("waveguide")
    if "wavelength0" in wg_sec.mapping:
        omega0 = wg_sec.get("wavelength0", parse_angular_frequency)
    else:
        omega0 = wg_sec.get("frequency0", parse_angular_frequency)
    if "v_g" in wg_sec.mapping:
        v_g = wg_sec.get("v_g", lambda s: parse_dimensionless(
            s.replace("m/s", "").strip()))
    else:
        v_g = C_VACUUM / wg_sec.get("group_index", parse_dimensionless)
    try:
        waveguide = WaveguideModel(
            omega0=omega0,
            n_eff=wg_sec.get("n_eff", parse_dimensionless),
            v_g=v_g,
            beta2=wg_sec.get("beta2", parse_dimensionless, 0.0),
            xi=wg_sec.get("loss", parse_inverse_length, 0.0))
    except ValueError as exc:
        raise ConfigError(f"[waveguide] {exc}") from exc

    st_sec = section("structure")
    kind = st_sec.get("kind").lower()
    try:
        if kind == "single_ring":
            structure = SingleRing(
                length=st_sec.get("length", parse_length),
                sigma_bus=st_sec.get("sigma", parse_dimensionless),
                waveguide=waveguide)
        elif kind == "double_racetrack":
            structure = DoubleRacetrack(
                length1=st_sec.get("length1", parse_length),
                length2=st_sec.get("length2", parse_length),
                sigma_bus1=st_sec.get("sigma1", parse_dimensionless),
                sigma_bus2=st_sec.get("sigma2", parse_dimensionless),
                coupler=_build_coupler(section("coupler")),
                waveguide=waveguide,
                geometry_split=st_sec.get("geometry_split",
                                          parse_dimensionless, 0.5))
        else:
            raise ConfigError(f"[structure] unknown kind {kind!r}")
    except ValueError as exc:
        raise ConfigError(f"[structure] {exc}") from exc

    pump = _build_pump(section("pump", required=False))
    nl_sec = section("nonlinear", required=False)
    if nl_sec is None:
        nonlinear = NonlinearSpec(0.0)
    else:
        try:
            nonlinear = NonlinearSpec(
                gamma_nl=nl_sec.get("gamma_nl", _parse_gamma_nl, 0.0),
                s_perp=nl_sec.get("s_perp", parse_dimensionless, None))
        except ValueError as exc:
            raise ConfigError(f"[nonlinear] {exc}") from exc

    sw = section("sweep")
    sweep = SweepConfig(
        omega_start=min(sw.get("start", parse_angular_frequency),
                        sw.get("stop", parse_angular_frequency)),
        omega_stop=max(sw.get("start", parse_angular_frequency),
                       sw.get("stop", parse_angular_frequency)),
        points=sw.get_int("points", 2001))
    if sweep.points < 1:
        raise ConfigError("[sweep] points must be >= 1")
    if sweep.omega_stop < sweep.omega_start:
        raise ConfigError("[sweep] empty frequency band")

    out = section("output", required=False)
    output = OutputConfig() if out is None else OutputConfig(
        format=out.get("format", None, "csv").lower(),
        path=out.get("path", None, "ringpair_out.csv"))
    if output.format not in ("csv", "json"):
        raise ConfigError(f"[output] unknown format {output.format!r}")

    fd = section("fields", required=False)
    fields_cfg = FieldsConfig() if fd is None else FieldsConfig(
        port=fd.get("port", None, "in").lower(),
        omega=_auto_or(fd, "frequency", parse_angular_frequency),
        z_points=fd.get_int("z_points", 401))
    if fields_cfg.port not in ("in", "add"):
        raise ConfigError("[fields] port must be in|add")

    rt = section("rates", required=False)
    rates_cfg = RatesConfig() if rt is None else RatesConfig(
        method=rt.get("method", None, "both").lower(),
        energy_tolerance=_auto_or(rt, "energy_tolerance",
                                  parse_angular_frequency),
        window_linewidths=rt.get("window_linewidths", parse_dimensionless,
                                 12.0))
    if rates_cfg.method not in ("analytic", "quadrature", "both"):
        raise ConfigError(f"[rates] unknown method {rates_cfg.method!r}")

    bp = section("biphoton", required=False)
    biphoton_cfg = BiphotonConfig() if bp is None else BiphotonConfig(
        points=bp.get_int("points", 101),
        window_linewidths=bp.get("window_linewidths", parse_dimensionless,
                                 12.0))

    return RunConfig(waveguide, structure, pump, nonlinear, sweep, output,
                     fields_cfg, rates_cfg, biphoton_cfg)


def _auto_or(sec, key, parser):
    raw = sec.get(key, None, "auto")
    if isinstance(raw, str) and raw.strip().lower() == "auto":
        return "auto"
    return sec.get(key, parser)


def _build_coupler(sec):
    if sec is None:
        raise ConfigError("double_racetrack structures need a [coupler] "
                          "section")
    kind = sec.get("kind").lower()
    try:
        if kind == "dc":
            return DirectionalCoupler(
                kappa=sec.get("kappa", parse_inverse_length),
                length=sec.get("length", parse_length))
        if kind == "mzi":
            return MachZehnder(
                sigma_sx=sec.get("sigma_sx", parse_dimensionless),
                sigma_dx=sec.get("sigma_dx", parse_dimensionless),
                delta_phi=sec.get("delta_phi", parse_angle),
                length=sec.get("length", parse_length))
        if kind == "unitary":
            if "x11" in sec.mapping:
                return GenericUnitary(
                    x11=sec.get("x11", _parse_complex),
                    x12=sec.get("x12", _parse_complex),
                    x21=sec.get("x21", _parse_complex),
                    x22=sec.get("x22", _parse_complex))
            return GenericUnitary.from_cross_coupling(
                sec.get("x12", _parse_complex))
    except ValueError as exc:
        raise ConfigError(f"[coupler] {exc}") from exc
    raise ConfigError(f"[coupler] unknown kind {kind!r}")


def _build_pump(sec) -> PumpConfig:
    if sec is None:
        return PumpConfig(mode="cw", power=1e-3)
    mode = sec.get("mode", None, "cw").lower()
    if mode == "cw":
        return PumpConfig(
            mode="cw",
            power=sec.get("power", parse_power, 1e-3),
            omega=_auto_or(sec, "frequency", parse_angular_frequency))
    if mode == "pulsed":
        return PumpConfig(
            mode="pulsed",
            power=sec.get("power", parse_power, None),
            omega=_auto_or(sec, "center", parse_angular_frequency),
            bandwidth=sec.get("bandwidth", parse_angular_frequency),
            mean_photons=sec.get("mean_photons", parse_dimensionless, None))
    raise ConfigError(f"[pump] unknown mode {mode!r}")


# ------------------------------------------------ resolved round trip

def config_to_resolved(cfg: RunConfig) -> dict[str, Any]:
    """Fully resolved configuration (SI units, angular frequencies) as a
    JSON-serializable dict; embedded in every artifact."""
    wg = cfg.waveguide
    d: dict[str, Any] = {
        "waveguide": {"omega0_rad_s": wg.omega0, "n_eff": wg.n_eff,
                      "v_g_m_s": wg.v_g, "beta2_s2_m": wg.beta2,
                      "xi_1_m": wg.xi},
        "pump": {"mode": cfg.pump.mode, "power_w": cfg.pump.power,
                 "omega_rad_s": cfg.pump.omega,
                 "bandwidth_rad_s": cfg.pump.bandwidth,
                 "mean_photons": cfg.pump.mean_photons},
        "nonlinear": {"gamma_nl_1_w_m": cfg.nonlinear.gamma_nl,
                      "s_perp": cfg.nonlinear.s_perp},
        "sweep": {"omega_start_rad_s": cfg.sweep.omega_start,
                  "omega_stop_rad_s": cfg.sweep.omega_stop,
                  "points": cfg.sweep.points},
        "output": {"format": cfg.output.format, "path": cfg.output.path},
        "fields": {"port": cfg.fields.port, "omega_rad_s": cfg.fields.omega,
                   "z_points": cfg.fields.z_points},
        "rates": {"method": cfg.rates.method,
                  "energy_tolerance_rad_s": cfg.rates.energy_tolerance,
                  "window_linewidths": cfg.rates.window_linewidths},
        "biphoton": {"points": cfg.biphoton.points,
                     "window_linewidths": cfg.biphoton.window_linewidths},
    }
    st = cfg.structure
    if isinstance(st, SingleRing):
        d["structure"] = {"kind": "single_ring", "length_m": st.length,
                          "sigma": st.sigma_bus}
    else:
        d["structure"] = {"kind": "double_racetrack",
                          "length1_m": st.length1, "length2_m": st.length2,
                          "sigma1": st.sigma_bus1, "sigma2": st.sigma_bus2,
                          "geometry_split": st.geometry_split}
        cp = st.coupler
        if isinstance(cp, DirectionalCoupler):
            d["coupler"] = {"kind": "dc", "kappa_1_m": cp.kappa,
                            "length_m": cp.length}
        elif isinstance(cp, MachZehnder):
            d["coupler"] = {"kind": "mzi", "sigma_sx": cp.sigma_sx,
                            "sigma_dx": cp.sigma_dx,
                            "delta_phi_rad": cp.delta_phi,
                            "length_m": cp.length}
        else:
            d["coupler"] = {"kind": "unitary",
                            "x11_re": cp.x11.real, "x11_im": cp.x11.imag,
                            "x12_re": cp.x12.real, "x12_im": cp.x12.imag,
                            "x21_re": cp.x21.real, "x21_im": cp.x21.imag,
                            "x22_re": cp.x22.real, "x22_im": cp.x22.imag}
    return d


def config_from_resolved(d: dict[str, Any]) -> RunConfig:
    """Inverse of :func:`config_to_resolved`."""
    w = d["waveguide"]
    waveguide = WaveguideModel(w["omega0_rad_s"], w["n_eff"], w["v_g_m_s"],
                               w["beta2_s2_m"], w["xi_1_m"])
    s = d["structure"]
    if s["kind"] == "single_ring":
        structure: StructureSpec = SingleRing(s["length_m"], s["sigma"],
                                              waveguide)
    else:
        c = d["coupler"]
        if c["kind"] == "dc":
            coupler = DirectionalCoupler(c["kappa_1_m"], c["length_m"])
        elif c["kind"] == "mzi":
            coupler = MachZehnder(c["sigma_sx"], c["sigma_dx"],
                                  c["delta_phi_rad"], c["length_m"])
        else:
            coupler = GenericUnitary(
                complex(c["x11_re"], c["x11_im"]),
                complex(c["x12_re"], c["x12_im"]),
                complex(c["x21_re"], c["x21_im"]),
                complex(c["x22_re"], c["x22_im"]))
        structure = DoubleRacetrack(s["length1_m"], s["length2_m"],
                                    s["sigma1"], s["sigma2"], coupler,
                                    waveguide, s["geometry_split"])
    p = d["pump"]
    pump = PumpConfig(p["mode"], p["power_w"], p["omega_rad_s"],
                      p["bandwidth_rad_s"], p["mean_photons"])
    n = d["nonlinear"]
    sw = d["sweep"]
    o = d["output"]
    f = d["fields"]
    r = d["rates"]
    b = d["biphoton"]
    return RunConfig(
        waveguide, structure, pump,
        NonlinearSpec(n["gamma_nl_1_w_m"], n["s_perp"]),
        SweepConfig(sw["omega_start_rad_s"], sw["omega_stop_rad_s"],
                    sw["points"]),
        OutputConfig(o["format"], o["path"]),
        FieldsConfig(f["port"], f["omega_rad_s"], f["z_points"]),
        RatesConfig(r["method"], r["energy_tolerance_rad_s"],
                    r["window_linewidths"]),
        BiphotonConfig(b["points"], b["window_linewidths"]))
