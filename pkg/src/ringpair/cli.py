"""Command-line front end.

Five analyses, each driven by a config file and writing a deterministic
artifact (CSV with a JSON metadata sidecar, or a single JSON report):

    ringpair spectrum --config run.ini [--out PATH] [--format csv|json]
    ringpair enhance  ...
    ringpair fields   ...
    ringpair rates    ...
    ringpair biphoton ...

Exit codes: 0 success, 2 config error, 3 numeric error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import network, sfwm
from .config import RunConfig, config_to_resolved, load_config
from .coupler import DirectionalCoupler, MachZehnder
from .errors import (ConfigError, DegenerateStructureError,
                     EnergyConservationError, NumericError)
from .network import DoubleRacetrack, SingleRing, find_resonances
from .sfwm import CWPump, PulsedPump, ResonanceTriple
from .units import C_VACUUM, HBAR, TWO_PI


def _fmt(x: float) -> str:
    return f"{x:.12e}"


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) if isinstance(v, float) else v
                             for v in row])


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(cfg: RunConfig, path: str, fmt: str, header, rows,
          extra: dict | None = None) -> None:
    """Write rows as CSV (+ resolved-config sidecar) or as one JSON."""
    resolved = config_to_resolved(cfg)
    if fmt == "csv":
        _write_csv(path, header, rows)
        meta = {"config": resolved}
        if extra:
            meta.update(extra)
        _write_json(path + ".meta.json", meta)
    else:
        payload = {"config": resolved,
                   "columns": header,
                   "rows": [[v for v in row] for row in rows]}
        if extra:
            payload.update(extra)
        _write_json(path, payload)


def _sweep_grid(cfg: RunConfig) -> np.ndarray:
    s = cfg.sweep
    if s.points == 1:
        return np.array([0.5 * (s.omega_start + s.omega_stop)])
    return np.linspace(s.omega_start, s.omega_stop, s.points)


def _lambda_nm(omega: float) -> float:
    return TWO_PI * C_VACUUM / omega * 1e9


# ------------------------------------------------------------- commands

def cmd_spectrum(cfg: RunConfig, threads: int, path: str, fmt: str) -> None:
    grid = _sweep_grid(cfg)
    st = cfg.structure
    double = isinstance(st, DoubleRacetrack)
    t_i = network.spectrum(st, grid, "in", "through", threads)
    if double:
        t_iii = network.spectrum(st, grid, "in", "drop", threads)
        t_ii = network.spectrum(st, grid, "add", "drop", threads)
        t_iv = network.spectrum(st, grid, "add", "through", threads)
    else:
        t_ii = t_iii = t_iv = np.zeros_like(t_i)
    rows = [(float(w), _lambda_nm(w), float(a), float(b), float(c), float(d))
            for w, a, b, c, d in zip(grid, t_i, t_ii, t_iii, t_iv)]
    _emit(cfg, path, fmt,
          ["omega_rad_s", "lambda_nm", "T_I", "T_II", "T_III", "T_IV"], rows)


def cmd_enhance(cfg: RunConfig, threads: int, path: str, fmt: str) -> None:
    grid = _sweep_grid(cfg)
    st = cfg.structure
    fe_in_1 = network.intensity_enhancement(st, grid, 1, "in", threads)
    if isinstance(st, DoubleRacetrack):
        fe_add_2 = network.intensity_enhancement(st, grid, 2, "add", threads)
        fe_in_2 = network.intensity_enhancement(st, grid, 2, "in", threads)
        fe_add_1 = network.intensity_enhancement(st, grid, 1, "add", threads)
    else:
        fe_add_2 = fe_in_2 = fe_add_1 = np.zeros_like(fe_in_1)
    rows = [(float(w), _lambda_nm(w), float(a), float(b), float(c), float(d))
            for w, a, b, c, d in zip(grid, fe_in_1, fe_add_2, fe_in_2,
                                     fe_add_1)]
    _emit(cfg, path, fmt,
          ["omega_rad_s", "lambda_nm", "fe_sq_in_res1", "fe_sq_add_res2",
           "fe_sq_in_res2", "fe_sq_add_res1"], rows)


def cmd_fields(cfg: RunConfig, threads: int, path: str, fmt: str) -> None:
    st = cfg.structure
    if not isinstance(st, DoubleRacetrack) or not isinstance(
            st.coupler, (DirectionalCoupler, MachZehnder)):
        raise ConfigError("the fields command needs a double racetrack with "
                          "a DC or MZI coupler")
    port = cfg.fields.port
    res_index = 1 if port == "in" else 2
    if cfg.fields.omega == "auto":
        omega, _ = network.find_circulating_peak(
            st, port, res_index, cfg.sweep.omega_start, cfg.sweep.omega_stop)
    else:
        omega = float(cfg.fields.omega)
    r = network.solve_linear(st, omega, port)
    cp = st.coupler
    z = np.linspace(0.0, cp.length, cfg.fields.z_points)
    if isinstance(cp, DirectionalCoupler):
        env = cp.envelopes(r.circ1, r.circ2, z)
        up = np.abs(env.f_up) ** 2
        lo = np.abs(env.f_lo) ** 2
    else:
        env = cp.envelopes(r.circ1, r.circ2)
        up = np.full_like(z, abs(env.f_up) ** 2)
        lo = np.full_like(z, abs(env.f_lo) ** 2)
    rows = [(float(zz), float(u), float(l)) for zz, u, l in zip(z, up, lo)]
    _emit(cfg, path, fmt,
          ["z_m", "intensity_up", "intensity_lo"], rows,
          extra={"omega_rad_s": omega, "lambda_nm": _lambda_nm(omega),
                 "input_port": port})


def _resolve_pump_omega(cfg: RunConfig):
    if cfg.pump.omega != "auto":
        return float(cfg.pump.omega)
    return 0.5 * (cfg.sweep.omega_start + cfg.sweep.omega_stop)


def _build_triple(cfg: RunConfig) -> ResonanceTriple:
    """Pump resonance nearest the requested frequency plus the best
    energy-conserving signal/idler pair in the sweep band."""
    st = cfg.structure
    band = (cfg.sweep.omega_start, cfg.sweep.omega_stop)
    res = find_resonances(st, band)
    target = _resolve_pump_omega(cfg)
    pump_pool = [r for r in res if r.resonator_index == 1]
    pair_index = 1 if isinstance(st, SingleRing) else 2
    pair_pool = [r for r in res if r.resonator_index == pair_index]
    if not pump_pool or len(pair_pool) < 3:
        raise EnergyConservationError(
            "not enough resonances in the sweep band to form a triple")
    pump_res = min(pump_pool, key=lambda r: abs(r.omega - target))
    best = None
    for i, s in enumerate(pair_pool):
        for ii in range(i + 1, len(pair_pool)):
            idl = pair_pool[ii]
            if _same(s, pump_res) or _same(idl, pump_res):
                continue
            miss = abs(2.0 * pump_res.omega - s.omega - idl.omega)
            if best is None or miss < best[0]:
                best = (miss, s, idl)
    tol = cfg.rates.energy_tolerance
    if tol == "auto":
        tol = None
    try:
        return ResonanceTriple(pump_res, best[1], best[2],
                               energy_tolerance=tol)
    except EnergyConservationError as exc:
        lam = _lambda_nm(pump_res.omega)
        raise EnergyConservationError(
            f"no signal/idler pair conserves energy with the pump at "
            f"{lam:.3f} nm; nearest miss 2w_P - w_S - w_I = "
            f"{best[0]:.6g} rad/s ({best[0] / TWO_PI / 1e9:.3f} GHz)"
        ) from exc


def _same(a, b):
    return (a.resonator_index == b.resonator_index
            and a.mode_index == b.mode_index)


def _resonance_dict(r) -> dict:
    return {"resonator": r.resonator_index, "mode": r.mode_index,
            "omega_rad_s": r.omega, "lambda_nm": _lambda_nm(r.omega),
            "gamma_rad_s": r.gamma, "fe_max_sq": r.fe_max_sq,
            "finesse": r.finesse, "fsr_hz": r.fsr,
            "q_loaded": r.q_loaded, "q_coupling": r.q_coupling}


def cmd_rates(cfg: RunConfig, threads: int, path: str, fmt: str) -> None:
    st = cfg.structure
    if cfg.pump.mode != "cw":
        raise ConfigError("the rates command needs a CW pump")
    triple = _build_triple(cfg)
    pump = CWPump(cfg.pump.power)
    nl = cfg.nonlinear
    try:
        nl.check_s_perp(triple.pump.omega)
    except ValueError as exc:
        raise ConfigError(f"[nonlinear] {exc}") from exc
    report: dict = {
        "config": config_to_resolved(cfg),
        "triple": {"pump": _resonance_dict(triple.pump),
                   "signal": _resonance_dict(triple.signal),
                   "idler": _resonance_dict(triple.idler),
                   "energy_mismatch_rad_s": triple.energy_mismatch},
    }
    methods = (["analytic", "quadrature"] if cfg.rates.method == "both"
               else [cfg.rates.method])
    for m in methods:
        res = sfwm.pair_rate_cw(st, triple, pump, nl, method=m,
                                window_linewidths=cfg.rates.window_linewidths)
        report[f"rate_{m}_pairs_per_s"] = res.rate_pairs_per_s
        report[f"j_spatial_{m}_re_m"] = res.j_spatial.real
        report[f"j_spatial_{m}_im_m"] = res.j_spatial.imag
    report["fe_product"] = (triple.signal.fe_max_sq * triple.idler.fe_max_sq
                            * triple.pump.fe_max_sq ** 2)
    report["rate_q_form_pairs_per_s"] = sfwm.pair_rate_q_form(
        st, triple, pump, nl)
    report["rate_finesse_form_pairs_per_s"] = sfwm.pair_rate_finesse_form(
        st, triple, pump, nl)
    if "rate_analytic_pairs_per_s" in report \
            and "rate_quadrature_pairs_per_s" in report:
        ra = report["rate_analytic_pairs_per_s"]
        rq = report["rate_quadrature_pairs_per_s"]
        report["analytic_quadrature_rel_diff"] = (
            abs(ra - rq) / ra if ra else 0.0)
    if isinstance(st, DoubleRacetrack):
        kind = ("dc" if isinstance(st.coupler, DirectionalCoupler)
                else "mzi" if isinstance(st.coupler, MachZehnder) else None)
        if kind:
            # matched-geometry convention: the reference ring is half a
            # racetrack so both share one bending radius
            report["ratio_to_ring"] = sfwm.ratio_to_ring(
                kind, st.length1, st.length2, st.coupler.length,
                st.length1 / 2.0)
    _write_json(path, report)


def cmd_biphoton(cfg: RunConfig, threads: int, path: str, fmt: str) -> None:
    st = cfg.structure
    if cfg.pump.mode != "pulsed":
        raise ConfigError("the biphoton command needs a pulsed pump")
    triple = _build_triple(cfg)
    center = (triple.pump.omega if cfg.pump.omega == "auto"
              else float(cfg.pump.omega))
    try:
        cfg.nonlinear.check_s_perp(triple.pump.omega)
    except ValueError as exc:
        raise ConfigError(f"[nonlinear] {exc}") from exc
    mean_photons = cfg.pump.mean_photons
    if mean_photons is None:
        if cfg.pump.power is None:
            raise ConfigError("[pump] needs mean_photons or power")
        # interpret power as average power over the effective duration
        probe = PulsedPump.gaussian(center, cfg.pump.bandwidth, 1.0)
        mean_photons = (cfg.pump.power * probe.effective_duration()
                        / (HBAR * center))
    pump = PulsedPump.gaussian(center, cfg.pump.bandwidth, mean_photons)
    res = sfwm.biphoton_wavefunction(
        st, triple, pump, cfg.nonlinear,
        n_points=cfg.biphoton.points,
        window_linewidths=cfg.biphoton.window_linewidths)
    dens = np.abs(res.phi) ** 2
    summary = {
        "config": config_to_resolved(cfg),
        "beta_sq": res.beta_sq,
        "normalization_residual": res.norm_residual,
        "mean_photons": mean_photons,
        "pump_center_rad_s": center,
        "pump_bandwidth_rad_s": cfg.pump.bandwidth,
        "marginal1_fwhm_rad_s": _half_max_width(res.omega1, res.marginal1),
        "marginal2_fwhm_rad_s": _half_max_width(res.omega2, res.marginal2),
        "triple": {"pump": _resonance_dict(triple.pump),
                   "signal": _resonance_dict(triple.signal),
                   "idler": _resonance_dict(triple.idler)},
    }
    if fmt == "json":
        summary["omega1_rad_s"] = [float(w) for w in res.omega1]
        summary["omega2_rad_s"] = [float(w) for w in res.omega2]
        summary["abs_phi_sq"] = [[float(v) for v in row] for row in dens]
        _write_json(path, summary)
    else:
        rows = [(float(w1), float(w2), float(dens[i, j]))
                for i, w1 in enumerate(res.omega1)
                for j, w2 in enumerate(res.omega2)]
        _write_csv(path, ["omega1_rad_s", "omega2_rad_s", "abs_phi_sq"], rows)
        _write_json(path + ".summary.json", summary)


def _half_max_width(grid: np.ndarray, values: np.ndarray) -> float:
    """FWHM of the tallest peak by linear interpolation of the half-max
    crossings nearest the maximum."""
    i = int(np.argmax(values))
    half = values[i] / 2.0
    lo = grid[0]
    for k in range(i, 0, -1):
        if values[k - 1] < half <= values[k]:
            lo = np.interp(half, [values[k - 1], values[k]],
                           [grid[k - 1], grid[k]])
            break
    hi = grid[-1]
    for k in range(i, len(values) - 1):
        if values[k + 1] < half <= values[k]:
            hi = np.interp(half, [values[k + 1], values[k]],
                           [grid[k + 1], grid[k]])
            break
    return float(hi - lo)


_COMMANDS = {"spectrum": cmd_spectrum, "enhance": cmd_enhance,
             "fields": cmd_fields, "rates": cmd_rates,
             "biphoton": cmd_biphoton}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ringpair",
        description="Linear response and photon-pair generation in "
                    "linearly uncoupled racetrack resonators.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("spectrum", "port-to-port transmission over the sweep band"),
            ("enhance", "circulating intensity enhancement per resonator"),
            ("fields", "field intensity along the coupler channels"),
            ("rates", "CW pair-generation rates, all closed forms and "
                      "quadrature"),
            ("biphoton", "joint spectral amplitude for a pulsed pump")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="run file (INI)")
        p.add_argument("--out", help="output path (default from [output])")
        p.add_argument("--format", choices=("csv", "json"),
                       help="artifact format (default from [output])")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="sweep parallelism (default: all cores)")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        fmt = args.format or cfg.output.format
        path = args.out or cfg.output.path
        if args.command in ("rates",):
            fmt = "json"  # rates reports are structured
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)
        _COMMANDS[args.command](cfg, max(args.threads, 1), path, fmt)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, DegenerateStructureError, EnergyConservationError,
            ValueError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
