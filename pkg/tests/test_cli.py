import csv
import json
import math
import os

import numpy as np
import pytest

import ringpair as rp
from ringpair.cli import main
from ringpair.config import config_from_resolved, config_to_resolved, load_config

FIG_WAVEGUIDE = """\
[waveguide]
wavelength0 = 1550.07 nm
n_eff = 2.3868397816
group_index = 4.2
loss = 0.23 /cm
"""

FIG_STRUCTURE = FIG_WAVEGUIDE + """
[structure]
kind = double_racetrack
length1 = 641 um
length2 = 432 um
sigma1 = 0.933
sigma2 = 0.993

[coupler]
kind = unitary
x12 = -0.00161j

[pump]
mode = cw
power = 1 mW

[nonlinear]
gamma_nl = 300 /W/m

[sweep]
start = 1548 nm
stop = 1552 nm
points = 1201
"""

RATES_STRUCTURE = """\
[waveguide]
wavelength0 = 1550.07 nm
n_eff = 2.4
group_index = 4.2
loss = 0.05 /cm

[structure]
kind = double_racetrack
length1 = 800 um
length2 = 800 um
sigma1 = 0.998002
sigma2 = 0.998002

[coupler]
kind = dc
kappa = 0.064 /um
length = 98.174770424681 um

[pump]
mode = cw
power = 1 mW

[nonlinear]
gamma_nl = 300 /W/m

[sweep]
start = 1548 nm
stop = 1552 nm
points = 801
"""


def write_config(tmp_path, body, **output):
    lines = [body, "[output]"]
    for key, value in output.items():
        lines.append(f"{key} = {value}")
    path = tmp_path / "run.ini"
    path.write_text("\n".join(lines), encoding="utf-8")
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestSpectrumCommand:
    def test_columns_and_isolation_claim(self, tmp_path):
        out = tmp_path / "spec.csv"
        cfg = write_config(tmp_path, FIG_STRUCTURE, path=out)
        assert main(["spectrum", "--config", cfg]) == 0
        rows = read_csv(out)
        assert list(rows[0].keys()) == ["omega_rad_s", "lambda_nm", "T_I",
                                        "T_II", "T_III", "T_IV"]
        t_iii = np.array([float(r["T_III"]) for r in rows])
        # In -> Drop stays 30 dB below unity across the whole band
        assert t_iii.max() < 1e-3

    def test_single_point_grid(self, tmp_path):
        body = FIG_STRUCTURE.replace("points = 1201", "points = 1")
        out = tmp_path / "one.csv"
        cfg = write_config(tmp_path, body, path=out)
        assert main(["spectrum", "--config", cfg]) == 0
        assert len(read_csv(out)) == 1

    def test_decoupled_bus_unity(self, tmp_path):
        body = FIG_STRUCTURE.replace("sigma1 = 0.933", "sigma1 = 1.0")
        body = body.replace("sigma2 = 0.993", "sigma2 = 1.0")
        body = body.replace("x12 = -0.00161j", "x12 = 0j")
        body = body.replace("loss = 0.23 /cm", "loss = 0 /cm")
        out = tmp_path / "flat.csv"
        cfg = write_config(tmp_path, body, path=out)
        assert main(["spectrum", "--config", cfg]) == 0
        t_i = [float(r["T_I"]) for r in read_csv(out)]
        assert all(abs(t - 1.0) < 1e-12 for t in t_i)

    def test_deterministic_artifacts(self, tmp_path):
        out = tmp_path / "spec.csv"
        cfg = write_config(tmp_path, FIG_STRUCTURE, path=out)
        assert main(["spectrum", "--config", cfg, "--threads", "1"]) == 0
        first = out.read_bytes()
        meta_first = (tmp_path / "spec.csv.meta.json").read_bytes()
        assert main(["spectrum", "--config", cfg, "--threads", "4"]) == 0
        assert out.read_bytes() == first
        assert (tmp_path / "spec.csv.meta.json").read_bytes() == meta_first

    def test_json_format(self, tmp_path):
        out = tmp_path / "spec.json"
        cfg = write_config(tmp_path, FIG_STRUCTURE, path=out,
                           format="json")
        assert main(["spectrum", "--config", cfg]) == 0
        payload = json.loads(out.read_text())
        assert payload["columns"][0] == "omega_rad_s"
        assert "config" in payload


class TestEnhanceCommand:
    def test_peaks_align_with_dips(self, tmp_path):
        spec_out = tmp_path / "spec.csv"
        enh_out = tmp_path / "enh.csv"
        cfg = write_config(tmp_path, FIG_STRUCTURE, path=spec_out)
        assert main(["spectrum", "--config", cfg]) == 0
        assert main(["enhance", "--config", cfg, "--out", str(enh_out)]) == 0
        spec_rows = read_csv(spec_out)
        enh_rows = read_csv(enh_out)
        t_i = np.array([float(r["T_I"]) for r in spec_rows])
        fe = np.array([float(r["fe_sq_in_res1"]) for r in enh_rows])
        omega = np.array([float(r["omega_rad_s"]) for r in spec_rows])
        step = omega[1] - omega[0]
        assert abs(omega[np.argmin(t_i)] - omega[np.argmax(fe)]) <= step

    def test_no_input_coupling_is_dark(self, tmp_path):
        body = FIG_STRUCTURE.replace("sigma1 = 0.933", "sigma1 = 1.0")
        body = body.replace("loss = 0.23 /cm", "loss = 0 /cm")
        out = tmp_path / "enh.csv"
        cfg = write_config(tmp_path, body, path=out)
        assert main(["enhance", "--config", cfg]) == 0
        fe = [float(r["fe_sq_in_res1"]) for r in read_csv(out)]
        assert all(v == 0.0 for v in fe)

    def test_critical_coupling_peak_near_finesse_over_pi(self, tmp_path):
        body = """\
[waveguide]
wavelength0 = 1550.07 nm
n_eff = 2.4
group_index = 4.2
loss = 0.05 /cm

[structure]
kind = single_ring
length = 600 um
sigma = 0.998501

[sweep]
start = 1549.9 nm
stop = 1550.2 nm
points = 6001
"""
        out = tmp_path / "ring.csv"
        cfg = write_config(tmp_path, body, path=out)
        assert main(["enhance", "--config", cfg]) == 0
        fe = [float(r["fe_sq_in_res1"]) for r in read_csv(out)]
        wg = rp.WaveguideModel(2 * math.pi * rp.C_VACUUM / 1550.07e-9, 2.4,
                               rp.C_VACUUM / 4.2, xi=5.0)
        ring = rp.SingleRing(600e-6, 0.998501, wg)
        res = rp.find_resonances(ring, (wg.omega0 * 0.999,
                                        wg.omega0 * 1.001))
        assert max(fe) == pytest.approx(res[0].finesse / math.pi, rel=0.02)


class TestFieldsCommand:
    def make_cfg(self, tmp_path, kappa, port="add"):
        body = FIG_WAVEGUIDE + f"""
[structure]
kind = double_racetrack
length1 = 641 um
length2 = 432 um
sigma1 = 0.933
sigma2 = 0.993

[coupler]
kind = dc
kappa = {kappa} /um
length = 98.2 um

[sweep]
start = 1549.9 nm
stop = 1550.8 nm
points = 801

[fields]
port = {port}
frequency = auto
z_points = 401
"""
        return write_config(tmp_path, body,
                            path=tmp_path / f"fields_{kappa}_{port}.csv")

    def test_add_mode_vanishes_at_ends(self, tmp_path):
        cfg = self.make_cfg(tmp_path, 0.064, "add")
        assert main(["fields", "--config", cfg]) == 0
        rows = read_csv(str(tmp_path / "fields_0.064_add.csv"))
        up = np.array([float(r["intensity_up"]) for r in rows])
        assert up[0] < 1e-3 * up.max()
        assert up[-1] < 1e-3 * up.max()

    def test_in_mode_maximal_at_ends(self, tmp_path):
        cfg = self.make_cfg(tmp_path, 0.064, "in")
        assert main(["fields", "--config", cfg]) == 0
        rows = read_csv(str(tmp_path / "fields_0.064_in.csv"))
        up = np.array([float(r["intensity_up"]) for r in rows])
        assert up[0] > 0.999 * up.max()
        assert up[-1] > 0.999 * up.max()

    def test_mzi_arms_flat(self, tmp_path):
        body = FIG_WAVEGUIDE + """
[structure]
kind = double_racetrack
length1 = 641 um
length2 = 432 um
sigma1 = 0.933
sigma2 = 0.993

[coupler]
kind = mzi
sigma_sx = 0.70710678118654752
sigma_dx = 0.70710678118654752
delta_phi = pi
length = 100 um

[sweep]
start = 1549.9 nm
stop = 1550.8 nm
points = 801

[fields]
port = add
"""
        out = tmp_path / "mzi.csv"
        cfg = write_config(tmp_path, body, path=out)
        assert main(["fields", "--config", cfg]) == 0
        rows = read_csv(out)
        up = np.array([float(r["intensity_up"]) for r in rows])
        lo = np.array([float(r["intensity_lo"]) for r in rows])
        assert np.ptp(up) <= 1e-12 * up.max()
        assert np.ptp(lo) <= 1e-12 * lo.max()

    def test_single_ring_rejected(self, tmp_path):
        body = FIG_WAVEGUIDE + """
[structure]
kind = single_ring
length = 600 um
sigma = 0.99

[sweep]
start = 1549 nm
stop = 1551 nm
"""
        cfg = write_config(tmp_path, body, path=tmp_path / "x.csv")
        assert main(["fields", "--config", cfg]) == 2


class TestRatesCommand:
    def test_report_contents(self, tmp_path):
        out = tmp_path / "rates.json"
        cfg = write_config(tmp_path, RATES_STRUCTURE, path=out)
        assert main(["rates", "--config", cfg]) == 0
        report = json.loads(out.read_text())
        assert report["rate_analytic_pairs_per_s"] > 0
        assert report["analytic_quadrature_rel_diff"] < 0.02
        assert report["rate_q_form_pairs_per_s"] == pytest.approx(
            report["rate_analytic_pairs_per_s"], rel=1e-9)
        # critical coupling: the finesse form agrees to the a-correction
        assert report["rate_finesse_form_pairs_per_s"] == pytest.approx(
            report["rate_analytic_pairs_per_s"], rel=0.02)
        assert report["ratio_to_ring"] > 0

    def test_zero_gamma_gives_zero_rates(self, tmp_path):
        body = RATES_STRUCTURE.replace("gamma_nl = 300 /W/m",
                                       "gamma_nl = 0 /W/m")
        out = tmp_path / "rates0.json"
        cfg = write_config(tmp_path, body, path=out)
        assert main(["rates", "--config", cfg]) == 0
        report = json.loads(out.read_text())
        assert report["rate_analytic_pairs_per_s"] == 0.0
        assert report["rate_quadrature_pairs_per_s"] == 0.0

    def test_no_triple_is_numeric_error(self, tmp_path, capsys):
        # incommensurate racetracks: no energy-conserving pair exists
        out = tmp_path / "never.json"
        cfg = write_config(tmp_path, FIG_STRUCTURE, path=out)
        assert main(["rates", "--config", cfg]) == 3
        err = capsys.readouterr().err
        assert "nearest miss" in err

    def test_single_ring_rates(self, tmp_path):
        body = """\
[waveguide]
wavelength0 = 1550.07 nm
n_eff = 2.4
group_index = 4.2
loss = 0.05 /cm

[structure]
kind = single_ring
length = 600 um
sigma = 0.998501

[pump]
mode = cw
power = 1 mW

[nonlinear]
gamma_nl = 300 /W/m

[sweep]
start = 1548 nm
stop = 1552 nm
points = 801
"""
        out = tmp_path / "ring_rates.json"
        cfg = write_config(tmp_path, body, path=out)
        assert main(["rates", "--config", cfg]) == 0
        report = json.loads(out.read_text())
        assert report["analytic_quadrature_rel_diff"] < 0.02
        assert report["rate_finesse_form_pairs_per_s"] == pytest.approx(
            report["rate_analytic_pairs_per_s"], rel=0.02)
        assert "ratio_to_ring" not in report

    def test_table_geometry_ratios(self, tmp_path):
        # L1 = L2 = 2L, coupler length pi*R: 1/1024 and 1/256
        radius = 80e-6
        ring_len = 2 * math.pi * radius
        body = f"""\
[waveguide]
wavelength0 = 1550.07 nm
n_eff = 2.4
group_index = 4.2
loss = 0.05 /cm

[structure]
kind = double_racetrack
length1 = {2 * ring_len} m
length2 = {2 * ring_len} m
sigma1 = 0.998
sigma2 = 0.998

[coupler]
kind = mzi
sigma_sx = 0.70710678118654752
sigma_dx = 0.70710678118654752
delta_phi = pi
length = {math.pi * radius} m

[pump]
mode = cw
power = 1 mW

[nonlinear]
gamma_nl = 300 /W/m

[sweep]
start = 1544 nm
stop = 1556 nm
points = 801
"""
        out = tmp_path / "mzi_rates.json"
        cfg = write_config(tmp_path, body, path=out)
        assert main(["rates", "--config", cfg]) == 0
        report = json.loads(out.read_text())
        assert report["ratio_to_ring"] == pytest.approx(1.0 / 256.0,
                                                        rel=1e-12)


class TestBiphotonCommand:
    BODY = """\
[waveguide]
wavelength0 = 1550.07 nm
n_eff = 2.4
group_index = 4.2
loss = 0.05 /cm

[structure]
kind = single_ring
length = 600 um
sigma = 0.998501

[pump]
mode = pulsed
bandwidth = 1.2 MHz
mean_photons = 1e6

[nonlinear]
gamma_nl = 300 /W/m

[sweep]
start = 1548 nm
stop = 1552 nm
points = 801

[biphoton]
points = 61
"""

    def test_summary_and_matrix(self, tmp_path):
        out = tmp_path / "jsa.csv"
        cfg = write_config(tmp_path, self.BODY, path=out)
        assert main(["biphoton", "--config", cfg]) == 0
        rows = read_csv(out)
        assert list(rows[0].keys()) == ["omega1_rad_s", "omega2_rad_s",
                                        "abs_phi_sq"]
        summary = json.loads((tmp_path / "jsa.csv.summary.json").read_text())
        assert summary["normalization_residual"] < 1e-6
        assert summary["beta_sq"] > 0
        # density peaks on the energy-conservation anti-diagonal
        dens = np.array([float(r["abs_phi_sq"]) for r in rows])
        w1 = np.array([float(r["omega1_rad_s"]) for r in rows])
        w2 = np.array([float(r["omega2_rad_s"]) for r in rows])
        omega_p = summary["triple"]["pump"]["omega_rad_s"]
        step = np.diff(np.unique(w1)).max()
        i = int(np.argmax(dens))
        assert abs(w1[i] + w2[i] - 2 * omega_p) <= step

    def test_beta_scales_with_photon_number(self, tmp_path):
        out1 = tmp_path / "a.csv"
        cfg1 = write_config(tmp_path, self.BODY, path=out1)
        assert main(["biphoton", "--config", cfg1]) == 0
        b1 = json.loads((tmp_path / "a.csv.summary.json")
                        .read_text())["beta_sq"]
        body2 = self.BODY.replace("mean_photons = 1e6",
                                  "mean_photons = 2e6")
        out2 = tmp_path / "b.csv"
        cfg2 = write_config(tmp_path, body2, path=out2)
        assert main(["biphoton", "--config", cfg2]) == 0
        b2 = json.loads((tmp_path / "b.csv.summary.json")
                        .read_text())["beta_sq"]
        assert b2 == pytest.approx(4.0 * b1, rel=1e-6)

    def test_cw_pump_rejected(self, tmp_path):
        body = self.BODY.replace("mode = pulsed", "mode = cw")
        body = body.replace("bandwidth = 1.2 MHz", "")
        cfg = write_config(tmp_path, body, path=tmp_path / "x.csv")
        assert main(["biphoton", "--config", cfg]) == 2


class TestExitCodes:
    def test_missing_config_is_io_error(self, tmp_path):
        assert main(["spectrum", "--config",
                     str(tmp_path / "missing.ini")]) == 4

    def test_malformed_config(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[waveguide]\nn_eff = 2.4\n", encoding="utf-8")
        assert main(["spectrum", "--config", str(path)]) == 2

    def test_bad_unit(self, tmp_path):
        body = FIG_STRUCTURE.replace("length1 = 641 um",
                                     "length1 = 641 parsec")
        cfg = write_config(tmp_path, body, path=tmp_path / "x.csv")
        assert main(["spectrum", "--config", cfg]) == 2

    def test_unwritable_output_is_io_error(self, tmp_path):
        cfg = write_config(tmp_path, FIG_STRUCTURE,
                           path="/proc/nope/out.csv")
        assert main(["spectrum", "--config", cfg]) == 4

    def test_inconsistent_s_perp_is_config_error(self, tmp_path, capsys):
        body = RATES_STRUCTURE.replace(
            "gamma_nl = 300 /W/m", "gamma_nl = 300 /W/m\ns_perp = 1e-40")
        cfg = write_config(tmp_path, body, path=tmp_path / "x.json")
        assert main(["rates", "--config", cfg]) == 2
        assert "s_perp" in capsys.readouterr().err


class TestConfigRoundTrip:
    def test_resolved_config_reproduces_run(self, tmp_path):
        out = tmp_path / "spec.csv"
        cfg_path = write_config(tmp_path, FIG_STRUCTURE, path=out)
        assert main(["spectrum", "--config", cfg_path]) == 0
        first = out.read_bytes()
        meta = json.loads((tmp_path / "spec.csv.meta.json").read_text())
        rebuilt = config_from_resolved(meta["config"])
        original = load_config(cfg_path)
        assert config_to_resolved(rebuilt) == config_to_resolved(original)
        # rerun from the rebuilt config through the command layer
        from ringpair.cli import cmd_spectrum
        out2 = tmp_path / "again.csv"
        cmd_spectrum(rebuilt, 1, str(out2), "csv")
        assert out2.read_bytes() == first

    def test_all_coupler_kinds_round_trip(self, tmp_path):
        for coupler in (
                "kind = dc\nkappa = 0.064 /um\nlength = 98.2 um",
                "kind = mzi\nsigma_sx = 0.7\nsigma_dx = 0.7\n"
                "delta_phi = pi\nlength = 80 um",
                "kind = unitary\nx12 = -0.00161j"):
            body = FIG_STRUCTURE.replace(
                "kind = unitary\nx12 = -0.00161j", coupler)
            cfg = load_config(write_config(tmp_path, body,
                                           path=tmp_path / "x.csv"))
            resolved = config_to_resolved(cfg)
            assert config_to_resolved(
                config_from_resolved(resolved)) == resolved
