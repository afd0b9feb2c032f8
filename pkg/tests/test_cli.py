"""End-to-end CLI tests: files, exit codes, and replayability."""

import hashlib
import json

import numpy as np
import pytest

from combrf.cli import main

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")


def run(args):
    return main([str(a) for a in args])


def read_json(path):
    return json.loads(path.read_text())


class TestDesign:
    def test_sinc_writes_taps_response_metrics(self, tmp_path):
        out = tmp_path / "d"
        assert run(["design", "sinc", "--taps", 80, "--bw", 1e9, "--center", 10e9,
                    "--out", out]) == 0
        for name in ("taps.json", "response.csv", "metrics.json", "manifest.json",
                     "response.png"):
            assert (out / name).exists(), name
        metrics = read_json(out / "metrics.json")
        assert metrics["rf_fsr_hz"] == pytest.approx(37.44e9, rel=1e-3)
        assert metrics["achieved_center_hz"] == pytest.approx(10e9, rel=1e-3)
        assert abs(metrics["achieved_bandwidth_hz"] - 1e9) < 0.15e9
        assert metrics["sidelobe_level_db"] <= -30.0
        assert metrics["q_rf"] > 0
        taps = read_json(out / "taps.json")
        assert len(taps["coefficients"]) == 80
        manifest = read_json(out / "manifest.json")
        assert sorted(manifest["files"]) == manifest["files"]
        assert "response.csv" in manifest["files"]
        assert "seed" in manifest

    def test_even_hilbert_is_validation_error(self, tmp_path):
        assert run(["design", "hilbert", "--taps", 80, "--out", tmp_path]) == 2

    def test_center_beyond_nyquist_is_infeasible(self, tmp_path):
        # default tap spacing 26.7 ps -> rf_fsr 37.44 GHz, Nyquist 18.7 GHz
        assert run(["design", "sinc", "--center", 30e9, "--out", tmp_path]) == 3

    def test_differentiator_runs(self, tmp_path):
        out = tmp_path / "d"
        assert run(["design", "differentiator", "--taps", 81, "--out", out]) == 0
        coeffs = np.array(read_json(out / "taps.json")["coefficients"])
        assert abs(coeffs.sum()) < 1e-12

    def test_explicit_tap_spacing(self, tmp_path):
        out = tmp_path / "d"
        assert run(["design", "sinc", "--taps", 40, "--tap-spacing", 1 / 49e9,
                    "--bw", 2e9, "--center", 12e9, "--out", out]) == 0
        metrics = read_json(out / "metrics.json")
        assert metrics["rf_fsr_hz"] == pytest.approx(49e9)


class TestShape:
    def test_nominal_run_trace_decays(self, tmp_path):
        out = tmp_path / "s"
        assert run(["shape", "--gain-error", 0.1, "--out", out, "--seed", 3]) == 0
        trace = (out / "calibration_trace.csv").read_text().splitlines()
        assert trace[0] == "iteration,max_error_db"
        errors = [float(line.split(",")[1]) for line in trace[1:]]
        assert errors == sorted(errors, reverse=True)
        report = read_json(out / "calibration_report.json")
        assert report["converged"]
        assert report["seed"] == 3
        assert (out / "shaped_comb.csv").exists()
        assert (out / "shaped_comb.png").exists()

    def test_flat_targets_on_flat_comb(self, tmp_path):
        scenario = tmp_path / "flat.json"
        scenario.write_text(json.dumps({
            "comb": {"n_lines": 21, "envelope": {"sech_width": None}},
        }))
        out = tmp_path / "s"
        assert run(["shape", "--scenario", scenario, "--targets", "flat",
                    "--out", out]) == 0
        plan = read_json(out / "shaping_plan.json")
        assert plan["attenuations_db"] == [0.0] * 21

    def test_weak_line_fails_precondition(self, tmp_path):
        # flat targets on a curved comb: edge lines cannot reach the peak
        assert run(["shape", "--targets", "flat", "--out", tmp_path]) == 3

    def test_design_targets_from_scenario(self, tmp_path):
        scenario = tmp_path / "s.json"
        scenario.write_text(json.dumps({
            "comb": {"envelope": {"sech_width": 40.0}},
            "design": {"kind": "sinc", "n_taps": 81, "bandwidth_hz": 1e9,
                       "center_frequency_hz": 10e9},
        }))
        out = tmp_path / "s"
        assert run(["shape", "--scenario", scenario, "--out", out]) == 0
        plan = read_json(out / "shaping_plan.json")
        assert len(plan["selected_indices"]) == 81


class TestBeamform:
    def test_patterns_and_sweep(self, tmp_path):
        out = tmp_path / "b"
        assert run(["beamform", "--elements", 21, "--tau", 0.0, "--tau", 10e-12,
                    "--sweep", "11,21", "--angle-step", 0.05, "--out", out]) == 0
        assert (out / "pattern_00.csv").exists()
        assert (out / "pattern_01.csv").exists()
        sweep = (out / "beamwidth_vs_elements.csv").read_text().splitlines()
        assert sweep[0] == "M,theta_3db_deg"
        rows = [line.split(",") for line in sweep[1:]]
        widths = {int(m): float(w) for m, w in rows}
        assert widths[11] > widths[21]
        # broadside pattern is symmetric
        pattern = np.loadtxt(out / "pattern_00.csv", delimiter=",", skiprows=1)
        mags = pattern[:, 1]
        np.testing.assert_allclose(mags, mags[::-1], atol=1e-6)

    def test_out_of_range_tau_exits_nonzero(self, tmp_path):
        assert run(["beamform", "--tau", 60e-12, "--spacing", 0.015,
                    "--out", tmp_path]) == 3


class TestChannelize:
    def test_all_on_identity(self, tmp_path):
        out = tmp_path / "c"
        assert run(["channelize", "--channels", 8, "--lineshape", "rectangular",
                    "--out", out]) == 0
        manifest = (out / "channels_manifest.csv").read_text().splitlines()
        assert manifest[0] == "channel,rf_center_hz,weight"
        assert len(manifest) == 9
        assert all(line.endswith(",1") for line in manifest[1:])
        for k in range(8):
            assert (out / f"channel_{k:03d}.csv").exists()

    def test_notch_pattern(self, tmp_path):
        out = tmp_path / "c"
        assert run(["channelize", "--channels", 8, "--lineshape", "rectangular",
                    "--weights", "1,1,0,1,1,1,1,1", "--out", out]) == 0
        manifest = (out / "channels_manifest.csv").read_text().splitlines()
        weights = [int(line.split(",")[2]) for line in manifest[1:]]
        assert weights == [1, 1, 0, 1, 1, 1, 1, 1]
        # composite has a hole exactly at channel 2's passband
        composite = np.loadtxt(out / "composite.csv", delimiter=",", skiprows=1)
        centers = [float(line.split(",")[1]) for line in manifest[1:]]
        freqs, power = composite[:, 0], composite[:, 1]
        in_notch = np.abs(freqs - centers[2]) < 0.09e9
        in_pass = np.abs(freqs - centers[3]) < 0.09e9
        assert np.all(np.isneginf(power[in_notch]))
        assert np.all(np.isfinite(power[in_pass]))
        # paired comb view mirrors the weights
        comb_rows = (out / "comb_weights.csv").read_text().splitlines()[1:]
        powers = [float(r.split(",")[2]) for r in comb_rows]
        assert powers[2] == -60.0 and powers[3] == 0.0

    def test_coverage_error_exit(self, tmp_path):
        assert run(["channelize", "--channels", 8, "--f-max", 1.5e9,
                    "--out", tmp_path]) == 3

    def test_bad_weights_rejected(self, tmp_path):
        assert run(["channelize", "--channels", 4, "--weights", "1,2,0,1",
                    "--out", tmp_path]) == 2
        assert run(["channelize", "--channels", 4, "--weights", "1,0",
                    "--out", tmp_path]) == 2


class TestSimulate:
    SCENARIO = {
        "schema_version": 1,
        "seed": 42,
        "comb": {"fsr_hz": 49e9, "n_lines": 81, "envelope": {"sech_width": 40.0}},
        "dispersion": {"dispersion_ps_per_nm_km": 17.0, "length_km": 4.0},
        "design": {"kind": "sinc", "n_taps": 81, "bandwidth_hz": 1e9,
                   "center_frequency_hz": 10e9},
        "shaping": {"gain_error": 0.1, "osa_noise_db": 0.02},
        "beamform": {"n_elements": 21, "element_sweep": [11, 21],
                     "steering_delays_s": [0.0, 25e-12], "angle_step_deg": 0.05},
        "channelizer": {"n_channels": 8, "weights": [1, 1, 0, 1, 1, 1, 0, 1],
                        "lineshape": "rectangular"},
    }

    def test_runs_every_section(self, tmp_path):
        scenario = tmp_path / "full.json"
        scenario.write_text(json.dumps(self.SCENARIO))
        out = tmp_path / "run"
        assert run(["simulate", "--scenario", scenario, "--out", out]) == 0
        manifest = read_json(out / "manifest.json")
        assert manifest["parameters"]["sections"] == ["design", "shape", "beamform",
                                                      "channelize"]
        assert manifest["seed"] == 42
        for name in ("taps.json", "shaped_comb.csv", "beamwidth_vs_elements.csv",
                     "composite.csv"):
            assert (out / name).exists(), name

    def test_replay_is_byte_identical(self, tmp_path):
        scenario = tmp_path / "full.json"
        scenario.write_text(json.dumps(self.SCENARIO))
        digests = []
        for name in ("one", "two"):
            out = tmp_path / name
            assert run(["simulate", "--scenario", scenario, "--out", out,
                        "--no-figures"]) == 0
            digest = {
                p.name: hashlib.sha256(p.read_bytes()).hexdigest()
                for p in sorted(out.glob("*.csv"))
            }
            digests.append(digest)
        assert digests[0] == digests[1]
        assert len(digests[0]) >= 10

    def test_simulate_requires_scenario(self, capsys):
        with pytest.raises(SystemExit):
            main(["simulate"])


class TestParser:
    def test_unknown_flag_is_error(self):
        with pytest.raises(SystemExit) as info:
            main(["design", "sinc", "--frobnicate", "1"])
        assert info.value.code == 2

    def test_help_lists_subcommands(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["--help"])
        assert info.value.code == 0
        text = capsys.readouterr().out
        for name in ("design", "shape", "beamform", "channelize", "simulate"):
            assert name in text

    def test_subcommand_help_lists_flags(self, capsys):
        for cmd, flag in (("design", "--taps"), ("shape", "--tolerance"),
                          ("beamform", "--tau"), ("channelize", "--weights")):
            with pytest.raises(SystemExit) as info:
                main([cmd, "--help"])
            assert info.value.code == 0
            text = capsys.readouterr().out
            assert flag in text
            assert "--scenario" in text and "--seed" in text and "--out" in text
