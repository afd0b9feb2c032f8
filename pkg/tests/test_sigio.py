"""Container validation, CSV format, and scenario round trips."""

import hashlib
import json

import numpy as np
import pytest

from combrf import (
    CalibrationReport,
    Spectrum,
    ValidationError,
    Waveform,
    load_scenario,
    save_scenario,
    write_csv,
    write_csv_rows,
)
from combrf.scenario import parse_scenario, scenario_to_dict


class TestContainers:
    def test_waveform_validation(self):
        Waveform(1e9, np.zeros(4))
        with pytest.raises(ValidationError):
            Waveform(0.0, np.zeros(4))
        with pytest.raises(ValidationError):
            Waveform(1e9, np.array([1.0, np.nan]))

    def test_waveform_is_frozen(self):
        wave = Waveform(1e9, np.zeros(4))
        with pytest.raises(ValueError):
            wave.samples[0] = 1.0

    def test_spectrum_validation(self):
        Spectrum(np.array([1.0, 2.0]), np.array([0.0, -np.inf]))
        with pytest.raises(ValidationError):
            Spectrum(np.array([2.0, 1.0]), np.array([0.0, 0.0]))
        with pytest.raises(ValidationError):
            Spectrum(np.array([1.0, 2.0]), np.array([0.0]))
        with pytest.raises(ValidationError):
            Spectrum(np.array([1.0, 2.0]), np.array([0.0, np.nan]))


class TestCsv:
    def test_empty_trace_header_only(self, tmp_path):
        path = tmp_path / "trace.csv"
        write_csv_rows(path, ["iteration", "max_error_db"], [])
        assert path.read_text() == "iteration,max_error_db\n"

    def test_spectrum_rows(self, tmp_path):
        path = tmp_path / "spec.csv"
        spectrum = Spectrum(np.array([1.0, 2.0, 3.0]), np.array([0.0, -1.5, -3.0]))
        write_csv(spectrum, path)
        lines = path.read_text().splitlines()
        assert len(lines) == 4
        assert lines[0] == "frequency_hz,power_db"
        assert lines[2] == "2,-1.5"

    def test_report_rows(self, tmp_path):
        path = tmp_path / "trace.csv"
        report = CalibrationReport(3, 0.01, (1.0, 0.1, 0.01), True)
        write_csv(report, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "iteration,max_error_db"
        assert lines[1] == "1,1"
        assert lines[3] == "3,0.01"

    def test_twelve_significant_digits(self, tmp_path):
        path = tmp_path / "x.csv"
        write_csv_rows(path, ["v"], [(np.pi,)])
        assert path.read_text().splitlines()[1] == "3.14159265359"

    def test_byte_identical_reruns(self, tmp_path):
        rng = np.random.default_rng(0)
        freqs = np.sort(rng.uniform(0, 1e9, 100))
        spectrum = Spectrum(freqs, rng.uniform(-30, 0, 100))
        digests = []
        for name in ("a.csv", "b.csv"):
            path = tmp_path / name
            write_csv(spectrum, path)
            digests.append(hashlib.sha256(path.read_bytes()).hexdigest())
        assert digests[0] == digests[1]

    def test_unknown_object_rejected(self, tmp_path):
        with pytest.raises(ValidationError):
            write_csv(object(), tmp_path / "x.csv")


class TestScenario:
    def test_minimal_file_gets_defaults(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text('{"comb": {"fsr_hz": 49e9}}')
        config = load_scenario(path)
        assert config.comb is not None
        assert config.comb.fsr_hz == 49e9
        assert config.comb.n_lines == 81
        assert config.seed == 0
        assert "comb.n_lines" in config.defaulted_fields
        assert "seed" in config.defaulted_fields
        assert config.design is None

    def test_invalid_fsr_names_invariant(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text('{"comb": {"fsr_hz": 0}}')
        with pytest.raises(ValidationError, match="fsr_hz > 0"):
            load_scenario(path)

    def test_unknown_field_is_hard_error(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text('{"comb": {"fsr_hz": 49e9, "fsrr_hz": 1}}')
        with pytest.raises(ValidationError, match="fsrr_hz"):
            load_scenario(path)
        path.write_text('{"comb": {"fsr_hz": 49e9}, "extra_section": {}}')
        with pytest.raises(ValidationError, match="extra_section"):
            load_scenario(path)

    def test_parse_error_has_line_and_column(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"comb": {\n  "fsr_hz": }\n}')
        with pytest.raises(ValidationError, match=r"bad\.json:2:13"):
            load_scenario(path)

    def test_empty_scenario_rejected(self):
        with pytest.raises(ValidationError, match="at least one task section"):
            parse_scenario({"seed": 3})

    def test_round_trip_identity(self, tmp_path):
        doc = {
            "schema_version": 1,
            "seed": 7,
            "comb": {"fsr_hz": 49e9, "n_lines": 41,
                     "envelope": {"sech_width": 17.5, "modulation_depth_db": 2.0,
                                  "modulation_period": 7.0}},
            "dispersion": {"dispersion_ps_per_nm_km": 17.0, "length_km": 2.5},
            "design": {"kind": "sinc", "n_taps": 40, "bandwidth_hz": 2e9},
            "shaping": {"gain_error": 0.05},
            "beamform": {"n_elements": 21, "steering_delays_s": [0.0, 1e-12]},
            "channelizer": {"n_channels": 6, "weights": [1, 0, 1, 1, 1, 1]},
        }
        first = parse_scenario(doc)
        path = tmp_path / "round.json"
        save_scenario(first, path)
        second = load_scenario(path)
        assert second == first  # provenance fields excluded from equality
        assert second.defaulted_fields == ()  # save makes every field explicit
        # and a second save is byte-identical
        path2 = tmp_path / "round2.json"
        save_scenario(second, path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_schema_version_checked(self):
        with pytest.raises(ValidationError, match="schema_version"):
            parse_scenario({"schema_version": 99, "comb": {}})

    def test_weights_validated(self):
        with pytest.raises(ValidationError, match=r"weights\[1\]"):
            parse_scenario({"channelizer": {"n_channels": 2, "weights": [1, 2]}})
        with pytest.raises(ValidationError, match="2 entries"):
            parse_scenario({"channelizer": {"n_channels": 3, "weights": [1, 0]}})

    def test_scenario_dict_is_json_clean(self):
        config = parse_scenario({"comb": {}, "design": {"kind": "hilbert"}})
        doc = scenario_to_dict(config)
        json.dumps(doc)  # no numpy leakage, no NaN
