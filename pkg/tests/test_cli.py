from __future__ import annotations

import json
import math

import numpy as np
import pytest

from floquet_hhg import Dataset, read_dataset, write_dataset
from floquet_hhg.cli import main, run_command
from floquet_hhg.config import apply_overrides, from_dict, materialize, \
    parse_config

MINIMAL = {"epsilon_d": 1.0, "omega": 1.2, "A_over_omega": 2.0, "lambda": 0.1}


def fast_overrides(**extra):
    cfg = dict(MINIMAL)
    cfg.update({
        "k_grid": {"min": -6.0, "max": 6.0, "count": 241},
        "x_grid": {"min": -25.0, "max": 25.0, "count": 251},
        "box_length": 100.0, "n_modes": 2048, "dt": 2e-3, "t_end": 5.0,
        "t": 5.0,
    })
    cfg.update(extra)
    return cfg


class TestConfig:
    def test_minimal_materializes_defaults(self):
        cfg = parse_config(json.dumps(MINIMAL))
        assert cfg.lambda_ == 0.1
        assert cfg.k_c == pytest.approx(2 * math.pi)
        assert cfg.window == 32
        assert cfg.A == pytest.approx(2.4)
        assert cfg.mode_window == 12
        assert cfg.model().a_over_omega == pytest.approx(2.0)

    def test_round_trip(self):
        cfg = parse_config(json.dumps(MINIMAL))
        again = parse_config(cfg.to_json())
        assert again == cfg

    def test_unknown_key_rejected(self):
        bad = dict(MINIMAL, typo_key=3)
        with pytest.raises(ValueError, match="unknown config keys"):
            from_dict(bad)

    def test_negative_omega_rejected(self):
        bad = dict(MINIMAL, omega=-1.0)
        with pytest.raises(ValueError, match="omega must be positive"):
            from_dict(bad)

    def test_amplitude_exactly_one_of_two(self):
        with pytest.raises(ValueError, match="exactly one"):
            from_dict(dict(MINIMAL, A=2.4))
        both_missing = dict(MINIMAL)
        both_missing.pop("A_over_omega")
        with pytest.raises(ValueError, match="exactly one"):
            from_dict(both_missing)

    def test_direct_amplitude_accepted(self):
        raw = dict(MINIMAL)
        raw.pop("A_over_omega")
        raw["A"] = 2.4
        cfg = from_dict(raw)
        assert cfg.A == 2.4
        assert "A" in cfg.to_dict() and "A_over_omega" not in cfg.to_dict()

    def test_partial_grid_rejected(self):
        with pytest.raises(ValueError, match="k_grid"):
            from_dict(dict(MINIMAL, k_grid={"min": -1.0}))

    def test_malformed_json_reported(self):
        with pytest.raises(ValueError, match="not valid JSON"):
            parse_config("{nope")

    def test_overrides_dotted_paths(self):
        raw = apply_overrides(materialize(MINIMAL),
                              ["k_grid.count=99", "lambda=0.05"])
        cfg = from_dict(raw)
        assert cfg.k_grid.count == 99
        assert cfg.lambda_ == 0.05

    def test_override_format_validated(self):
        with pytest.raises(ValueError, match="key=value"):
            apply_overrides(dict(MINIMAL), ["oops"])


class TestDatasetIO:
    def test_write_read_round_trip_bitwise(self, tmp_path):
        ds = Dataset(name="demo", columns=("a", "b"), units=("1", "energy"),
                     data=[[1.0, -2.5e-17], [math.pi, 3.0]],
                     metadata={"alpha": 1.5, "z": complex(0.25, -1.0)})
        path = write_dataset(ds, tmp_path / "demo.csv")
        again = read_dataset(path)
        second = write_dataset(again, tmp_path / "demo2.csv")
        assert path.read_bytes() == second.read_bytes()

    def test_empty_dataset_header_only(self, tmp_path):
        ds = Dataset(name="empty", columns=("x",), units=("1",),
                     data=np.empty((0, 1)))
        path = write_dataset(ds, tmp_path / "empty.csv")
        lines = path.read_text().splitlines()
        assert len(lines) == 3
        assert read_dataset(path).n_rows == 0

    def test_sidecar_written(self, tmp_path):
        ds = Dataset(name="demo", columns=("x",), units=("1",), data=[[1.0]])
        path = write_dataset(ds, tmp_path / "d.csv")
        sidecar = json.loads(
            (tmp_path / "d.csv.meta.json").read_text())
        assert sidecar["dataset"] == "demo"
        assert "wall_time_s" in sidecar

    def test_column_access(self):
        ds = Dataset(name="demo", columns=("x", "y"), units=("1", "1"),
                     data=[[1.0, 2.0], [3.0, 4.0]])
        assert list(ds.column("y")) == [2.0, 4.0]
        with pytest.raises(KeyError):
            ds.column("zz")

    def test_shape_validated(self):
        with pytest.raises(ValueError, match="columns"):
            Dataset(name="bad", columns=("x",), units=("1",),
                    data=[[1.0, 2.0]])


class TestCommands:
    def test_eigen_outputs(self):
        cfg = from_dict(MINIMAL)
        pole, coeffs = run_command("eigen", cfg)
        assert pole.n_rows == 1
        assert pole.column("residual")[0] < 1e-12
        assert pole.column("im_z")[0] < 0.0
        n_col = coeffs.column("n")
        assert n_col[0] == -32 and n_col[-1] == 32
        assert coeffs.metadata["solver"]["second_sheet_channels"] == \
            [-4, -3, -2, -1, 0]

    def test_spectrum_columns(self):
        cfg = from_dict(fast_overrides())
        (ds,) = run_command("spectrum", cfg)
        assert ds.columns[:3] == ("k", "S_total", "S_lorentz_sum")
        assert "S_mode_0" in ds.columns and "S_mode_4" in ds.columns
        assert np.all(ds.column("S_total") >= 0.0)

    def test_spatial_columns(self):
        cfg = from_dict(fast_overrides())
        (ds,) = run_command("spatial", cfg)
        assert ds.columns[0] == "x" and ds.columns[1] == "F_resonance"
        for m in range(5):
            assert f"diag_m{m}" in ds.columns
        assert "interference" in ds.columns
        assert "F_total" not in ds.columns
        assert ds.metadata["pairing"] == "outgoing"

    def test_spatial_with_oracle_adds_total(self):
        cfg = from_dict(fast_overrides(with_oracle=True))
        (ds,) = run_command("spatial", cfg)
        assert "F_total" in ds.columns
        assert "calibration" in ds.metadata

    def test_evolve_outputs(self):
        cfg = from_dict(fast_overrides())
        survival, photon, field = run_command("evolve", cfg)
        assert survival.column("P_survival")[0] == 1.0
        assert photon.metadata.get("warnings")  # t_end=5 is far from decayed
        assert field.metadata["t"] == pytest.approx(5.0)

    def test_sweep_outputs(self):
        cfg = from_dict(fast_overrides(
            sweep={"a_over_omega": {"min": 1.0, "max": 2.0, "count": 2}}))
        (ds,) = run_command("sweep", cfg)
        assert ds.n_rows == 2
        assert np.all(ds.column("im_z") < 0.0)

    def test_compare_report(self):
        cfg = from_dict(fast_overrides())
        (report,) = run_command("compare", cfg)
        names = report.metadata["check_names"]
        assert "survival_max_rel_dev" in names
        assert "beat_frequency_dev" in names
        assert report.n_rows == len(names)
        assert set(report.column("passed")) <= {0.0, 1.0}
        assert "calibration" in report.metadata

    def test_sweep_requires_section(self):
        cfg = from_dict(fast_overrides())
        with pytest.raises(ValueError, match="sweep"):
            run_command("sweep", cfg)

    def test_unknown_command_rejected(self):
        cfg = from_dict(MINIMAL)
        with pytest.raises(ValueError, match="unknown command"):
            run_command("render", cfg)


class TestMainEntry:
    def test_success_and_determinism(self, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(fast_overrides()))
        for out in ("run1", "run2"):
            code = main(["spectrum", "--config", str(cfg_path),
                         "--out", str(tmp_path / out)])
            assert code == 0
        a = (tmp_path / "run1" / "spectrum.csv").read_bytes()
        b = (tmp_path / "run2" / "spectrum.csv").read_bytes()
        assert a == b

    def test_validation_error_exit_code(self, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(dict(MINIMAL, omega=-1.0)))
        assert main(["eigen", "--config", str(cfg_path),
                     "--out", str(tmp_path)]) == 1

    def test_missing_config_exit_code(self, tmp_path):
        assert main(["eigen", "--config", str(tmp_path / "none.json"),
                     "--out", str(tmp_path)]) == 1

    def test_non_convergence_exit_code(self, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(dict(MINIMAL, max_iterations=1)))
        assert main(["eigen", "--config", str(cfg_path),
                     "--out", str(tmp_path)]) == 2

    def test_override_flag(self, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(fast_overrides()))
        out = tmp_path / "ov"
        code = main(["spectrum", "--config", str(cfg_path), "--out", str(out),
                     "--override", "k_grid.count=101"])
        assert code == 0
        ds = read_dataset(out / "spectrum.csv")
        assert ds.n_rows == 101
