import json
import math
import os

import pytest
from click.testing import CliRunner

from pathwave.cli import main
from pathwave.errors import ConfigError
from pathwave.scenarios import load_config, resolve_units

SMALL_CFG = """\
preset: example1
samples: 21
time: "1.5 t_plus"
oracle:
  cells: 400
"""


@pytest.fixture()
def runner():
    return CliRunner()


class TestListPresets:
    def test_names_present(self, runner):
        res = runner.invoke(main, ["list-presets"])
        assert res.exit_code == 0
        for name in ("example1", "example2", "example3", "example4",
                     "greenslaw", "limit-sequence", "piecewise"):
            assert name in res.output


class TestRun:
    def test_outputs_and_determinism(self, runner, tmp_path):
        cfg = tmp_path / "small.yaml"
        cfg.write_text(SMALL_CFG)
        out = tmp_path / "out"
        res = runner.invoke(main, ["run", str(cfg), "--out-dir", str(out)])
        assert res.exit_code == 0, res.output
        for fname in ("profile.csv", "terms.csv", "summary.json",
                      "profile.png", "terms.png"):
            assert (out / fname).exists()

        # every numeric field is written with 17 significant digits and
        # round-trips exactly
        lines = (out / "profile.csv").read_text().splitlines()
        for cell in lines[1].split(",")[1:]:
            assert cell == "%.17g" % float(cell)

        first = {f: (out / f).read_bytes()
                 for f in ("profile.csv", "terms.csv", "summary.json")}
        out2 = tmp_path / "out2"
        res2 = runner.invoke(main, ["run", str(cfg), "--out-dir", str(out2)])
        assert res2.exit_code == 0
        for f, blob in first.items():
            assert (out2 / f).read_bytes() == blob

    def test_worker_count_does_not_change_bytes(self, runner, tmp_path,
                                                monkeypatch):
        cfg = tmp_path / "small.yaml"
        cfg.write_text(SMALL_CFG)
        out = tmp_path / "serial"
        assert runner.invoke(main,
                             ["run", str(cfg), "--out-dir", str(out)]).exit_code == 0
        monkeypatch.setenv("PATHWAVE_WORKERS", "3")
        out_mt = tmp_path / "threaded"
        assert runner.invoke(main,
                             ["run", str(cfg), "--out-dir", str(out_mt)]).exit_code == 0
        assert (out / "profile.csv").read_bytes() == \
            (out_mt / "profile.csv").read_bytes()

    def test_variants_write_subdirectories(self, runner, tmp_path):
        cfg = tmp_path / "limits.yaml"
        cfg.write_text(
            "preset: limit-sequence\n"
            "samples: 21\n"
            "oracle: {cells: 400}\n"
            "variants:\n"
            "  - medium: {x_plus: 0.5}\n"
            "  - medium: {x_plus: 0.0}\n")
        out = tmp_path / "out"
        res = runner.invoke(main, ["run", str(cfg), "--out-dir", str(out)])
        assert res.exit_code == 0, res.output
        assert (out / "x_plus_0p5" / "profile.csv").exists()
        assert (out / "x_plus_0" / "profile.csv").exists()
        combined = json.loads((out / "summary.json").read_text())
        assert [v["x_plus"] for v in combined["variants"]] == [0.5, 0.0]
        assert all("peak_p" in v for v in combined["variants"])

    def test_unknown_config_exits_2(self, runner):
        res = runner.invoke(main, ["run", "no-such-preset"])
        assert res.exit_code == 2
        assert "config error" in res.output


class TestVerify:
    def test_example1_passes(self, runner):
        res = runner.invoke(main, ["verify", "example1"])
        assert res.exit_code == 0, res.output
        for name in ("zigzag_table", "coefficient_identity", "simplex_volume",
                     "once_reflected_closed_form", "quadrature_tolerance",
                     "strong_tail_bound"):
            assert name in res.output
        assert "FAIL" not in res.output

    def test_coarse_nodes_fail_on_strong_contrast(self, runner):
        # 4 Gauss nodes with refinement disabled cannot meet the tolerance
        # for the order-4 terms of the ratio-20 medium
        res = runner.invoke(main, ["verify", "example3", "--nodes", "4"])
        assert res.exit_code == 1
        assert "quadrature_tolerance" in res.output
        assert "FAIL" in res.output

    def test_extreme_contrast_skips_strong_bound(self, runner, tmp_path):
        cfg = tmp_path / "extreme.yaml"
        cfg.write_text(
            "medium: {kind: linear, x_plus: 1.0, z_left: 1.0, z_right: 50.0,\n"
            "         c_left: 1.0, c_right: 1.0}\n"
            "data: {kind: step}\n"
            "time: \"2 t_plus\"\n"
            "series: {orders: [0]}\n")
        res = runner.invoke(main, ["verify", str(cfg)])
        assert res.exit_code == 0, res.output
        assert "SKIPPED" in res.output
        assert "strong_tail_bound" in res.output

    def test_odd_order_rejected(self, runner):
        res = runner.invoke(main, ["verify", "example1", "--order", "3"])
        assert res.exit_code == 2


class TestConfigHelpers:
    def test_resolve_units(self):
        assert resolve_units("3 t_plus", math.log(2.0), 1.0) == pytest.approx(
            3.0 * math.log(2.0), abs=1e-14)
        assert resolve_units("0.5 x_plus", 1.0, 2.0) == pytest.approx(1.0)
        assert resolve_units(1.25, 9.9, 9.9) == 1.25
        with pytest.raises(ConfigError):
            resolve_units("two t_plus", 1.0, 1.0)

    def test_load_config_merges_preset(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("preset: example1\noracle: {cells: 123}\n")
        merged, name = load_config(str(cfg))
        assert name == "example1"
        assert merged["oracle"]["cells"] == 123
        assert merged["medium"]["z_left"] == 0.5

    def test_load_config_missing_file(self):
        with pytest.raises(ConfigError):
            load_config("/nonexistent/path.yaml")
