import functools
import hashlib
import json
import subprocess
import sys

import numpy as np
import pytest

import lipgait.cli
import lipgait.stabilizer
from lipgait.cli import main
from lipgait.output import convergence_step, read_csv_columns


def _sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


MINIMAL = """\
[walker]
h = 1.0
g = 9.8
m = 50.0
L_max = 0.75

[cycle]
L_c = 0.5
T_c = 0.4

[controller]
{controller}
{extra}
"""


class TestLimitCycle:
    def test_table1_report(self, table1_config, capsys):
        assert main(["limit-cycle", "--config", table1_config]) == 0
        out = capsys.readouterr().out
        assert "-0.2500" in out and "1.4092" in out
        assert "3.4980" in out and "0.2859" in out
        assert "omega" in out

    def test_writes_csv_when_out_given(self, table1_config, tmp_path, capsys):
        assert main(["limit-cycle", "--config", table1_config, "--out", str(tmp_path)]) == 0
        rows = dict(
            line.split(",")
            for line in (tmp_path / "limit_cycle.csv").read_text().splitlines()[1:]
        )
        assert float(rows["xdot_c"]) == pytest.approx(1.4092182353253533, abs=1e-12)
        assert float(rows["eig_max"]) * float(rows["eig_min"]) == pytest.approx(1.0, abs=1e-10)

    def test_step_length_bound_violation(self, tmp_path, capsys):
        cfg = _write(
            tmp_path,
            "bad.toml",
            MINIMAL.format(controller='kind = "none"', extra="").replace("L_c = 0.5", "L_c = 0.9"),
        )
        assert main(["limit-cycle", "--config", cfg]) == 2
        assert "L_max" in capsys.readouterr().err


class TestDesignGains:
    def test_deadbeat_report_and_file(self, table1_config, tmp_path, capsys):
        assert main(["design-gains", "--config", table1_config, "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "k1 = -3.7839" in out and "k2 = -1.2250" in out
        payload = json.loads((tmp_path / "gains.json").read_text())
        assert payload["kind"] == "pole-place"
        assert payload["k1"] == pytest.approx(-3.783899136132316, abs=1e-12)
        assert payload["k2"] == pytest.approx(-1.224976831704385, abs=1e-12)

    def test_lqr_report(self, lqr_pair_config, tmp_path, capsys):
        assert main(["design-gains", "--config", lqr_pair_config, "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "DARE residual" in out
        assert out.count("spectral radius") == 2
        for name in ("gains_R1.json", "gains_R100.json"):
            payload = json.loads((tmp_path / name).read_text())
            radius = max(
                abs(complex(payload["lambda1_real"], payload["lambda1_imag"])),
                abs(complex(payload["lambda2_real"], payload["lambda2_imag"])),
            )
            assert radius < 1.0
            assert payload["dare_residual"] < 1e-9

    def test_unstable_poles_rejected(self, tmp_path, capsys):
        cfg = _write(
            tmp_path,
            "unstable.toml",
            MINIMAL.format(controller='kind = "pole-place"', extra="poles = [1.5, 0.2]"),
        )
        assert main(["design-gains", "--config", cfg]) == 2
        assert "unit circle" in capsys.readouterr().err

    def test_controller_none_has_nothing_to_design(self, tmp_path, capsys):
        cfg = _write(tmp_path, "none.toml", MINIMAL.format(controller='kind = "none"', extra=""))
        assert main(["design-gains", "--config", cfg]) == 2

    def test_dare_failure_maps_to_exit_3(self, tmp_path, capsys, monkeypatch):
        capped = functools.partial(lipgait.stabilizer.solve_dare, max_iter=20000)
        monkeypatch.setattr(lipgait.cli, "solve_dare", capped)
        monkeypatch.setattr(lipgait.stabilizer, "solve_dare", capped)
        cfg = _write(
            tmp_path,
            "degenerate.toml",
            MINIMAL.format(controller='kind = "lqr"', extra="R = 1.0").replace(
                "T_c = 0.4", "T_c = 1e-12"
            ),
        )
        assert main(["design-gains", "--config", cfg]) == 3
        assert "residual" in capsys.readouterr().err


class TestSimulate:
    def test_table1_outputs(self, table1_config, tmp_path, capsys):
        assert main(["simulate", "--config", table1_config, "--out", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "step 6 (3 after last disturbance)" in out
        for name in ("trace.csv", "steps.csv", "fig2_com.svg", "fig3_phase.svg", "summary.txt"):
            assert (tmp_path / name).exists()

    def test_trace_matches_library_run_exactly(self, table1_config, tmp_path):
        from lipgait import build_step_matrices, pole_place, simulate
        from lipgait.config import load_config

        main(["simulate", "--config", table1_config, "--out", str(tmp_path)])
        cols = read_csv_columns(str(tmp_path / "trace.csv"))
        cfg = load_config(table1_config)
        gains = pole_place(build_step_matrices(cfg.params, cfg.cycle.T_c), 0.0, 0.0)
        trace = simulate(
            cfg.params,
            cfg.cycle,
            gains,
            disturbances=cfg.disturbances,
            n_steps=cfg.run.n_steps,
            sample_rate=cfg.run.sample_rate_hz,
        )
        for j, name in enumerate(("t", "x_world", "x_rel", "xdot", "cop_world", "fx", "fy")):
            assert np.array_equal(cols[name], trace.samples[:, j]), name

    def test_csv_cells_round_trip_at_full_precision(self, table1_config, tmp_path):
        main(["simulate", "--config", table1_config, "--out", str(tmp_path)])
        lines = (tmp_path / "trace.csv").read_text().splitlines()
        for line in lines[1:50]:
            for cell in line.split(","):
                assert repr(float(cell)) == cell

    def test_figures_regenerate_byte_identically(self, table1_config, tmp_path, capsys):
        main(["simulate", "--config", table1_config, "--out", str(tmp_path)])
        before = {
            name: _sha(tmp_path / name)
            for name in ("fig2_com.svg", "fig3_phase.svg", "summary.txt")
        }
        for name in before:
            (tmp_path / name).unlink()
        assert main(["analyze", "--out", str(tmp_path)]) == 0
        after = {name: _sha(tmp_path / name) for name in before}
        assert after == before

    def test_lqr_pair_trend_and_fig4(self, lqr_pair_config, tmp_path):
        assert main(["simulate", "--config", lqr_pair_config, "--out", str(tmp_path)]) == 0
        fig4 = tmp_path / "fig4_steplen.svg"
        assert fig4.exists()
        before = _sha(fig4)
        fig4.unlink()
        assert main(["analyze", "--out", str(tmp_path)]) == 0
        assert _sha(fig4) == before
        cheap = read_csv_columns(str(tmp_path / "steps_R1.csv"))
        dear = read_csv_columns(str(tmp_path / "steps_R100.csv"))
        dev_cheap = np.abs(cheap["L_applied"] - cheap["L_nominal"]).max()
        dev_dear = np.abs(dear["L_applied"] - dear["L_nominal"]).max()
        assert dev_dear < dev_cheap
        _, after_cheap = convergence_step(cheap["error_norm"], cheap["disturbed"])
        _, after_dear = convergence_step(dear["error_norm"], dear["disturbed"])
        assert after_dear >= after_cheap

    def test_open_loop_flat_when_undisturbed(self, tmp_path, capsys):
        cfg = _write(tmp_path, "quiet.toml", MINIMAL.format(controller='kind = "none"', extra=""))
        out_dir = tmp_path / "quiet_out"
        assert main(["simulate", "--config", cfg, "--out", str(out_dir)]) == 0
        steps = read_csv_columns(str(out_dir / "steps.csv"))
        assert (steps["L_applied"] == 0.5).all()
        assert steps["error_norm"].max() < 1e-6

    def test_csv_only_format_skips_figures(self, table1_config, tmp_path):
        assert (
            main(["simulate", "--config", table1_config, "--out", str(tmp_path), "--format", "csv"])
            == 0
        )
        assert (tmp_path / "trace.csv").exists()
        assert not (tmp_path / "fig2_com.svg").exists()


class TestValidationAndIo:
    def test_unknown_section_rejected(self, tmp_path, capsys):
        cfg = _write(
            tmp_path,
            "unknown.toml",
            MINIMAL.format(controller='kind = "none"', extra="") + "\n[walkerr]\nx = 1\n",
        )
        assert main(["limit-cycle", "--config", cfg]) == 2
        assert "walkerr" in capsys.readouterr().err

    def test_unknown_nested_key_rejected(self, tmp_path, capsys):
        cfg = _write(
            tmp_path,
            "nested.toml",
            MINIMAL.format(controller='kind = "none"', extra="").replace(
                "L_max = 0.75", "L_max = 0.75\nheight = 1.0"
            ),
        )
        assert main(["limit-cycle", "--config", cfg]) == 2
        assert "height" in capsys.readouterr().err

    def test_bad_toml_rejected(self, tmp_path, capsys):
        cfg = _write(tmp_path, "broken.toml", "walker = {")
        assert main(["limit-cycle", "--config", cfg]) == 2

    def test_bad_format_flag(self, table1_config, capsys):
        assert main(["simulate", "--config", table1_config, "--format", "png"]) == 2

    def test_missing_config_file_is_io_error(self, tmp_path, capsys):
        assert main(["limit-cycle", "--config", str(tmp_path / "nope.toml")]) == 4

    def test_unwritable_output_dir(self, table1_config, tmp_path, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        out = blocker / "sub"
        assert main(["simulate", "--config", table1_config, "--out", str(out)]) == 4

    def test_analyze_requires_out(self, capsys):
        assert main(["analyze"]) == 2

    def test_analyze_on_empty_dir_is_io_error(self, tmp_path, capsys):
        assert main(["analyze", "--out", str(tmp_path)]) == 4


class TestEntryPoint:
    def test_module_invocation(self, table1_config):
        proc = subprocess.run(
            [sys.executable, "-m", "lipgait", "limit-cycle", "--config", table1_config],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "1.4092" in proc.stdout
