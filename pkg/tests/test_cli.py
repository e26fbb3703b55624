import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from spinboson.analytic import TimeGrid
from spinboson.cli import main


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestEval:
    def test_header_and_frozen_row(self, capsys):
        code, out, _ = run_cli(
            ["eval", "--s", "1", "--A", "1", "--B", "1", "--eps", "0",
             "--tau", "0", "--tmin", "0", "--tmax", "1", "--points", "2"],
            capsys,
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["t", "gamma", "P_x", "phi", "C_x", "source"]
        t0 = [float(x) for x in rows[0][:5]]
        assert t0 == [0.0, 0.0, 1.0, 1.0, 1.0] and rows[0][5] == "closed"
        t1 = [float(x) for x in rows[1][:5]]
        assert t1[1] == pytest.approx(0.34657359027997265, rel=1e-15)
        assert t1[2] == pytest.approx(2 ** -0.5, rel=1e-15)
        assert t1[3] == pytest.approx(2 ** -0.5, rel=1e-15)
        assert t1[4] == pytest.approx(0.5, rel=1e-14)

    def test_decoupled_qubit_px_is_one(self, capsys):
        code, out, _ = run_cli(
            ["eval", "--s", "1.5", "--A", "0", "--tmin", "0.1", "--tmax", "10",
             "--points", "5", "--log"],
            capsys,
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert all(float(r[2]) == 1.0 for r in rows)

    def test_round_trip_precision(self, capsys):
        _, out, _ = run_cli(
            ["eval", "--tmin", "0.3", "--tmax", "0.9", "--points", "3"], capsys
        )
        _, rows = parse_csv(out)
        # shortest round-trip decimals: re-parsing recovers the exact floats
        t_vals = [float(r[0]) for r in rows]
        assert t_vals == list(TimeGrid.linear(0.3, 0.9, 3).times)

    def test_invalid_params_exit_code(self, capsys):
        code, _, err = run_cli(["eval", "--s", "-1"], capsys)
        assert code == 2
        assert err.strip().startswith("error:") and err.count("\n") == 1

    def test_tau_uses_renormalized_closed_forms(self, capsys):
        _, out, _ = run_cli(
            ["eval", "--tau", "0.5", "--tmin", "1", "--tmax", "2", "--points", "2"],
            capsys,
        )
        _, rows = parse_csv(out)
        assert float(rows[0][2]) == pytest.approx(0.82348573674235162, rel=1e-14)


class TestScan:
    def test_cartesian_grid(self, capsys):
        code, out, _ = run_cli(
            ["scan", "--s", "0.5,1.0", "--A", "1,2", "--tau", "0,1",
             "--tmin", "1", "--tmax", "2", "--points", "2"],
            capsys,
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header[:5] == ["s", "A", "B", "eps", "tau"]
        assert len(rows) == 2 * 2 * 2 * 2
        combos = {(r[0], r[1], r[4]) for r in rows}
        assert len(combos) == 8


class TestConfigFile:
    def test_config_supplies_defaults_flags_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# comment line\n"
            "s = 2.5\n"
            "A = 1.0\n"
            "tmin = 1\n"
            "tmax = 4\n"
            "points = 2\n"
            "log = true\n"
        )
        _, out_cfg, _ = run_cli(["eval", "--config", str(cfg)], capsys)
        _, rows = parse_csv(out_cfg)
        assert float(rows[0][0]) == 1.0 and float(rows[-1][0]) == 4.0
        # flag overrides the file value of s: gamma differs
        _, out_flag, _ = run_cli(
            ["eval", "--config", str(cfg), "--s", "1.0"], capsys
        )
        _, rows_flag = parse_csv(out_flag)
        assert float(rows_flag[0][1]) != float(rows[0][1])

    def test_malformed_config_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("tmin 3\n")
        code, _, err = run_cli(["eval", "--config", str(cfg)], capsys)
        assert code == 2 and "key = value" in err


class TestFig:
    def test_fig1_identity_rows(self, tmp_path, capsys):
        code, out, _ = run_cli(["fig", "--id", "1", "--outdir", str(tmp_path)], capsys)
        assert code == 0
        header, rows = parse_csv((tmp_path / "fig1.csv").read_text())
        assert header == ["panel", "A", "t", "P_x", "abs_C_x"]
        # panel a: |C_x| at A=1 coincides with P_x at A=2 row by row
        a = [r for r in rows if r[0] == "a"]
        cx_a1 = [float(r[4]) for r in a if float(r[1]) == 1.0]
        px_a2 = [float(r[3]) for r in a if float(r[1]) == 2.0]
        assert len(cx_a1) == len(px_a2) > 0
        for c, p in zip(cx_a1, px_a2):
            assert abs(c - p) <= 4.0 * np.spacing(abs(p))

    def test_fig2_long_panel_slopes(self, tmp_path, capsys):
        run_cli(["fig", "--id", "2", "--outdir", str(tmp_path)], capsys)
        header, rows = parse_csv((tmp_path / "fig2_long.csv").read_text())
        # |ln(P_x/P0)| falls on a (Bt)^(1-s) line: check s = 2.5 slope
        sel = [(float(r[2]), float(r[3])) for r in rows if r[1] == "2.5"]
        t = np.array([x for x, _ in sel])
        y = np.array([y for _, y in sel])
        mask = t > 1e2
        slope = np.polyfit(np.log(t[mask]), np.log(y[mask]), 1)[0]
        assert slope == pytest.approx(1.0 - 2.5, abs=2e-2)

    def test_fig4_monotone_rows(self, tmp_path, capsys):
        run_cli(["fig", "--id", "4", "--outdir", str(tmp_path)], capsys)
        header, rows = parse_csv((tmp_path / "fig4.csv").read_text())
        assert header == ["s", "t", "tau", "P_x"]
        series = {}
        for r in rows:
            series.setdefault((r[0], r[1]), []).append(float(r[3]))
        assert len(series) == 3 * 7
        for vals in series.values():
            assert all(b - a >= -1e-12 for a, b in zip(vals, vals[1:]))

    def test_unknown_id(self, capsys):
        code, _, err = run_cli(["fig", "--id", "7"], capsys)
        assert code == 2 and "figure id" in err


class TestDeterminism:
    def test_fig3_byte_identical_across_processes(self, tmp_path):
        for sub in ("x", "y"):
            (tmp_path / sub).mkdir()
            res = subprocess.run(
                [sys.executable, "-m", "spinboson", "fig", "--id", "3",
                 "--outdir", str(tmp_path / sub)],
                capture_output=True, text=True,
            )
            assert res.returncode == 0, res.stderr
        a = (tmp_path / "x" / "fig3.csv").read_bytes()
        b = (tmp_path / "y" / "fig3.csv").read_bytes()
        assert a == b
        assert b"\r" not in a  # LF line endings

    def test_eval_deterministic_in_process(self, capsys):
        args = ["eval", "--s", "0.7", "--A", "1.3", "--tmin", "0.1",
                "--tmax", "50", "--points", "40", "--log"]
        _, out1, _ = run_cli(args, capsys)
        _, out2, _ = run_cli(args, capsys)
        assert out1 == out2


class TestVerifyCommand:
    def test_negative_control_broken_gamma(self):
        from spinboson.numerics import gamma_fn
        from spinboson.verification import check_gamma_recurrence

        def broken(x):
            # sign error in the reflection branch
            return -gamma_fn(x) if x < 0.5 else gamma_fn(x)

        assert check_gamma_recurrence().passed
        assert not check_gamma_recurrence(gamma=broken).passed

    def test_tightened_tolerance_documents_precision(self):
        # scaling the 1e-8 triangle tolerance down to 1e-15 must fail:
        # the closed-vs-quadrature residual is ~1e-13
        from spinboson.verification import check_oracle_triangle

        results = check_oracle_triangle(tol_scale=1e-7)
        by_name = {r.name: r for r in results}
        assert not by_name["triangle_gamma_quadrature"].passed
        assert by_name["triangle_gamma_quadrature"].max_residual < 1e-8