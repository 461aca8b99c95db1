"""End-to-end tests of the command-line frontend.

Everything runs in-process through cli.main so exit codes and the exact
stdout/stderr payloads are observable without spawning subprocesses.
"""

import csv
import io
import json
import math

import pytest

from slet import cli, engine, oracle
from slet.cli import RunRecord


def run_cli(capsys, *args):
    rc = cli.main(list(args))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


def read_csv(text):
    """Split CSV output into (comment header or None, column names, rows)."""
    comment = None
    if text.startswith("#"):
        comment, _, text = text.partition("\r\n")
    rows = list(csv.reader(io.StringIO(text)))
    return comment, rows[0], rows[1:]


def table_value(out, label):
    for line in out.splitlines():
        if line.startswith(label + " "):
            return line[len(label):].strip()
    raise AssertionError(f"no {label!r} line in output:\n{out}")


# -- solve --------------------------------------------------------------------


def test_solve_coulomb_table(capsys):
    rc, out, err = run_cli(capsys, "solve", "--dim", "3",
                           "--potential", "coulomb", "--l", "0", "--nr", "0")
    assert rc == 0 and err == ""
    assert out.startswith("# generated ")
    assert float(table_value(out, "E_total")) == pytest.approx(-1.0, abs=1e-9)
    assert float(table_value(out, "r0")) == pytest.approx(1.0, rel=1e-10)
    assert float(table_value(out, "E1")) == 0.0
    for label in ("dim", "potential", "l", "nr", "w", "beta", "lbar", "Q",
                  "E0", "E2 term", "E3 term", "alpha1", "alpha2",
                  "eps", "dlt", "e", "d", "candidates"):
        table_value(out, label)


def test_solve_coulomb_json(capsys):
    argv = ["solve", "--dim", "3", "--potential", "coulomb",
            "--l", "0", "--nr", "0", "--format", "json", "--no-header"]
    rc, out, err = run_cli(capsys, *argv)
    assert rc == 0 and err == ""
    payload = json.loads(out)
    assert set(payload) == {"command", "problem", "breakdown", "oracle"}
    assert payload["command"] == argv
    assert payload["problem"]["dim"] == 3
    assert payload["problem"]["potential"] == "coulomb"
    assert payload["problem"]["terms"] == 3
    assert payload["oracle"] is None
    bd = payload["breakdown"]
    assert isinstance(bd["E_total"], float)
    assert bd["E_total"] == pytest.approx(-1.0, abs=1e-9)
    assert bd["lbar"] == pytest.approx(1.0, rel=1e-12)
    assert all(len(c) == 2 for c in bd["candidates"])


def test_solve_csv_row(capsys):
    rc, out, err = run_cli(capsys, "solve", "--dim", "3",
                           "--potential", "coulomb", "--l", "1", "--nr", "2",
                           "--format", "csv", "--no-header")
    assert rc == 0 and err == ""
    assert out.count("\n") == out.count("\r\n")
    comment, columns, rows = read_csv(out)
    assert comment is None
    assert columns == ["l", "nr", "r0", "w", "beta", "lbar",
                       "E0", "E2term", "E3term", "E_total"]
    (row,) = rows
    assert row[0] == "1" and row[1] == "2"
    assert float(row[-1]) == pytest.approx(-1.0 / 16.0, abs=1e-9)
    for cell in row:
        float(cell)


def test_solve_expression_potential(capsys):
    # V = r, the standard linear-confinement benchmark.
    rc, out, err = run_cli(capsys, "solve", "--dim", "3", "--potential", "r",
                           "--l", "0", "--nr", "0",
                           "--format", "json", "--no-header")
    assert rc == 0 and err == ""
    bd = json.loads(out)["breakdown"]
    assert bd["E_total"] == pytest.approx(2.3386520443879255, rel=1e-12)


def test_solve_builtin_with_params(capsys):
    rc, out, err = run_cli(capsys, "solve", "--dim", "3",
                           "--potential", "power",
                           "--param", "A=1", "--param", "nu=2",
                           "--l", "0", "--nr", "0",
                           "--format", "json", "--no-header")
    assert rc == 0
    payload = json.loads(out)
    assert payload["problem"]["params"] == {"A": 1.0, "nu": 2.0}
    assert payload["breakdown"]["E_total"] == pytest.approx(3.0, abs=1e-9)


def test_solve_terms_gating(capsys):
    def breakdown(terms):
        rc, out, _ = run_cli(capsys, "solve", "--dim", "3",
                             "--potential", "r", "--l", "0", "--nr", "0",
                             "--terms", terms, "--format", "json",
                             "--no-header")
        assert rc == 0
        return json.loads(out)["breakdown"]

    b0, b2, b3 = breakdown("0"), breakdown("2"), breakdown("3")
    # Gating changes the sum, not the reported per-order terms.
    assert b0["E_total"] == b0["E0"]
    assert b2["E_total"] == b2["E0"] + b2["E2_over_lbar2"]
    assert b3["E_total"] == b3["E0"] + b3["E2_over_lbar2"] + b3["E3_over_lbar3"]
    assert b0["E2_over_lbar2"] == b3["E2_over_lbar2"]
    assert b0["E3_over_lbar3"] == b3["E3_over_lbar3"]
    assert b3["E_total"] > b2["E_total"] > b0["E_total"]


def test_solve_negative_l_rejected(capsys):
    rc, out, err = run_cli(capsys, "solve", "--dim", "3",
                           "--potential", "coulomb", "--l", "-1", "--nr", "0")
    assert rc == 2
    assert out == ""
    assert err == "error: l must be a non-negative integer\n"


def test_solve_negative_nr_rejected(capsys):
    rc, _, err = run_cli(capsys, "solve", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "-3")
    assert rc == 2
    assert err == "error: nr must be a non-negative integer\n"


def test_solve_bad_param_syntax(capsys):
    rc, _, err = run_cli(capsys, "solve", "--dim", "3", "--potential", "power",
                         "--param", "A", "--l", "0", "--nr", "0")
    assert rc == 2
    assert "--param expects NAME=VALUE" in err

    rc, _, err = run_cli(capsys, "solve", "--dim", "3", "--potential", "power",
                         "--param", "A=fast", "--l", "0", "--nr", "0")
    assert rc == 2
    assert "not a number" in err


def test_solve_wrong_builtin_params(capsys):
    rc, _, err = run_cli(capsys, "solve", "--dim", "3",
                         "--potential", "coulomb", "--param", "Z=2",
                         "--l", "0", "--nr", "0")
    assert rc == 2
    assert err.startswith("error: ")
    assert "Z" in err


def test_solve_bad_expression(capsys):
    rc, _, err = run_cli(capsys, "solve", "--dim", "3", "--potential", "2 +",
                         "--l", "0", "--nr", "0")
    assert rc == 2
    assert err.startswith("error: ")


def test_solve_donor_requires_matching_l(capsys):
    rc, _, err = run_cli(capsys, "solve", "--dim", "2", "--potential", "donor",
                         "--param", "gamma=1", "--param", "m=-1",
                         "--l", "0", "--nr", "0")
    assert rc == 2
    assert "2D donor requires l = |m|" in err


def test_argparse_errors_exit_2(capsys):
    rc, _, _ = run_cli(capsys, "solve", "--dim", "3",
                       "--potential", "coulomb", "--nr", "0")  # --l missing
    assert rc == 2
    rc, _, _ = run_cli(capsys, "solve", "--dim", "4",
                       "--potential", "coulomb", "--l", "0", "--nr", "0")
    assert rc == 2
    rc, _, _ = run_cli(capsys, "frobnicate")
    assert rc == 2


# -- spectrum -------------------------------------------------------------------


def test_spectrum_coulomb_grid(capsys):
    rc, out, err = run_cli(capsys, "spectrum", "--dim", "3",
                           "--potential", "coulomb",
                           "--l-range", "0..2", "--nr-range", "0..2",
                           "--format", "csv", "--no-header")
    assert rc == 0 and err == ""
    _, columns, rows = read_csv(out)
    assert columns == ["l", "nr", "r0", "w", "beta", "lbar",
                       "E0", "E2term", "E3term", "E_total", "error"]
    assert len(rows) == 9
    for row in rows:
        l, nr = int(row[0]), int(row[1])
        exact = -1.0 / (nr + l + 1) ** 2
        assert float(row[9]) == pytest.approx(exact, abs=1e-9)
        assert row[10] == ""


def test_spectrum_empty_range(capsys):
    rc, out, err = run_cli(capsys, "spectrum", "--dim", "3",
                           "--potential", "coulomb",
                           "--l-range", "2..1", "--nr-range", "0..0",
                           "--format", "csv", "--no-header")
    assert rc == 0 and err == ""
    _, columns, rows = read_csv(out)
    assert columns[0] == "l" and rows == []


def test_spectrum_range_syntax_errors(capsys):
    rc, _, err = run_cli(capsys, "spectrum", "--dim", "3",
                         "--potential", "coulomb",
                         "--l-range", "0-2", "--nr-range", "0..0")
    assert rc == 2
    assert "--l-range expects A..B" in err

    rc, _, err = run_cli(capsys, "spectrum", "--dim", "3",
                         "--potential", "coulomb",
                         "--l-range=-1..2", "--nr-range", "0..0")
    assert rc == 2
    assert "start must be non-negative" in err


def test_spectrum_records_per_row_failures(capsys, tmp_path):
    # A bracket that tops out at the l=0 root: higher l has no root inside,
    # so those rows must carry the error while the run keeps going.
    cfg = tmp_path / "narrow.cfg"
    cfg.write_text("bracket_hi = 1.0\n")
    rc, out, err = run_cli(capsys, "spectrum", "--dim", "3",
                           "--potential", "coulomb",
                           "--l-range", "0..2", "--nr-range", "0..0",
                           "--config", str(cfg),
                           "--format", "csv", "--no-header")
    assert rc == 0 and err == ""
    _, columns, rows = read_csv(out)
    assert len(rows) == 3
    ok, bad = rows[0], rows[1:]
    assert ok[columns.index("error")] == ""
    assert float(ok[columns.index("E_total")]) == pytest.approx(-1.0, abs=1e-9)
    for row in bad:
        assert row[columns.index("error")] != ""
        assert row[columns.index("E_total")] == ""


def test_spectrum_json_rows(capsys):
    rc, out, _ = run_cli(capsys, "spectrum", "--dim", "3",
                         "--potential", "coulomb",
                         "--l-range", "0..1", "--nr-range", "0..0",
                         "--format", "json", "--no-header")
    assert rc == 0
    payload = json.loads(out)
    assert set(payload) == {"command", "rows"}
    assert [r["l"] for r in payload["rows"]] == [0, 1]
    for row in payload["rows"]:
        assert isinstance(row["E_total"], float)
        assert row["error"] == ""


def test_spectrum_table_format(capsys):
    rc, out, _ = run_cli(capsys, "spectrum", "--dim", "3",
                         "--potential", "coulomb",
                         "--l-range", "0..0", "--nr-range", "0..1",
                         "--no-header")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["l", "nr"]
    assert "E_total" in lines[0]
    assert len(lines) == 3


# -- sweep ----------------------------------------------------------------------


def test_sweep_donor_ground_state(capsys):
    rc, out, err = run_cli(capsys, "sweep", "--dim", "2",
                           "--potential", "donor", "--m", "0", "--nr", "0",
                           "--gamma", "0:200:50",
                           "--format", "csv", "--no-header")
    assert rc == 0 and err == ""
    _, columns, rows = read_csv(out)
    assert columns == ["gamma", "E_total", "E0", "E2term", "E3term", "error"]
    assert [float(r[0]) for r in rows] == [0.0, 50.0, 100.0, 150.0, 200.0]
    energies = [float(r[1]) for r in rows]
    assert energies[0] == pytest.approx(-4.0, abs=1e-8)
    assert energies[1] == pytest.approx(31.70780473168524, rel=1e-9)
    assert energies[2] == pytest.approx(74.848454510975813, rel=1e-9)
    assert energies[4] == pytest.approx(165.09516715676077, rel=1e-9)
    assert energies == sorted(energies)
    assert all(r[5] == "" for r in rows)


def test_sweep_negative_m_zero_field(capsys):
    rc, out, _ = run_cli(capsys, "sweep", "--dim", "2", "--potential", "donor",
                         "--m", "-1", "--nr", "0", "--gamma", "0:0:1",
                         "--format", "csv", "--no-header")
    assert rc == 0
    _, _, rows = read_csv(out)
    (row,) = rows
    assert float(row[1]) == pytest.approx(-4.0 / 9.0, abs=1e-9)


def test_sweep_gamma_grid_errors(capsys):
    base = ("sweep", "--dim", "2", "--potential", "donor",
            "--m", "0", "--nr", "0")
    rc, _, err = run_cli(capsys, *base, "--gamma", "0:10:0")
    assert rc == 2 and "STEP must be positive" in err

    rc, _, err = run_cli(capsys, *base, "--gamma", "0:10")
    assert rc == 2 and "expects LO:HI:STEP" in err

    rc, _, err = run_cli(capsys, *base, "--gamma=-1:10:1")
    assert rc == 2 and "LO must be non-negative" in err


def test_sweep_empty_grid(capsys):
    rc, out, err = run_cli(capsys, "sweep", "--dim", "2",
                           "--potential", "donor", "--m", "0", "--nr", "0",
                           "--gamma", "5:1:1", "--format", "csv",
                           "--no-header")
    assert rc == 0 and err == ""
    _, _, rows = read_csv(out)
    assert rows == []


def test_sweep_requires_2d_donor(capsys):
    rc, _, err = run_cli(capsys, "sweep", "--dim", "3", "--potential", "donor",
                         "--m", "0", "--nr", "0", "--gamma", "0:1:1")
    assert rc == 2
    assert err == "error: sweep is 2D only; pass --dim 2\n"

    rc, _, err = run_cli(capsys, "sweep", "--dim", "2",
                         "--potential", "coulomb",
                         "--m", "0", "--nr", "0", "--gamma", "0:1:1")
    assert rc == 2
    assert err == "error: sweep requires --potential donor\n"


# -- validate ---------------------------------------------------------------------


def test_validate_linear_potential(capsys):
    rc, out, err = run_cli(capsys, "validate", "--dim", "3", "--potential", "r",
                           "--l", "0", "--nr", "0",
                           "--oracle-R", "30", "--oracle-N", "6000",
                           "--format", "json", "--no-header")
    assert rc == 0 and err == ""
    payload = json.loads(out)
    assert payload["errors"] == {"slet": None, "oracle": None}
    assert payload["oracle"]["converged"] is True
    assert payload["oracle"]["energy"] == pytest.approx(2.3381044766510692,
                                                        rel=1e-10)
    rel = payload["comparison"]["rel_diff"]
    assert 1.5e-4 < rel < 3.5e-4


def test_validate_reports_unconverged_box(capsys):
    # Box too small for the n=1 hydrogen state; the tool still exits 0 and
    # says so in the convergence flag.
    rc, out, err = run_cli(capsys, "validate", "--dim", "3",
                           "--potential", "coulomb", "--l", "0", "--nr", "1",
                           "--oracle-R", "6", "--oracle-N", "1000",
                           "--format", "json", "--no-header")
    assert rc == 0 and err == ""
    payload = json.loads(out)
    assert payload["oracle"]["converged"] is False
    assert abs(payload["oracle"]["box_shift"]) > 1e-5
    assert payload["comparison"] is not None


def test_validate_csv_schema(capsys):
    rc, out, err = run_cli(capsys, "validate", "--dim", "3",
                           "--potential", "coulomb", "--l", "0", "--nr", "0",
                           "--oracle-R", "20", "--oracle-N", "1500",
                           "--format", "csv", "--no-header")
    assert rc == 0 and err == ""
    _, columns, rows = read_csv(out)
    assert columns == ["E_slet", "E_oracle", "E_oracle_refined",
                       "E_oracle_extrapolated", "box_shift", "converged",
                       "abs_diff", "rel_diff", "error"]
    (row,) = rows
    assert float(row[0]) == pytest.approx(-1.0, abs=1e-9)
    assert row[5] in ("true", "false")
    assert row[8] == ""


def test_validate_oracle_failure_exits_3(capsys):
    # ln(r - 20) is not finite over the grid, so the oracle leg must fail;
    # a partial report still comes out, with exit code 3.
    rc, out, _ = run_cli(capsys, "validate", "--dim", "3",
                         "--potential", "ln(r - 20)", "--l", "0", "--nr", "0",
                         "--oracle-R", "30", "--oracle-N", "1000",
                         "--format", "json", "--no-header")
    assert rc == 3
    payload = json.loads(out)
    errors = payload["errors"]
    assert errors["oracle"] is not None or errors["slet"] is not None
    assert payload["comparison"] is None


def test_validate_table_output(capsys):
    rc, out, _ = run_cli(capsys, "validate", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "0",
                         "--oracle-R", "20", "--oracle-N", "1500",
                         "--no-header")
    assert rc == 0
    assert "SLET E_total" in out
    assert "oracle energy" in out
    assert "rel diff" in out


# -- output plumbing -----------------------------------------------------------


def test_csv_cells_match_json_floats(capsys):
    args = ("solve", "--dim", "3", "--potential", "coulomb",
            "--l", "1", "--nr", "0", "--no-header")
    rc, csv_out, _ = run_cli(capsys, *args, "--format", "csv")
    assert rc == 0
    rc, json_out, _ = run_cli(capsys, *args, "--format", "json")
    assert rc == 0

    _, columns, (row,) = read_csv(csv_out)
    bd = json.loads(json_out)["breakdown"]
    # 17 significant digits round-trip double precision exactly.
    for col, key in (("r0", "r0"), ("w", "w"), ("beta", "beta"),
                     ("lbar", "lbar"), ("E0", "E0"),
                     ("E2term", "E2_over_lbar2"),
                     ("E3term", "E3_over_lbar3"), ("E_total", "E_total")):
        assert float(row[columns.index(col)]) == bd[key]


def test_no_header_output_is_deterministic(capsys):
    args = ("spectrum", "--dim", "3", "--potential", "coulomb",
            "--l-range", "0..1", "--nr-range", "0..1",
            "--format", "csv", "--no-header")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second

    args = ("solve", "--dim", "3", "--potential", "coulomb",
            "--l", "0", "--nr", "0", "--format", "json", "--no-header")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_header_line_shape(capsys):
    rc, out, _ = run_cli(capsys, "solve", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "0",
                         "--format", "csv")
    assert rc == 0
    header = out.split("\r\n", 1)[0]
    parts = header.split()
    assert parts[0] == "#" and parts[1] == "generated"
    assert parts[3] == "slet"

    rc, out, _ = run_cli(capsys, "solve", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "0",
                         "--format", "json")
    payload = json.loads(out)
    assert "timestamp" in payload["generated"]
    assert "version" in payload["generated"]


def test_out_writes_file_instead_of_stdout(capsys, tmp_path):
    args = ("solve", "--dim", "3", "--potential", "coulomb",
            "--l", "0", "--nr", "0", "--format", "csv", "--no-header")
    rc, stdout_text, _ = run_cli(capsys, *args)
    assert rc == 0

    path = tmp_path / "run.csv"
    rc, out, _ = run_cli(capsys, *args, "--out", str(path))
    assert rc == 0
    assert out == ""
    with open(path, encoding="utf-8", newline="") as fh:
        assert fh.read() == stdout_text


# -- config files ----------------------------------------------------------------


def test_config_overrides_solver_settings(capsys, tmp_path):
    cfg = tmp_path / "solver.cfg"
    cfg.write_text("# wider scan\n\nscan_points = 400\nbracket_hi = 80\n")
    rc, out, err = run_cli(capsys, "solve", "--dim", "3",
                           "--potential", "coulomb", "--l", "0", "--nr", "0",
                           "--config", str(cfg),
                           "--format", "json", "--no-header")
    assert rc == 0 and err == ""
    payload = json.loads(out)
    assert payload["problem"]["solver"]["scan_points"] == 400
    assert payload["problem"]["solver"]["bracket_hi"] == 80.0
    assert payload["breakdown"]["E_total"] == pytest.approx(-1.0, abs=1e-9)


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnicate = 1\n")
    rc, _, err = run_cli(capsys, "solve", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "0",
                         "--config", str(cfg))
    assert rc == 2
    assert f"{cfg}:1: unknown config key 'frobnicate'" in err


def test_config_malformed_line(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bracket_hi 30\n")
    rc, _, err = run_cli(capsys, "solve", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "0",
                         "--config", str(cfg))
    assert rc == 2
    assert f"{cfg}:1: expected key=value" in err


def test_config_bad_value(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bracket_hi = wide\n")
    rc, _, err = run_cli(capsys, "solve", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "0",
                         "--config", str(cfg))
    assert rc == 2
    assert "bad value for bracket_hi" in err


def test_config_rejects_out_of_range_setting(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("root_tol = 1e-3\n")
    rc, _, err = run_cli(capsys, "solve", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "0",
                         "--config", str(cfg))
    assert rc == 2
    assert "root_tol" in err


def test_config_missing_file(capsys, tmp_path):
    rc, _, err = run_cli(capsys, "solve", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "0",
                         "--config", str(tmp_path / "nope.cfg"))
    assert rc == 2
    assert "cannot read config file" in err


# -- run records -----------------------------------------------------------------


def test_runrecord_roundtrip_solve(capsys):
    rc, out, _ = run_cli(capsys, "solve", "--dim", "3", "--potential", "r",
                         "--l", "1", "--nr", "2", "--format", "json")
    assert rc == 0
    rec = RunRecord.from_json(out)
    assert isinstance(rec.breakdown, engine.SletBreakdown)
    assert rec.oracle_result is None
    assert rec.l == 1 and rec.n_radial == 2

    again = RunRecord.from_json(rec.to_json())
    assert again == rec


def test_runrecord_roundtrip_with_oracle(capsys):
    rc, out, _ = run_cli(capsys, "validate", "--dim", "3",
                         "--potential", "coulomb", "--l", "0", "--nr", "0",
                         "--oracle-R", "20", "--oracle-N", "1200",
                         "--format", "json")
    assert rc == 0
    rec = RunRecord.from_json(out)
    assert isinstance(rec.oracle_result, oracle.OracleResult)
    assert math.isfinite(rec.oracle_result.energy_extrapolated)

    again = RunRecord.from_json(rec.to_json())
    assert again == rec
