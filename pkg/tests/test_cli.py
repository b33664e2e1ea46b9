import csv
import io
import json

import pytest

from disperse.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_simulate_prints_result_json(capsys):
    code, out = run_cli(capsys, "simulate", "--graph", "complete:5",
                        "--seed", "3")
    assert code == 0
    data = json.loads(out)
    assert data["process"] == "sequential"
    assert data["n"] == 5
    assert data["dispersion_time"] >= 1
    assert len(data["settle_order"]) == 5


def test_simulate_emit_block(tmp_path, capsys):
    path = tmp_path / "block.json"
    code, _ = run_cli(capsys, "simulate", "--graph", "path:4",
                      "--process", "unif", "--emit-block", str(path))
    assert code == 0
    saved = json.loads(path.read_text())
    assert saved["origin"] == 0
    assert len(saved["rows"]) == 4
    # uniform runs carry settle-clock timing alongside the rows
    assert len(saved["timing"]) == 4


def test_estimate_csv_columns(capsys):
    code, out = run_cli(capsys, "estimate", "--graph", "cycle:6",
                        "--trials", "10", "--seed", "1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert list(rows[0]) == ["family", "n", "origin", "process", "lazy",
                             "trials", "seed", "mean", "stderr", "q50",
                             "q90", "q99", "min", "max"]
    assert rows[0]["family"] == "cycle"
    assert rows[0]["n"] == "6"
    assert float(rows[0]["mean"]) > 0


def test_estimate_json_format(capsys):
    code, out = run_cli(capsys, "estimate", "--graph", "cycle:6",
                        "--trials", "5", "--format", "json",
                        "--process", "par")
    assert code == 0
    row = json.loads(out)
    assert row["process"] == "parallel"
    assert row["trials"] == 5


def test_estimate_plot_data_ecdf(tmp_path, capsys):
    path = tmp_path / "ecdf.dat"
    code, _ = run_cli(capsys, "estimate", "--graph", "complete:6",
                      "--trials", "20", "--plot-data", str(path))
    assert code == 0
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("#")
    pts = [line.split() for line in lines[1:]]
    assert len(pts) == 20
    values = [float(a) for a, _ in pts]
    levels = [float(b) for _, b in pts]
    assert values == sorted(values)
    assert levels[-1] == pytest.approx(1.0)


def test_bounds_json(capsys):
    code, out = run_cli(capsys, "bounds", "--graph", "cycle:8",
                        "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["refined_parallel"] == pytest.approx(4440.0)
    assert d["refined_sequential"] == pytest.approx(1800.0)
    assert d["mode"] == "exact"


def test_bounds_csv_renders_none_as_empty(capsys):
    # n=16 exceeds the exhaustive-subset cap, so refined cells are empty
    code, out = run_cli(capsys, "bounds", "--graph", "cycle:16")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["refined_parallel"] == ""
    assert float(rows[0]["basic_upper"]) > 0


def test_verify_bijection_passes(capsys):
    code, out = run_cli(capsys, "verify", "bijection", "--graph",
                        "complete:3", "--m-max", "4")
    assert code == 0
    assert "PASS bijection.counts_equal" in out
    assert "PASS bijection.stp_injective" in out
    assert "PASS bijection.pts_inverts_stp" in out
    assert "FAIL" not in out


def test_verify_dominance_passes(capsys):
    code, out = run_cli(capsys, "verify", "dominance", "--graph", "cycle:5",
                        "--trials", "100", "--seed", "2")
    assert code == 0
    assert "PASS dominance.max_row_never_shrinks" in out


def test_verify_ratios_exit_code_on_failure(capsys):
    # an absurdly tight tolerance cannot pass at this trial count
    code, out = run_cli(capsys, "verify", "ratios", "--graph", "complete:8",
                        "--trials", "50", "--seed", "1",
                        "--lazy-tol", "1e-9")
    assert code == 1
    assert "FAIL ratios.lazy_seq_over_seq" in out


def test_table_csv(tmp_path, capsys):
    path = tmp_path / "table.csv"
    code, _ = run_cli(capsys, "table", "--families", "complete,cycle",
                      "--sizes", "6,8", "--trials", "4", "--seed", "3",
                      "--processes", "seq", "--out", str(path))
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 4
    assert rows[0]["t_hit"] != ""
    assert {r["family"] for r in rows} == {"complete", "cycle"}
    assert rows[-1][list(rows[-1])[-1]] != ""


def test_table_plot_data_blocks(tmp_path, capsys):
    path = tmp_path / "plot.dat"
    code, _ = run_cli(capsys, "table", "--families", "complete",
                      "--sizes", "6,8", "--trials", "3", "--seed", "4",
                      "--processes", "seq,par", "--plot-data", str(path))
    assert code == 0
    text = path.read_text()
    assert "# complete sequential: n mean" in text
    assert "# complete parallel: n mean" in text
    # blocks are separated by blank lines for gnuplot-style indexing
    assert "\n\n" in text


def test_enumerate_count(capsys):
    code, out = run_cli(capsys, "enumerate", "--graph", "complete:3",
                        "--m", "3", "--kind", "par")
    assert code == 0
    assert out.strip() == "2"


def test_enumerate_dump(capsys):
    code, out = run_cli(capsys, "enumerate", "--graph", "path:2",
                        "--m", "1", "--dump")
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert len(lines) == 1
    assert lines[0]["rows"] == [[0], [0, 1]]


def test_unknown_subcommand_exits():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_missing_graph_flag_exits():
    with pytest.raises(SystemExit):
        main(["simulate"])
