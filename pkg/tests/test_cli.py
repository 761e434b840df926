import csv
import io
import json

import pytest

from qswitch import cli
from qswitch.cli import RunConfig, ResultRow, main, rows_from_csv, rows_to_csv, run


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_holevo_full_superposition(capsys):
    code, out, _ = invoke(capsys, "holevo", "--channels", "3", "--dim", "2", "--q", "0,0,0",
                          "--orders", "1,2,3,4,5,6", "--format", "csv")
    assert code == 0
    (row,) = csv_rows(out)
    assert abs(float(row["chi_bits"]) - 0.0980) <= 5e-4
    assert row["predicted_class"] == "Single"


def test_holevo_identity(capsys):
    code, out, _ = invoke(capsys, "holevo", "--channels", "3", "--dim", "2", "--q", "1,1,1",
                          "--orders", "1", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert row["chi_bits"] == 1.0 and row["converged"] is True


def test_holevo_two_switch(capsys):
    code, out, _ = invoke(capsys, "holevo", "--channels", "2", "--dim", "2", "--q", "0,0",
                          "--orders", "1,2", "--format", "csv")
    assert code == 0
    assert abs(float(csv_rows(out)[0]["chi_bits"]) - 0.0487) <= 5e-4


def test_holevo_table_format(capsys):
    code, out, _ = invoke(capsys, "holevo", "--orders", "1,4")
    assert code == 0
    assert out.splitlines()[0].split() == cli.CSV_FIELDS


def test_explicit_weights(capsys):
    code, out, _ = invoke(capsys, "holevo", "--orders", "1,4", "--weights", "0.25,0.75", "--format", "csv")
    assert code == 0
    assert csv_rows(out)[0]["predicted_class"] == "n/a"


@pytest.mark.parametrize("argv", [
    ["holevo", "--orders", "1,9"],
    ["holevo", "--orders", "1,1"],
    ["holevo", "--q", "0,x,0", "--orders", "1"],
    ["holevo", "--q", "0,0", "--orders", "1"],
    ["holevo", "--q", "0,0,2", "--orders", "1"],
    ["holevo"],
    ["holevo", "--orders", "1,2", "--weights", "1"],
    ["sweep", "--m", "7"],
    ["sweep", "--orders", "1,2"],
    ["frobnicate"],
    ["table1", "--channels", "2", "--q", "0,0"],
])
def test_usage_errors(capsys, argv):
    code, _, err = invoke(capsys, *argv)
    assert code == 1
    assert "error" in err


def test_nonconvergence_exit_code(capsys, monkeypatch):
    real = cli.holevo_chi

    def fake(spec, opts):
        res = real(spec, opts)
        return type(res)(**{**res.__dict__, "converged": False})

    monkeypatch.setattr(cli, "holevo_chi", fake)
    code, out, err = invoke(capsys, "holevo", "--orders", "1,4", "--format", "csv")
    assert code == 2
    assert csv_rows(out)[0]["converged"] == "false"
    assert "converge" in err


def test_sweep_all_sizes(full_sweeps):
    rows = full_sweeps[2]
    assert len(rows) == 63
    assert sum(r.m >= 2 for r in rows) == 57
    keys = [(r.m, [int(x) for x in r.combination.split(",")]) for r in rows]
    assert keys == sorted(keys)


def test_sweep_orders_all_matches_m_all():
    a = cli.cmd_sweep(RunConfig(command="sweep", orders="all", starts=4))
    assert len(a) == 63


def test_sweep_m3_count(capsys):
    code, out, _ = invoke(capsys, "sweep", "--channels", "3", "--dim", "2", "--m", "3", "--format", "csv")
    assert code == 0 and len(csv_rows(out)) == 20


def test_sweep_qutrit_pairs(capsys):
    code, out, _ = invoke(capsys, "sweep", "--channels", "3", "--dim", "3", "--m", "2", "--format", "csv")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 15
    assert sum(float(r["chi_bits"]) > 0.01 for r in rows) == 6


def test_csv_header_and_quoting():
    rows = cli.cmd_sweep(RunConfig(command="sweep", m=2, starts=4))
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ("N,d,m,combination,q,chi_bits,h_control_bits,h_min_bits,"
                                    "global_pairs,total_pairs,predicted_class,converged")
    assert text.splitlines()[1].startswith('3,2,2,"1,2","0,0,0",')
    assert rows_from_csv(text) == rows


def test_csv_roundtrip_handmade():
    rows = [ResultRow(3, 2, 2, "1,4", "0,0.5,1", 0.048795, 0.954434, 1.905639, 1, 1, "Max", True),
            ResultRow(2, 3, 1, "2", "0,0", 0.0, 0.0, 1.584963, 0, 0, "n/a", False)]
    assert rows_from_csv(rows_to_csv(rows)) == rows


def test_sweep_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}.csv"
        assert main(["sweep", "--m", "3", "--format", "csv", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_parallel_matches_serial(monkeypatch):
    cfg = RunConfig(command="sweep", m=2, d=2, starts=8)
    monkeypatch.setenv("QSWITCH_THREADS", "1")
    serial = rows_to_csv(cli.cmd_sweep(cfg))
    monkeypatch.setenv("QSWITCH_THREADS", "3")
    assert rows_to_csv(cli.cmd_sweep(cfg)) == serial


def test_bad_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("QSWITCH_THREADS", "many")
    code, _, err = invoke(capsys, "sweep", "--m", "2")
    assert code == 1


def test_plot_data(capsys):
    code, out, _ = invoke(capsys, "sweep", "--m", "2", "--plot-data", "--starts", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "m,chi_bits" and len(lines) == 16
    assert all(line.startswith("2,") for line in lines[1:])


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# qutrit pair scan\nchannels = 3\ndim=3\nq=0,0,0\nm = 2\nformat=csv\nplot-data = true\n")
    code, out, _ = invoke(capsys, "sweep", "--config", str(cfg))
    assert code == 0 and out.startswith("m,chi_bits") and len(out.splitlines()) == 16
    # command line flags override the file
    code, out, _ = invoke(capsys, "holevo", "--config", str(cfg), "--dim", "2", "--orders", "1,4")
    assert code == 0 and csv_rows(out)[0]["d"] == "2"


def test_config_file_malformed(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("channels 3\n")
    code, _, _ = invoke(capsys, "sweep", "--config", str(cfg))
    assert code == 1


def test_classify_examples():
    rows = cli.cmd_classify(RunConfig(command="classify", orders=[1, 4]))
    assert rows == [{"combination": "1,4", "m": 2, "global_pairs": 1, "total_pairs": 1, "predicted_class": "Max"}]
    (row,) = cli.cmd_classify(RunConfig(command="classify", orders=[3, 1, 2]))
    assert (row["global_pairs"], row["total_pairs"], row["predicted_class"]) == (1, 3, "Min")
    (row,) = cli.cmd_classify(RunConfig(command="classify", orders=[1, 5, 2, 4]))
    assert (row["combination"], row["global_pairs"], row["total_pairs"], row["predicted_class"]) == \
        ("1,2,4,5", 3, 6, "Max")


def test_classify_with_chi(capsys):
    code, out, _ = invoke(capsys, "classify", "--m", "3", "--with-chi", "--format", "json", "--starts", "4")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 20
    hi = {r["chi_bits"] for r in rows if r["predicted_class"] == "Max"}
    lo = {r["chi_bits"] for r in rows if r["predicted_class"] == "Min"}
    assert min(hi) > max(lo)


def test_classify_all(capsys):
    code, out, _ = invoke(capsys, "classify", "--format", "csv")
    assert code == 0 and len(csv_rows(out)) == 63


@pytest.fixture(scope="module")
def table1_text(full_sweeps):
    table = cli.table1_from_rows(full_sweeps[2] + full_sweeps[3], [2, 3])
    return cli.emit(table, "csv", kind="table1")


def test_table1_cells(table1_text):
    rows = {int(r["m"]): r for r in csv_rows(table1_text)}
    assert (rows[3]["chi_max_d2"], rows[3]["chi_min_d2"]) == ("0.0817", "0.0333")
    assert (rows[4]["chi_max_d3"], rows[4]["chi_min_d3"]) == ("0.0246", "0.0186")
    assert (float(rows[1]["chi_max_d2"]), float(rows[1]["chi_min_d2"])) == (0.0, 0.0)
    assert rows[5]["chi_min_d2"] == "" and rows[6]["chi_min_d3"] == ""


def test_table1_command_end_to_end(capsys):
    code, out, _ = invoke(capsys, "table1", "--dims", "2", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert [r["m"] for r in rows] == list(range(1, 7))
    assert rows[5]["chi_max_d2"] == 0.098 and rows[5]["chi_min_d2"] is None


def test_table1_table_format(capsys, monkeypatch, table1_text):
    monkeypatch.setattr(cli, "cmd_table1", lambda cfg: [
        {"m": 5, "chi_max_d2": 0.0766, "chi_max_d3": 0.0275, "chi_min_d2": None, "chi_min_d3": None},
        {"_converged": True}])
    code, out, _ = invoke(capsys, "table1")
    assert code == 0
    assert out.splitlines()[1].split() == ["5", "0.0766", "0.0275", "-", "-"]


def test_truncation():
    assert cli.truncate4(0.048795) == 0.0487
    assert cli.truncate4(0.0817) == 0.0817
    assert cli.truncate4(0.081699) == 0.0816
