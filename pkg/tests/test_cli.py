import json

import numpy as np
import pytest
from click.testing import CliRunner

from dwfsim.cli import hierarchy_rows, main
import dwfsim.channels as ch


@pytest.fixture
def runner():
    return CliRunner()


AD_ARGS = ["--channel", "ad", "--g", "0.01", "--gamma", "5"]
RTN_ARGS = ["--channel", "rtn", "--b", "0.05", "--gamma-rtn", "0.001"]


def run_ok(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


def test_sweep_row_count(runner, tmp_path):
    out = tmp_path / "sweep.csv"
    run_ok(runner, ["sweep", "--state", "ns1", *AD_ARGS, "--t0", "0", "--t1", "5",
                    "--steps", "2", "--measures", "concurrence", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert lines[0] == "t,concurrence,p_succ"
    assert len(lines) == 3


def test_sweep_initial_concurrence_matches_bell(runner, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for state, path in (("ns3p", out1), ("phi+", out2)):
        run_ok(runner, ["sweep", "--state", state, *AD_ARGS, "--t0", "0", "--t1", "1",
                        "--steps", "2", "--measures", "concurrence", "--out", str(path)])
    c1 = float(out1.read_text().splitlines()[1].split(",")[1])
    c2 = float(out2.read_text().splitlines()[1].split(",")[1])
    assert abs(c1 - c2) <= 2e-2


def test_sweep_rtn_concurrence_oscillates(runner, tmp_path):
    out = tmp_path / "rtn.csv"
    run_ok(runner, ["sweep", "--state", "phi+", *RTN_ARGS, "--t0", "0", "--t1", "200",
                    "--steps", "81", "--measures", "concurrence", "--out", str(out)])
    values = [float(line.split(",")[1]) for line in out.read_text().splitlines()[1:]]
    diffs = np.diff(values)
    assert np.any(diffs > 1e-6) and np.any(diffs < -1e-6)  # revival oscillations


def test_sweep_rejects_unknown_state(runner, tmp_path):
    result = runner.invoke(main, ["sweep", "--state", "ns9", *AD_ARGS,
                                  "--out", str(tmp_path / "x.csv")])
    assert result.exit_code != 0
    assert "ns1" in result.output  # error lists the valid labels


def test_sweep_rejects_unknown_measure(runner, tmp_path):
    result = runner.invoke(main, ["sweep", "--state", "ns1", *AD_ARGS,
                                  "--measures", "negativity", "--out", str(tmp_path / "x.csv")])
    assert result.exit_code != 0
    assert "concurrence" in result.output


def test_sweep_config_file(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "state": "phi+", "channel": "ad", "g": 0.01, "gamma": 5.0,
        "t0": 0.0, "t1": 2.0, "steps": 3, "measures": "concurrence",
        "out": str(tmp_path / "from_cfg.csv"),
    }))
    run_ok(runner, ["sweep", "--config", str(cfg)])
    assert (tmp_path / "from_cfg.csv").exists()
    # explicit flags override the file
    run_ok(runner, ["sweep", "--config", str(cfg), "--steps", "5",
                    "--out", str(tmp_path / "override.csv")])
    assert len((tmp_path / "override.csv").read_text().splitlines()) == 6


def test_sweep_deterministic(runner, tmp_path):
    args = ["sweep", "--state", "ns2", *RTN_ARGS, "--t0", "0", "--t1", "3", "--steps", "4",
            "--measures", "concurrence,steering_2,tele_fidelity"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_ok(runner, args + ["--out", str(a)])
    run_ok(runner, args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_sweep_auto_pq(runner, tmp_path):
    out = tmp_path / "auto.csv"
    run_ok(runner, ["sweep", "--state", "phi+", *AD_ARGS, "--auto-pq", "--t0", "0",
                    "--t1", "1", "--steps", "2", "--measures", "concurrence",
                    "--out", str(out)])
    first = out.read_text().splitlines()[1].split(",")
    assert float(first[1]) == pytest.approx(1.0, abs=1e-9)
    assert float(first[2]) == pytest.approx(1.0, abs=1e-9)  # p = q = 0 on the flat optimum


def test_optimize_command(runner, tmp_path):
    out = tmp_path / "opt.csv"
    run_ok(runner, ["optimize", "--state", "ns2", *AD_ARGS, "--step", "0.05",
                    "--out", str(out)])
    lines = out.read_text().splitlines()
    assert lines[0] == "state,p,q,objective,p_succ"
    row = lines[1].split(",")
    assert row[0] == "ns2"
    assert float(row[3]) >= 0.97  # coarse grid already reaches the Bell level
    assert 0 < float(row[4]) <= 1


def test_surface_cells_and_corner(runner, tmp_path):
    out = tmp_path / "surf.csv"
    run_ok(runner, ["surface", "--state", "phi+", *AD_ARGS, "--t", "0", "--step", "0.5",
                    "--out", str(out)])
    lines = out.read_text().splitlines()
    assert lines[0] == "p,q,p_succ"
    assert len(lines) == 5  # 2x2 grid
    first = lines[1].split(",")
    assert float(first[0]) == 0.0 and float(first[1]) == 0.0
    assert float(first[2]) == pytest.approx(1.0, abs=1e-12)


def test_surface_decreasing_near_origin(runner, tmp_path):
    out = tmp_path / "surf10.csv"
    run_ok(runner, ["surface", "--state", "phi+", *AD_ARGS, "--t", "10", "--step", "0.1",
                    "--out", str(out)])
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    grid = {(float(r[0]), float(r[1])): float(r[2]) for r in rows}
    assert grid[(0.1, 0.0)] < grid[(0.0, 0.0)]
    assert grid[(0.0, 0.1)] < grid[(0.0, 0.0)]


def test_surface_deterministic(runner, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run_ok(runner, ["surface", "--state", "ns1", *RTN_ARGS, "--t", "5", "--step", "0.25",
                        "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_table_command(runner, tmp_path):
    out = tmp_path / "table.csv"
    run_ok(runner, ["table", *RTN_ARGS, "--t", "10", "--filters", "off", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert lines[0] == "measure,rank,state,value,relation"
    fd_rows = [l.split(",") for l in lines[1:] if l.startswith("fidelity_deviation")]
    assert [r[2] for r in fd_rows][0] == "ns3p"  # smallest deviation ranks first
    assert [r[2] for r in fd_rows][-1] == "phi+"


def test_table_matches_sweep(runner, tmp_path):
    table_out = tmp_path / "t.csv"
    run_ok(runner, ["table", *RTN_ARGS, "--t", "10", "--filters", "off",
                    "--out", str(table_out)])
    sweep_out = tmp_path / "s.csv"
    run_ok(runner, ["sweep", "--state", "ns1", *RTN_ARGS, "--t0", "0", "--t1", "10",
                    "--steps", "2", "--measures", "concurrence", "--out", str(sweep_out)])
    sweep_c = float(sweep_out.read_text().splitlines()[-1].split(",")[1])
    rows = [l.split(",") for l in table_out.read_text().splitlines()[1:]]
    table_c = next(float(r[3]) for r in rows if r[0] == "concurrence" and r[2] == "ns1")
    assert table_c == pytest.approx(sweep_c, abs=1e-12)


def test_hierarchy_rows_filters_on_rtn():
    rows = hierarchy_rows(ch.rtn(0.05, 0.001), 10.0, filters_on=True)
    fd = next(r for r in rows if r[0] == "fidelity_deviation")
    ordered, _ = fd[1], fd[2]
    assert ordered[0][0] == "ns2"  # reversal filter zeroes its deviation
    assert ordered[0][1] <= 1e-2


def test_dwf_command_two_qubit(runner, tmp_path):
    out = tmp_path / "dwf.csv"
    run_ok(runner, ["dwf", "--state", "ns1", *AD_ARGS, "--t0", "0", "--t1", "4",
                    "--steps", "3", "--net", "ns1", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert lines[0].startswith("t,w_1_1,") and lines[0].endswith(",norm")
    assert len(lines) == 4
    for line in lines[1:]:
        cells = line.split(",")
        assert len(cells) == 18
        assert float(cells[-1]) == pytest.approx(1.0, abs=1e-10)
    # negative DWF entries at t = 0
    first = [float(x) for x in lines[1].split(",")[1:-1]]
    assert min(first) < 0


def test_dwf_command_qubit(runner, tmp_path):
    out = tmp_path / "dwfq.csv"
    run_ok(runner, ["dwf", "--state", "qubit-ns1", *AD_ARGS, "--t0", "0", "--t1", "1",
                    "--steps", "2", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert len(lines[1].split(",")) == 6  # t + 4 values + norm
    first = [float(x) for x in lines[1].split(",")[1:-1]]
    assert min(first) < 0


def test_dwf_mixed_state_invariant_under_rtn(runner, tmp_path):
    out = tmp_path / "dwfm.csv"
    run_ok(runner, ["dwf", "--state", "mixed4", *RTN_ARGS, "--t0", "0", "--t1", "20",
                    "--steps", "5", "--out", str(out)])
    for line in out.read_text().splitlines()[1:]:
        values = [float(x) for x in line.split(",")[1:-1]]
        assert np.allclose(values, 1 / 16, atol=1e-12)


def test_dwf_single_time_point(runner, tmp_path):
    out = tmp_path / "one.csv"
    run_ok(runner, ["dwf", "--state", "ns2", *AD_ARGS, "--t0", "2", "--t1", "2",
                    "--steps", "3", "--out", str(out)])
    assert len(out.read_text().splitlines()) == 2


def test_dwf_deterministic(runner, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run_ok(runner, ["dwf", "--state", "qutrit-ns1", *RTN_ARGS, "--t0", "0", "--t1", "7",
                        "--steps", "4", "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_table_deterministic(runner, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run_ok(runner, ["table", *AD_ARGS, "--t", "10", "--filters", "on", "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_optimize_deterministic(runner, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run_ok(runner, ["optimize", "--state", "ns1", *AD_ARGS, "--step", "0.1",
                        "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()
