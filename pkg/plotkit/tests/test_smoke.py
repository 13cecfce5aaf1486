import os

import pytest

from plotkit.fronts import main as fronts_main
from plotkit.sweep import main as sweep_main


EVENTS = """t,z,location,class,sigmas_in,sigmas_out,d_upsilon
0.1,0.5,Liquid,collision,0.001;-0.002,0.0005;-0.0015,-1e-7
0.2,0,InterfaceLeft,interface,0.002,0.001;0.001,-2e-7
0.3,1,InterfaceRight,interface,-0.001,-0.0005;-0.0005,-1e-7
"""

SNAPSHOTS = """t,z,p,v,tau
0,-1,1,0,1
0,0.5,1.04,0,0.9615
0,2,1,0,1
0.5,-1,1.01,0.005,0.99
0.5,0.5,1.02,0.004,0.98
0.5,2,1,0,1
"""

SWEEP = """kappa,metric,value
0.2,sup_tv_v_liquid,0.0066
0.2,sup_tv_tau_liquid,0.0013
0.2,sup_tv_p_liquid,0.033
0.2,v_mid_gap,0.0036
0.2,weakstar_w0,0.004
0.1,sup_tv_v_liquid,0.0036
0.1,sup_tv_tau_liquid,0.00036
0.1,sup_tv_p_liquid,0.036
0.1,v_mid_gap,0.0019
0.1,weakstar_w0,0.0034
"""


@pytest.fixture
def csvs(tmp_path):
    (tmp_path / "events.csv").write_text(EVENTS)
    (tmp_path / "snapshots.csv").write_text(SNAPSHOTS)
    (tmp_path / "sweep.csv").write_text(SWEEP)
    return tmp_path


def test_fronts_smoke(csvs):
    out = csvs / "fronts.png"
    rc = fronts_main(["--events", str(csvs / "events.csv"),
                      "--snapshots", str(csvs / "snapshots.csv"),
                      "--out", str(out)])
    assert rc == 0
    assert out.stat().st_size > 0


def test_sweep_smoke(csvs):
    rc = sweep_main(["--sweep", str(csvs / "sweep.csv"),
                     "--out-dir", str(csvs / "figs")])
    assert rc == 0
    names = os.listdir(csvs / "figs")
    assert len(names) == 2
    for n in names:
        assert (csvs / "figs" / n).stat().st_size > 0


def test_missing_column_fails(csvs, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,z\n0,0\n")
    assert fronts_main(["--events", str(bad),
                        "--snapshots", str(csvs / "snapshots.csv"),
                        "--out", str(tmp_path / "x.png")]) == 1
    assert sweep_main(["--sweep", str(bad), "--out-dir", str(tmp_path)]) == 1


def test_unparsable_csv_fails(tmp_path):
    nofile = tmp_path / "missing.csv"
    assert sweep_main(["--sweep", str(nofile), "--out-dir", str(tmp_path)]) == 1
