"""Rigid-piston limit model and the kappa sweep measurements."""

import numpy as np
import pytest

from machzero.errors import OutOfRange, ValidationError
from machzero.limits import (run_limit_model, weakstar_pressure_error,
                             eulerian_interfaces, kappa_sweep)
from machzero import oracle

from conftest import make_scenario, standard_scenario


def test_equilibrium_piston_stays_at_rest():
    lim = run_limit_model(make_scenario())
    ts = np.linspace(0.0, 1.0, 21)
    assert max(abs(lim.v_piston(float(t))) for t in ts) == 0.0
    assert abs(lim.p_left.at(1.0, "p") - 1.0) <= 1e-14
    assert abs(lim.p_right.at(1.0, "p") - 1.0) <= 1e-14


def test_pushed_piston_accelerates_rightward():
    # an overpressure pulse from the left keeps pushing after arrival
    lim = run_limit_model(standard_scenario())
    v = [lim.v_piston(t) for t in (0.1, 0.5, 0.8, 1.0)]
    assert v[0] == 0.0
    assert 0.0 < v[1] < v[2] < v[3]
    # while pushed, the left wall pressure exceeds the right one
    assert lim.p_left.at(0.6, "p") > lim.p_right.at(0.6, "p")


def test_piston_step_self_convergence():
    scn = standard_scenario()
    grid = np.linspace(0.0, 1.0, 101)
    coarse = run_limit_model(scn, dt_piston=4e-3)
    mid = run_limit_model(scn, dt_piston=2e-3)
    fine = run_limit_model(scn, dt_piston=1e-3)
    e1 = max(abs(coarse.v_piston(t) - fine.v_piston(t)) for t in grid)
    e2 = max(abs(mid.v_piston(t) - fine.v_piston(t)) for t in grid)
    assert e2 < e1
    assert e1 < 5e-4


def test_limit_agrees_with_finite_volume_piston():
    scn = standard_scenario()
    lim = run_limit_model(scn)
    _, times, vels = oracle.godunov_piston(scn, cells=400)
    gap = max(abs(lim.v_piston(float(t)) - float(w))
              for t, w in zip(times, vels))
    assert gap < 1.5e-3
    assert abs(lim.v_piston(1.0) - vels[-1]) < 5e-4


def test_eulerian_slab_width_constant_in_limit():
    lim = run_limit_model(standard_scenario())
    a, b = eulerian_interfaces(lim, a_o=0.0)
    ts = np.linspace(0.0, 1.0, 41)
    width0 = b.at(0.0) - a.at(0.0)
    assert width0 > 0.0
    widths = np.array([b.at(float(t)) - a.at(float(t)) for t in ts])
    assert np.max(np.abs(widths - width0)) <= 1e-12
    # once pushed, the slab has moved to the right
    assert a.at(1.0) > a.at(0.0)


def test_weakstar_rejects_bad_windows(standard_run):
    with pytest.raises(OutOfRange):
        weakstar_pressure_error(standard_run, [(0.5, 2.0)])
    with pytest.raises(OutOfRange):
        weakstar_pressure_error(standard_run, [(0.7, 0.3)])


def test_weakstar_zero_for_constant_state():
    from machzero.fronttracker import run
    traj = run(make_scenario())
    errs = weakstar_pressure_error(traj, [(0.0, 0.5), (0.5, 1.0)])
    assert max(errs) <= 1e-14


def test_sweep_rejects_bad_kappa_lists():
    scn = standard_scenario()
    with pytest.raises(ValidationError):
        kappa_sweep(scn, kappas=[])
    with pytest.raises(ValidationError):
        kappa_sweep(scn, kappas=[0.1, 0.2])
    with pytest.raises(ValidationError):
        kappa_sweep(scn, kappas=[0.2, 0.2])
