"""Independent reference solvers: bisection Riemann solver, Godunov scheme,
exact L1 distance."""

import numpy as np
import pytest

from machzero.eos import GammaLaw, LiquidEos
from machzero.errors import CFLViolation
from machzero.laxwaves import State, lax_velocity_direct, WaveFamily
from machzero import oracle, riemann as R

from conftest import make_scenario, standard_scenario


GAS = GammaLaw(1.0, 1.0)
LIQ = LiquidEos(GAS, 1.0, 0.1)


def _h_reference(m_l, m_r, p, left, right):
    # the mismatch function written directly from the Lax curves, without
    # the hoisted constants the production bisection uses
    vl = lax_velocity_direct(m_l, WaveFamily.ONE, p, left)
    offset = lax_velocity_direct(m_r, WaveFamily.TWO, right.p, State(p, 0.0))
    return vl - (right.v - offset)


def test_bisect_root_zeroes_reference_mismatch():
    rng = np.random.default_rng(23)
    cases = [(GAS, GAS, None)]
    cases.append((GAS, LIQ, R.GAS_LEFT))
    cases.append((LIQ, GAS, R.LIQUID_LEFT))
    for m_l, m_r, orient in cases:
        for _ in range(40):
            vmax = 0.04 * min(m_l.kappa, m_r.kappa)
            left = State(float(1 + rng.uniform(-0.02, 0.02)),
                         float(rng.uniform(-vmax, vmax)))
            right = State(float(1 + rng.uniform(-0.02, 0.02)),
                          float(left.v + rng.uniform(-vmax, vmax)))
            if orient is None:
                pm = oracle.riemann_bisect(GAS, left, right)
            else:
                pm = oracle.riemann_bisect(orient, left, right,
                                           gas=GAS, liq=LIQ)
            assert abs(_h_reference(m_l, m_r, pm, left, right)) < 1e-9


def test_bisect_matches_newton_solver():
    rng = np.random.default_rng(5)
    for med in (GAS, LIQ):
        vmax = 0.04 * med.kappa
        for _ in range(200):
            left = State(float(1 + rng.uniform(-0.02, 0.02)),
                         float(rng.uniform(-vmax, vmax)))
            right = State(float(1 + rng.uniform(-0.02, 0.02)),
                          float(left.v + rng.uniform(-vmax, vmax)))
            pb = oracle.riemann_bisect(med, left, right)
            pn = R.middle_pressure(med, left.p, left.v, right.p, right.v)
            assert abs(pb - pn) <= 1e-10


def test_batch_bisect_matches_scalar():
    rng = np.random.default_rng(77)
    n = 300
    cases = [(GAS, None), (LIQ, None),
             (None, R.GAS_LEFT), (None, R.LIQUID_LEFT)]
    for med, orient in cases:
        kap = 1.0 if orient or med is GAS else med.kappa
        vmax = 0.02 * min(kap, LIQ.kappa if orient else kap)
        pl = 1 + rng.uniform(-0.02, 0.02, n)
        pr = 1 + rng.uniform(-0.02, 0.02, n)
        vl = rng.uniform(-vmax, vmax, n)
        vr = vl + rng.uniform(-vmax, vmax, n)
        # include one degenerate lane
        pl[0] = pr[0] = 1.003
        vl[0] = vr[0] = 0.004
        if orient is None:
            batch = oracle.riemann_bisect_many(med, pl, vl, pr, vr)
            scal = [oracle.riemann_bisect(med, State(pl[i], vl[i]),
                                          State(pr[i], vr[i]))
                    for i in range(n)]
        else:
            batch = oracle.riemann_bisect_many(orient, pl, vl, pr, vr,
                                               gas=GAS, liq=LIQ)
            scal = [oracle.riemann_bisect(orient, State(pl[i], vl[i]),
                                          State(pr[i], vr[i]),
                                          gas=GAS, liq=LIQ)
                    for i in range(n)]
        assert np.max(np.abs(batch - np.array(scal))) <= 1e-10
        assert batch[0] == 1.003


def test_l1_distance_basic_identities():
    f = standard_scenario().initial_field()
    assert oracle.l1_distance(f, f, -3.0, 4.0) == 0.0
    # a single unit jump of width 0.5 in one component
    from machzero.fronttracker import PiecewiseField
    g1 = PiecewiseField(np.array([0.0]), np.array([1.0, 1.0]),
                        np.array([0.0, 0.0]), np.array([1.0, 1.0]))
    g2 = PiecewiseField(np.array([0.5]), np.array([2.0, 1.0]),
                        np.array([0.0, 0.0]), np.array([0.5, 1.0]))
    assert oracle.l1_distance(g1, g2, 0.0, 2.0) == pytest.approx(0.5, abs=1e-14)
    # triangle inequality on the initial fields of two scenarios
    h = make_scenario().initial_field()
    d12 = oracle.l1_distance(f, g1, -3.0, 4.0)
    d23 = oracle.l1_distance(g1, h, -3.0, 4.0)
    d13 = oracle.l1_distance(f, h, -3.0, 4.0)
    assert d13 <= d12 + d23 + 1e-12


def test_godunov_preserves_constant_state():
    field = oracle.godunov(make_scenario(), cells=100, T=0.3)
    assert np.max(np.abs(field.p - 1.0)) <= 1e-13
    assert np.max(np.abs(field.v)) <= 1e-13


def test_godunov_rejects_unstable_cfl():
    with pytest.raises(CFLViolation):
        oracle.godunov(make_scenario(), cells=50, cfl=0.8)
    with pytest.raises(CFLViolation):
        oracle.godunov_piston(make_scenario(), cells=50, cfl=0.6)
