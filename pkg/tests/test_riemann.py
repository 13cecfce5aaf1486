import math

import numpy as np
import pytest

from machzero.eos import GammaLaw, LiquidEos
from machzero.laxwaves import State, WaveFamily, lax_velocity
from machzero import riemann as R


GAS = GammaLaw(1.0, 1.0)
LIQ01 = LiquidEos(GAS, 1.0, 0.1)


def test_constant_datum_is_fixed_point():
    sol = R.solve_interior(GAS, State(1.0, 0.3), State(1.0, 0.3))
    assert sol.middle.p == pytest.approx(1.0, abs=1e-12)
    assert sol.middle.v == pytest.approx(0.3, abs=1e-12)
    assert sol.sigma1 == pytest.approx(0.0, abs=1e-12)
    assert sol.sigma2 == pytest.approx(0.0, abs=1e-12)


def test_symmetric_double_shock_closed_form():
    # gamma = k = 1 head-on collision: each shock carries half the velocity
    # jump, so (p - 1) / sqrt(p) = dv / 2
    sol = R.solve_interior(GAS, State(1.0, 0.0), State(1.0, -0.1))
    assert sol.middle.p == pytest.approx(1.0512656225590902, rel=1e-12)
    root = sol.middle.p
    assert (root - 1.0) / math.sqrt(root) == pytest.approx(0.05, abs=1e-12)
    assert sol.middle.v == pytest.approx(-0.05, abs=1e-12)


def test_middle_state_lies_on_both_curves():
    for med in (GAS, LIQ01):
        vmax = 0.02 * med.kappa
        rng = np.random.default_rng(11)
        for _ in range(50):
            l = State(float(1 + rng.uniform(-0.02, 0.02)),
                      float(rng.uniform(-vmax, vmax)))
            r = State(float(1 + rng.uniform(-0.02, 0.02)),
                      float(l.v + rng.uniform(-vmax, vmax)))
            sol = R.solve_interior(med, l, r)
            v1 = lax_velocity(med, WaveFamily.ONE, sol.middle.p, l)
            v2 = lax_velocity(med, WaveFamily.TWO, r.p, sol.middle)
            assert sol.middle.v == pytest.approx(v1, abs=1e-11)
            assert r.v == pytest.approx(v2, abs=1e-11)
            assert sol.sigma1 == pytest.approx(sol.middle.p - l.p, abs=1e-12)
            assert sol.sigma2 == pytest.approx(r.p - sol.middle.p, abs=1e-12)


def test_vectorized_matches_scalar_middle_pressure():
    rng = np.random.default_rng(4)
    pl = 1 + rng.uniform(-0.02, 0.02, 64)
    pr = 1 + rng.uniform(-0.02, 0.02, 64)
    vl = rng.uniform(-0.01, 0.01, 64)
    vr = vl + rng.uniform(-0.01, 0.01, 64)
    arr = R.middle_pressure(GAS, pl, vl, pr, vr)
    sc = np.array([R.middle_pressure(GAS, float(a), float(b), float(c), float(d))
                   for a, b, c, d in zip(pl, vl, pr, vr)])
    assert np.max(np.abs(arr - sc)) == 0.0


def test_interface_middle_frozen_value():
    # gas on the left of the slab, kappa = 0.1; value frozen from the
    # independent bisection oracle
    sol = R.solve_interface(R.GAS_LEFT, GAS, LIQ01,
                            State(1.0, 0.0), State(1.05, 0.02))
    assert sol.middle.p == pytest.approx(0.986446840647633, rel=1e-10)
    assert sol.middle.v == pytest.approx(0.013645841795911828, rel=1e-9)


def test_interface_nearly_rigid_slab_passes_velocity():
    # almost incompressible slab: the middle velocity approaches the
    # right-state velocity at rate O(kappa)
    gaps = []
    for kap in (0.1, 0.05, 0.025):
        liq = LiquidEos(GAS, 1.0, kap)
        sol = R.solve_interface(R.GAS_LEFT, GAS, liq,
                                State(1.0, 0.0), State(1.0, -0.001 * kap))
        gaps.append(abs(sol.middle.v - (-0.001 * kap)) / kap)
    assert gaps[0] < 0.002 and gaps[1] < 0.002 and gaps[2] < 0.002


def test_piston_boundary_no_wave_for_matching_velocity():
    sol = R.solve_piston_boundary(R.LEFT_GAS, GAS, State(1.0, 0.2), 0.2)
    assert sol.middle.p == pytest.approx(1.0, abs=1e-12)
    assert sol.middle.v == pytest.approx(0.2, abs=1e-12)


def test_piston_boundary_compression_frozen_root():
    # gas in z < 0, wall advancing into it: (p - 1) / sqrt(p) = 0.1
    sol = R.solve_piston_boundary(R.LEFT_GAS, GAS, State(1.0, 0.0), -0.1)
    assert sol.middle.p == pytest.approx(1.1051249219721961, rel=1e-12)


def test_piston_boundary_expansion_closed_form():
    # receding wall, gamma = k = 1: boundary pressure is exactly exp(-dv)
    sol = R.solve_piston_boundary(R.LEFT_GAS, GAS, State(1.0, 0.0), 0.1)
    assert sol.middle.p == pytest.approx(math.exp(-0.1), rel=1e-12)


def test_piston_boundary_left_right_symmetry():
    # pushing into the gas from either side produces the same pressure
    pl = R.solve_piston_boundary(R.LEFT_GAS, GAS, State(1.0, 0.0), -0.1)
    pr = R.solve_piston_boundary(R.RIGHT_GAS, GAS, State(1.0, 0.0), 0.1)
    assert pl.middle.p == pytest.approx(pr.middle.p, rel=1e-12)
    er = R.solve_piston_boundary(R.RIGHT_GAS, GAS, State(1.0, 0.0), -0.1)
    assert er.middle.p == pytest.approx(math.exp(-0.1), rel=1e-12)


def test_discretize_rarefaction_pieces():
    sigma = -0.037
    eps = 0.01
    pieces = R.discretize_rarefaction(GAS, WaveFamily.ONE, State(1.0, 0.0),
                                      sigma, eps)
    assert len(pieces) == math.ceil(abs(sigma) / eps)
    total = sum(s for s, _, _, _ in pieces)
    assert total == pytest.approx(sigma, abs=1e-14)
    # chained endpoint states and sub-eps pieces
    prev = State(1.0, 0.0)
    for s, left, right, speed in pieces:
        assert abs(s) <= eps + 1e-14
        assert left == prev
        assert right.p == pytest.approx(left.p + s, abs=1e-12)
        prev = right
    assert prev.p == pytest.approx(1.0 + sigma, abs=1e-12)
