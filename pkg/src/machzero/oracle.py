"""Independent reference solvers used as ground truth in the test suite.

riemann_bisect solves the wave-curve intersection by pure bisection on the
direct (branchwise) Lax curve representation, sharing no code with the
production Newton solver.  godunov is a first-order finite-volume scheme on
equal-mass cells with the slab boundaries aligned to cell faces; it shares
only the eos layer with the front tracker, so agreement between the two is
evidence rather than tautology.  godunov_piston is the finite-volume variant
of the rigid-piston limit model.
"""

import math
from typing import Tuple

import numpy as np

from .eos import P_MIN
from .errors import CFLViolation, NoBracket
from .laxwaves import State, WaveFamily, lax_velocity_direct
from .fronttracker import PiecewiseField
from . import riemann as _riemann


def _v_from_left(m, p, left):
    """Velocity of the middle state reached from the left state by a
    family-One wave down to pressure p."""
    return lax_velocity_direct(m, WaveFamily.ONE, p, left)


def _v_from_right(m, p, right):
    """Velocity of the middle state from which the right state is reached by
    a family-Two wave: the curve offset does not depend on the anchor
    velocity, so it can be evaluated at velocity zero and subtracted."""
    offset = lax_velocity_direct(m, WaveFamily.TWO, right.p, State(p, 0.0))
    return right.v - offset


def riemann_bisect(medium, left, right, tol=1e-10, gas=None, liq=None):
    """Middle pressure by bisection on the v-curve mismatch.

    medium is either a Medium (interior problem) or one of the interface
    orientation strings, in which case gas and liq must be given.
    """
    left = State(*left)
    right = State(*right)
    if isinstance(medium, str):
        if medium == _riemann.GAS_LEFT:
            m_l, m_r = gas, liq
        elif medium == _riemann.LIQUID_LEFT:
            m_l, m_r = liq, gas
        else:
            raise ValueError(f"unknown orientation {medium!r}")
    else:
        m_l = m_r = medium
    if left == right:
        return left.p

    # h(p) = _v_from_left - _v_from_right with the anchor-side quantities
    # hoisted out of the loop; equality with the un-hoisted form is unit
    # tested.
    pL, vL = left
    pR, vR = right
    tau_l, sp_l, pi_l = m_l.tau, m_l.base.slope_prim, m_l.pi
    tau_r, sp_r, pi_r = m_r.tau, m_r.base.slope_prim, m_r.pi
    tau_l0 = tau_l(pL)
    sp_l0 = sp_l(pi_l(pL))
    kap_l = m_l.kappa
    tau_r0 = tau_r(pR)
    sp_r0 = sp_r(pi_r(pR))
    kap_r = m_r.kappa
    sqrt = math.sqrt

    def h(p):
        if p >= pL:
            v_left = vL - sqrt(max(-(tau_l(p) - tau_l0) * (p - pL), 0.0))
        else:
            v_left = vL - (sp_l(pi_l(p)) - sp_l0) / kap_l
        if pR <= p:
            v_right = vR + sqrt(max(-(tau_r0 - tau_r(p)) * (pR - p), 0.0))
        else:
            v_right = vR - (sp_r0 - sp_r(pi_r(p))) / kap_r
        return v_left - v_right

    lo = max(P_MIN, min(left.p, right.p))
    hi = max(left.p, right.p)
    span = max(hi - lo, 1e-6)
    f_lo, f_hi = h(lo), h(hi)
    for _ in range(200):
        if f_lo >= 0.0 >= f_hi or f_lo <= 0.0 <= f_hi:
            break
        lo = max(P_MIN, lo - span)
        hi = hi + span
        f_lo, f_hi = h(lo), h(hi)
        span *= 2.0
    else:
        raise NoBracket("no sign change of the curve mismatch")
    if f_lo == 0.0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = h(mid)
        if (f_lo > 0.0) == (f_mid > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def riemann_bisect_many(medium, pl, vl, pr, vr, tol=1e-10, gas=None, liq=None):
    """Batch variant of riemann_bisect: the same bracketing bisection on the
    v-curve mismatch, one numpy lane per problem.  Agreement with the scalar
    routine is unit tested."""
    if isinstance(medium, str):
        if medium == _riemann.GAS_LEFT:
            m_l, m_r = gas, liq
        elif medium == _riemann.LIQUID_LEFT:
            m_l, m_r = liq, gas
        else:
            raise ValueError(f"unknown orientation {medium!r}")
    else:
        m_l = m_r = medium
    pl = np.asarray(pl, dtype=float)
    vl = np.asarray(vl, dtype=float)
    pr = np.asarray(pr, dtype=float)
    vr = np.asarray(vr, dtype=float)
    tau_l, sp_l, pi_l = m_l.tau, m_l.base.slope_prim, m_l.pi
    tau_r, sp_r, pi_r = m_r.tau, m_r.base.slope_prim, m_r.pi
    tau_l0 = tau_l(pl)
    sp_l0 = sp_l(pi_l(pl))
    tau_r0 = tau_r(pr)
    sp_r0 = sp_r(pi_r(pr))

    def h(p):
        v_shk = vl - np.sqrt(np.maximum(-(tau_l(p) - tau_l0) * (p - pl), 0.0))
        v_rar = vl - (sp_l(pi_l(p)) - sp_l0) / m_l.kappa
        v_left = np.where(p >= pl, v_shk, v_rar)
        w_shk = vr + np.sqrt(np.maximum(-(tau_r0 - tau_r(p)) * (pr - p), 0.0))
        w_rar = vr - (sp_r0 - sp_r(pi_r(p))) / m_r.kappa
        return v_left - np.where(pr <= p, w_shk, w_rar)

    lo = np.maximum(P_MIN, np.minimum(pl, pr))
    hi = np.maximum(pl, pr)
    span = np.maximum(hi - lo, 1e-6)
    f_lo, f_hi = h(lo), h(hi)
    for _ in range(200):
        open_ = f_lo * f_hi > 0.0
        if not np.any(open_):
            break
        lo = np.where(open_, np.maximum(P_MIN, lo - span), lo)
        hi = np.where(open_, hi + span, hi)
        f_lo, f_hi = h(lo), h(hi)
        span = np.where(open_, 2.0 * span, span)
    else:
        raise NoBracket("no sign change of the curve mismatch")
    root_lo = f_lo == 0.0
    root_val = lo.copy()
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = h(mid)
        go_lo = (f_lo > 0.0) == (f_mid > 0.0)
        lo = np.where(go_lo, mid, lo)
        f_lo = np.where(go_lo, f_mid, f_lo)
        hi = np.where(go_lo, hi, mid)
        if np.max(hi - lo) <= tol:
            break
    out = 0.5 * (lo + hi)
    same = (pl == pr) & (vl == vr)
    return np.where(same, pl, np.where(root_lo, root_val, out))


# --------------------------------------------------------------------------
# finite-volume reference

def _build_mesh(scenario, cells, lo, hi):
    """Equal-mass mesh with z = 0 and z = m on cell faces."""
    m = scenario.m
    k = max(1, round(cells * m / (hi - lo)))
    dx = m / k
    n_left = max(1, math.ceil((0.0 - lo) / dx))
    n_right = max(1, math.ceil((hi - m) / dx))
    edges = np.arange(-n_left, k + n_right + 1, dtype=float) * dx
    edges[-1] = m + n_right * dx
    return edges, k, n_left


def _middle_states(med, pl, vl, pr, vr):
    pm = _riemann.middle_pressure(med, pl, vl, pr, vr)
    vm = vl - med.kappa * (pm - pl) * med.f_kernel(pm, pl)
    return pm, vm


def godunov(scenario, cells=400, cfl=0.45, T=None, window=(-3.0, 4.0)):
    """First-order Godunov solve in Lagrangian mass coordinates.

    Returns the cell-averaged field at time T as a PiecewiseField.  The two
    faces at z = 0 and z = m use the interface Riemann solver; all other
    faces are single-medium.  Outer boundaries are transmissive.
    """
    if cfl > 0.5:
        raise CFLViolation(f"cfl {cfl} above the stability bound 0.5")
    if T is None:
        T = scenario.t_end
    gas = scenario.gas
    liq = scenario.liquid
    edges, k, n_left = _build_mesh(scenario, cells, *window)
    dx = edges[1] - edges[0]
    centers = 0.5 * (edges[:-1] + edges[1:])
    n = centers.size
    liq_cell = (centers > 0.0) & (centers < scenario.m)
    field0 = scenario.initial_field()
    idx = np.searchsorted(field0.breaks, centers, side="right")
    p = field0.p[idx].copy()
    v = field0.v[idx].copy()
    tau = np.where(liq_cell, liq.tau(p), gas.tau(p))
    i_face0 = n_left          # face index of z = 0 (between cells i-1, i)
    i_facem = n_left + k      # face index of z = m
    t = 0.0
    while t < T - 1e-14:
        lam_gas = np.sqrt(-1.0 / gas.dtau(p[~liq_cell])).max()
        lam = lam_gas
        if np.any(liq_cell):
            lam = max(lam, np.sqrt(-1.0 / liq.dtau(p[liq_cell])).max())
        dt = min(cfl * dx / lam, T - t)
        # interior same-medium faces, vectorized per medium
        fl_v = np.empty(n + 1)   # flux of tau equation: -v*
        fl_p = np.empty(n + 1)   # flux of v equation:  p*
        face_liq = np.zeros(n + 1, dtype=bool)
        face_liq[1:-1] = liq_cell[:-1] & liq_cell[1:]
        face_gas = np.zeros(n + 1, dtype=bool)
        face_gas[1:-1] = ~liq_cell[:-1] & ~liq_cell[1:]
        face_gas[i_face0] = face_gas[i_facem] = False
        for med, mask in ((gas, face_gas), (liq, face_liq)):
            j = np.nonzero(mask)[0]
            if j.size == 0:
                continue
            pm, vm = _middle_states(med, p[j - 1], v[j - 1], p[j], v[j])
            fl_v[j] = -vm
            fl_p[j] = pm
        for jf, orient in ((i_face0, _riemann.GAS_LEFT),
                           (i_facem, _riemann.LIQUID_LEFT)):
            sol = _riemann.solve_interface(orient, gas, liq,
                                           State(p[jf - 1], v[jf - 1]),
                                           State(p[jf], v[jf]))
            fl_v[jf] = -sol.middle.v
            fl_p[jf] = sol.middle.p
        # transmissive outer boundaries: zero net flux difference at the ends
        fl_v[0], fl_p[0] = -v[0], p[0]
        fl_v[-1], fl_p[-1] = -v[-1], p[-1]
        tau = tau - (dt / dx) * (fl_v[1:] - fl_v[:-1])
        v = v - (dt / dx) * (fl_p[1:] - fl_p[:-1])
        p = np.where(liq_cell, liq.p_of_tau(tau), gas.p_of_tau(tau))
        t += dt
    return PiecewiseField(edges[1:-1], p, v, tau)


def godunov_piston(scenario, cells=400, cfl=0.45, T=None, window=(-3.0, 4.0)):
    """Finite-volume rigid-piston reference: gas on the two half-lines, the
    slab replaced by a piston of mass m whose velocity is advanced with the
    wall pressures every step.  Returns (field, times, piston velocities)."""
    if cfl > 0.5:
        raise CFLViolation(f"cfl {cfl} above the stability bound 0.5")
    if T is None:
        T = scenario.t_end
    gas = scenario.gas
    m_slab = scenario.m
    edges, k, n_left = _build_mesh(scenario, cells, *window)
    dx = edges[1] - edges[0]
    centers = 0.5 * (edges[:-1] + edges[1:])
    gas_cell = (centers < 0.0) | (centers > m_slab)
    field0 = scenario.initial_field()
    idx = np.searchsorted(field0.breaks, centers, side="right")
    p = field0.p[idx].copy()
    v = field0.v[idx].copy()
    tau = gas.tau(p)
    i_face0 = n_left
    i_facem = n_left + k
    v_l = scenario.v_o
    t = 0.0
    times, vls = [0.0], [v_l]
    while t < T - 1e-14:
        lam = np.sqrt(-1.0 / gas.dtau(p[gas_cell])).max()
        dt = min(cfl * dx / lam, T - t)
        fl_v = np.zeros(len(p) + 1)
        fl_p = np.zeros(len(p) + 1)
        inner = np.zeros(len(p) + 1, dtype=bool)
        inner[1:-1] = gas_cell[:-1] & gas_cell[1:]
        j = np.nonzero(inner)[0]
        pm, vm = _middle_states(gas, p[j - 1], v[j - 1], p[j], v[j])
        fl_v[j] = -vm
        fl_p[j] = pm
        p_bl = _riemann.solve_piston_boundary(
            _riemann.LEFT_GAS, gas, State(p[i_face0 - 1], v[i_face0 - 1]),
            v_l).middle.p
        p_br = _riemann.solve_piston_boundary(
            _riemann.RIGHT_GAS, gas, State(p[i_facem], v[i_facem]),
            v_l).middle.p
        fl_v[i_face0], fl_p[i_face0] = -v_l, p_bl
        fl_v[i_facem], fl_p[i_facem] = -v_l, p_br
        fl_v[0], fl_p[0] = -v[0], p[0]
        fl_v[-1], fl_p[-1] = -v[-1], p[-1]
        upd = gas_cell
        tau[upd] = tau[upd] - (dt / dx) * (fl_v[1:] - fl_v[:-1])[upd]
        v[upd] = v[upd] - (dt / dx) * (fl_p[1:] - fl_p[:-1])[upd]
        p[upd] = gas.p_of_tau(tau[upd])
        v_l = v_l + (dt / m_slab) * (p_bl - p_br)
        t += dt
        times.append(t)
        vls.append(v_l)
    v[~gas_cell] = v_l
    return PiecewiseField(edges[1:-1], p, v, tau), np.array(times), np.array(vls)


def l1_distance(f1, f2, lo, hi, components=("p", "v")):
    """Exact integral of |f1 - f2| over [lo, hi], summed over components,
    using breakpoint merging."""
    cuts = np.unique(np.concatenate((
        [lo, hi],
        f1.breaks[(f1.breaks > lo) & (f1.breaks < hi)],
        f2.breaks[(f2.breaks > lo) & (f2.breaks < hi)])))
    widths = np.diff(cuts)
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    i1 = np.searchsorted(f1.breaks, mids, side="right")
    i2 = np.searchsorted(f2.breaks, mids, side="right")
    total = 0.0
    for comp in components:
        a = f1.values(comp)[i1]
        b = f2.values(comp)[i2]
        total += float(np.sum(np.abs(a - b) * widths))
    return total
