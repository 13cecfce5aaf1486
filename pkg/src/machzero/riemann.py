"""Riemann solvers: interior (single medium), phase interface (both
orientations), prescribed-velocity wall, and rarefaction-fan discretization.

All middle pressures are roots of a scalar function G(p) that is the velocity
mismatch accumulated along the 1-curve from the left state and the reversed
2-curve from the right state.  G is strictly increasing in p near the data,
so a damped Newton iteration safeguarded by an evolving bracket converges
unconditionally once a sign change is found.  Every routine is vectorized
over numpy arrays; scalars go through the same path.
"""

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .eos import P_MIN
from .errors import NoConvergence, NotARarefaction
from .laxwaves import State, WaveFamily, WaveKind, char_speed, classify, lax_velocity

GAS_LEFT = "gas_left"
LIQUID_LEFT = "liquid_left"
LEFT_GAS = "left_gas"
RIGHT_GAS = "right_gas"

_P_FLOOR = P_MIN * (1.0 + 1e-6)


@dataclass
class RiemannSolution:
    middle: State
    sigma1: float
    sigma2: float
    fan1: List[float] = field(default_factory=list)
    fan2: List[float] = field(default_factory=list)


def _bracket(g, p0, span0, lo_min):
    """Expand around p0 until g(lo) <= 0 <= g(hi) componentwise."""
    lo = np.maximum(lo_min, p0 - span0)
    hi = p0 + span0
    span = np.maximum(span0, 1e-12)
    for _ in range(200):
        bad_lo = g(lo) > 0.0
        bad_hi = g(hi) < 0.0
        if not (np.any(bad_lo) or np.any(bad_hi)):
            return lo, hi
        lo = np.where(bad_lo, np.maximum(lo_min, lo - span), lo)
        hi = np.where(bad_hi, hi + span, hi)
        span = span * 2.0
        if np.any(bad_lo & (lo <= lo_min) & (g(np.full_like(lo, lo_min)) > 0.0)) and False:
            break
    raise NoConvergence("no sign change found while bracketing the middle pressure")


def _bracket_scalar(g, p0, span0, lo_min):
    lo = max(lo_min, p0 - span0)
    hi = p0 + span0
    span = max(span0, 1e-12)
    glo, ghi = g(lo), g(hi)
    for _ in range(200):
        if glo <= 0.0 <= ghi:
            return lo, hi
        if glo > 0.0:
            lo = max(lo_min, lo - span)
            glo = g(lo)
        if ghi < 0.0:
            hi = hi + span
            ghi = g(hi)
        span *= 2.0
    raise NoConvergence("no sign change found while bracketing the middle pressure")


def _newton_scalar(g, gp, lo, hi, tol, maxit=100):
    eps4 = 4.0 * np.finfo(float).eps
    p = 0.5 * (lo + hi)
    for _ in range(maxit):
        gv = g(p)
        if abs(gv) <= tol or (hi - lo) <= eps4 * max(1.0, abs(p)):
            return p
        if gv < 0.0:
            lo = p
        else:
            hi = p
        gpv = gp(p)
        if gpv > 0.0:
            cand = p - gv / gpv
            p = cand if lo < cand < hi else 0.5 * (lo + hi)
        else:
            p = 0.5 * (lo + hi)
    raise NoConvergence("middle-pressure iteration did not converge")


def _safeguarded_newton(g, gp, lo, hi, tol, maxit=100):
    """Newton iteration clipped into a shrinking bracket; |g| <= tol or a
    collapsed bracket terminates."""
    p = 0.5 * (lo + hi)
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    done = np.zeros_like(p, dtype=bool)
    for _ in range(maxit):
        gv = g(p)
        done |= np.abs(gv) <= tol
        done |= (hi - lo) <= 4.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(p))
        if np.all(done):
            return p
        lo = np.where(~done & (gv < 0.0), p, lo)
        hi = np.where(~done & (gv > 0.0), p, hi)
        gpv = gp(p)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(gpv > 0.0, gv / np.where(gpv > 0.0, gpv, 1.0), np.inf)
        cand = p - step
        inside = (cand > lo) & (cand < hi) & np.isfinite(cand)
        p = np.where(done, p, np.where(inside, cand, 0.5 * (lo + hi)))
    raise NoConvergence("middle-pressure iteration did not converge")


def middle_pressure(m, pl, vl, pr, vr, tol=1e-12):
    """Middle pressure of the interior Riemann problem (scalar or
    vectorized over numpy arrays)."""
    if all(np.ndim(x) == 0 for x in (pl, vl, pr, vr)):
        return _middle_pressure_scalar(m, float(pl), float(vl), float(pr),
                                       float(vr), tol)
    pl = np.asarray(pl, dtype=float)
    vl = np.asarray(vl, dtype=float)
    pr = np.asarray(pr, dtype=float)
    vr = np.asarray(vr, dtype=float)
    kap = m.kappa
    k2 = kap * kap
    base = m.base
    Pl = m.pi(pl)
    Pr = m.pi(pr)
    xi = (vr - vl) / kap

    def g(p):
        P = m.pi(p)
        return xi + (p - pl) * base.f_kernel(P, Pl) - (pr - p) * base.f_kernel(P, Pr)

    def gprime(p):
        P = m.pi(p)
        return (base.f_kernel(P, Pl) + (p - pl) * k2 * base.f_kernel_dx(P, Pl)
                + base.f_kernel(P, Pr) - (pr - p) * k2 * base.f_kernel_dx(P, Pr))

    scale = base.f_kernel(m.pi(0.5 * (pl + pr)), m.pi(0.5 * (pl + pr)))
    span0 = 0.6 * np.abs(pr - pl) + np.abs(xi) / scale + 1e-9
    lo_min = _liquid_floor(m)
    lo, hi = _bracket(g, 0.5 * (pl + pr), span0, lo_min)
    return _safeguarded_newton(g, gprime, lo, hi, tol)


def _middle_pressure_scalar(m, pl, vl, pr, vr, tol):
    kap = m.kappa
    k2 = kap * kap
    base = m.base
    Pl = m.pi(pl)
    Pr = m.pi(pr)
    xi = (vr - vl) / kap

    def g(p):
        P = m.pi(p)
        return xi + (p - pl) * base.f_kernel(P, Pl) - (pr - p) * base.f_kernel(P, Pr)

    def gprime(p):
        P = m.pi(p)
        return (base.f_kernel(P, Pl) + (p - pl) * k2 * base.f_kernel_dx(P, Pl)
                + base.f_kernel(P, Pr) - (pr - p) * k2 * base.f_kernel_dx(P, Pr))

    pm = m.pi(0.5 * (pl + pr))
    scale = base.f_kernel(pm, pm)
    span0 = 0.6 * abs(pr - pl) + abs(xi) / scale + 1e-9
    lo_min = _liquid_floor(m)
    lo, hi = _bracket_scalar(g, 0.5 * (pl + pr), span0, lo_min)
    return _newton_scalar(g, gprime, lo, hi, tol)


def _liquid_floor(m):
    # the global positivity guard also keeps pi(p) positive for kappa <= 1
    return _P_FLOOR


def solve_interior(m, left, right, tol=1e-12, eps=None):
    """Exact Riemann solution in a single medium."""
    if left == right:
        return RiemannSolution(middle=State(*left), sigma1=0.0, sigma2=0.0)
    p_m = float(middle_pressure(m, left.p, left.v, right.p, right.v, tol))
    v_m = float(lax_velocity(m, WaveFamily.ONE, p_m, left))
    middle = State(p_m, v_m)
    sol = RiemannSolution(middle=middle, sigma1=p_m - left.p, sigma2=right.p - p_m)
    _fill_fans(m, sol, left, right, eps)
    return sol


def solve_interface(orientation, gas, liq, left, right, tol=1e-12, eps=None):
    """Riemann problem across a phase boundary.

    GAS_LEFT: gas on the left of the interface, liquid on the right (the
    z = 0 boundary); LIQUID_LEFT mirrors it (the z = m boundary).  The 1-wave
    lives in the left medium, the 2-wave in the right medium.
    """
    if left == right:
        return RiemannSolution(middle=State(*left), sigma1=0.0, sigma2=0.0)
    pl, vl = left
    pr, vr = right
    kap = liq.kappa
    base = liq.base
    xi = vr - vl

    if orientation == GAS_LEFT:
        Pr = liq.pi(pr)

        def g(p):
            return xi + (p - pl) * gas.f_kernel(p, pl) - kap * (pr - p) * base.f_kernel(liq.pi(p), Pr)

        def gprime(p):
            P = liq.pi(p)
            return (gas.f_kernel(p, pl) + (p - pl) * gas.f_kernel_dx(p, pl)
                    + kap * base.f_kernel(P, Pr)
                    - kap ** 3 * (pr - p) * base.f_kernel_dx(P, Pr))
    elif orientation == LIQUID_LEFT:
        Pl = liq.pi(pl)

        def g(p):
            return xi + kap * (p - pl) * base.f_kernel(liq.pi(p), Pl) - (pr - p) * gas.f_kernel(p, pr)

        def gprime(p):
            P = liq.pi(p)
            return (kap * base.f_kernel(P, Pl) + kap ** 3 * (p - pl) * base.f_kernel_dx(P, Pl)
                    + gas.f_kernel(p, pr) - (pr - p) * gas.f_kernel_dx(p, pr))
    else:
        raise ValueError(f"unknown orientation {orientation!r}")

    pm0 = 0.5 * (pl + pr)
    span0 = 0.6 * abs(pr - pl) + abs(xi) / gas.f_kernel(pm0, pm0) + 1e-9
    lo, hi = _bracket(g, np.float64(pm0), np.float64(span0), _P_FLOOR)
    p_m = float(_safeguarded_newton(g, gprime, lo, hi, tol))
    left_medium = gas if orientation == GAS_LEFT else liq
    v_m = float(lax_velocity(left_medium, WaveFamily.ONE, p_m, left))
    sol = RiemannSolution(middle=State(p_m, v_m), sigma1=p_m - pl, sigma2=pr - p_m)
    right_medium = liq if orientation == GAS_LEFT else gas
    _fill_fans_mixed(left_medium, right_medium, sol, left, right, eps)
    return sol


def solve_piston_boundary(side, gas, gas_state, wall_v, tol=1e-12, eps=None):
    """Single-wave Riemann problem against a wall of prescribed velocity.

    LEFT_GAS: the gas occupies z < 0 and the wall is on its right; the
    emitted wave is family One and runs leftward.  RIGHT_GAS mirrors it.
    """
    pg, vg = gas_state
    if wall_v == vg:
        return RiemannSolution(middle=State(*gas_state), sigma1=0.0, sigma2=0.0)

    if side == LEFT_GAS:
        def g(p):
            return (p - pg) * gas.f_kernel(p, pg) - (vg - wall_v)

        def gprime(p):
            return gas.f_kernel(p, pg) + (p - pg) * gas.f_kernel_dx(p, pg)
    elif side == RIGHT_GAS:
        # the wall state is the left anchor of the 2-curve through the gas
        def g(p):
            return (p - pg) * gas.f_kernel(p, pg) - (wall_v - vg)

        def gprime(p):
            return gas.f_kernel(p, pg) + (p - pg) * gas.f_kernel_dx(p, pg)
    else:
        raise ValueError(f"unknown side {side!r}")

    span0 = abs(vg - wall_v) / gas.f_kernel(pg, pg) + 1e-9
    lo, hi = _bracket(g, np.float64(pg), np.float64(span0), _P_FLOOR)
    p_b = float(_safeguarded_newton(g, gprime, lo, hi, tol))
    if side == LEFT_GAS:
        sol = RiemannSolution(middle=State(p_b, wall_v), sigma1=p_b - pg, sigma2=0.0)
        if eps is not None and sol.sigma1 != 0.0 and \
                classify(WaveFamily.ONE, sol.sigma1) is WaveKind.RAREFACTION:
            sol.fan1 = _equal_split(sol.sigma1, eps)
        elif sol.sigma1 != 0.0:
            sol.fan1 = [sol.sigma1]
    else:
        sol = RiemannSolution(middle=State(p_b, wall_v), sigma1=0.0, sigma2=pg - p_b)
        if eps is not None and sol.sigma2 != 0.0 and \
                classify(WaveFamily.TWO, sol.sigma2) is WaveKind.RAREFACTION:
            sol.fan2 = _equal_split(sol.sigma2, eps)
        elif sol.sigma2 != 0.0:
            sol.fan2 = [sol.sigma2]
    return sol


def _equal_split(sigma, eps):
    n = max(1, math.ceil(abs(sigma) / eps - 1e-12))
    return [sigma / n] * n


def _fill_fans(m, sol, left, right, eps):
    if sol.sigma1 != 0.0 and classify(WaveFamily.ONE, sol.sigma1) is WaveKind.RAREFACTION:
        sol.fan1 = _equal_split(sol.sigma1, eps) if eps else [sol.sigma1]
    if sol.sigma2 != 0.0 and classify(WaveFamily.TWO, sol.sigma2) is WaveKind.RAREFACTION:
        sol.fan2 = _equal_split(sol.sigma2, eps) if eps else [sol.sigma2]


def _fill_fans_mixed(left_medium, right_medium, sol, left, right, eps):
    _fill_fans(left_medium, sol, left, right, eps)  # classification is sign-only


def discretize_rarefaction(m, fam, from_state, sigma, eps) -> List[Tuple[float, State, State, float]]:
    """Split a rarefaction of total size sigma anchored at its left state into
    equal wavelets chained along the exact curve.

    Returns (sigma_j, left_j, right_j, speed_j) per wavelet, ordered left to
    right; speed_j is the characteristic speed of the wavelet's left state.
    """
    if classify(fam, sigma) is not WaveKind.RAREFACTION:
        raise NotARarefaction(f"family {int(fam)} with sigma {sigma} is a shock")
    n = max(1, math.ceil(abs(sigma) / eps - 1e-12))
    dsig = sigma / n
    out = []
    cur = State(*from_state)
    for j in range(n):
        p_next = from_state.p + dsig * (j + 1)
        v_next = float(lax_velocity(m, fam, p_next, cur))
        nxt = State(p_next, v_next)
        out.append((dsig, cur, nxt, float(char_speed(m, fam, cur.p))))
        cur = nxt
    return out
