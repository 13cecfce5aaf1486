"""Total-variation functionals and the per-event monotonicity audit.

The weighted potential is

    Upsilon = K_in V_Gin + V_Gout + K_L V_L + H_G Q_G + kappa^2 H_L Q_L

where V sums |sigma| over three classes (gas waves running toward the slab,
gas waves running away, all waves inside the slab) and Q sums |sigma sigma'|
over approaching pairs within each of the intervals ]-inf,0[, ]0,m[, ]m,inf[.
Two waves in the same interval approach iff they are of the same family with
at least one shock, or of different families with the family-One wave on the
right.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .errors import InfeasibleConstants
from .laxwaves import State, WaveFamily, WaveKind, lax_velocity
from . import riemann as _riemann

REGION_GAS_LEFT = 0
REGION_LIQUID = 1
REGION_GAS_RIGHT = 2

CLASS_G_IN = "G_in"
CLASS_G_OUT = "G_out"
CLASS_L = "L"

LOC_GAS = "Gas"
LOC_LIQUID = "Liquid"
LOC_IFACE_LEFT = "InterfaceLeft"
LOC_IFACE_RIGHT = "InterfaceRight"
LOC_STRIP = "StripEdge"


@dataclass(frozen=True)
class GlimmWeights:
    K_in: float
    K_L: float
    H_G: float
    H_L: float
    C: float
    c: float
    delta_bar: float


@dataclass
class GlimmReport:
    V_G_in: float
    V_G_out: float
    V_L: float
    Q_G: float
    Q_L: float
    upsilon: float
    wtv: float


def default_weights(C, c, delta_bar=float("inf")):
    """Smallest weights satisfying the five admissibility inequalities:
    C - c K_L <= -2;  2 - K_in + 3 K_L <= -2;  C(1+K_in) - H_G/2 <= -1;
    C K_L - H_L/2 <= -1;  (C H_G + H_L) db <= 1 and (2 H_G + 3 H_L) db <= 1.
    """
    if not (c > 0.0):
        raise InfeasibleConstants("reflection lower bound c must be positive")
    K_L = max(1.0, (C + 2.0) / c)
    K_in = max(1.0, 4.0 + 3.0 * K_L)
    H_G = max(1.0, 2.0 * (1.0 + C * (1.0 + K_in)))
    H_L = max(1.0, 2.0 * (1.0 + C * K_L))
    db = min(delta_bar, 1.0 / (C * H_G + H_L), 1.0 / (2.0 * H_G + 3.0 * H_L))
    return GlimmWeights(K_in=K_in, K_L=K_L, H_G=H_G, H_L=H_L, C=C, c=c, delta_bar=db)


def estimate_constants(gas, liq_base, p_bar, box, kappas, samples=120, seed=12345):
    """Empirical (C, c) for the weight construction.

    C: measured worst interaction-estimate ratio over sampled interior
    collisions (gas raw, liquid scaled by kappa^2), floored at 1 and doubled.
    c: 0.5 times the smallest ratio of the liquid slope kernel (at the
    pi-compressed arguments) to the gas kernel over the pressure box.
    """
    from .eos import LiquidEos

    rng = np.random.default_rng(seed)
    p_lo, p_hi = box
    grid = np.linspace(p_lo, p_hi, 9)
    X, Y = np.meshgrid(grid, grid)
    c_val = np.inf
    ratios = [0.0]
    for kap in kappas:
        liq = LiquidEos(liq_base, p_bar, kap)
        ratio = liq_base.f_kernel(liq.pi(X), liq.pi(Y)) / gas.f_kernel(X, Y)
        c_val = min(c_val, float(np.min(ratio)))
        for med, scale in ((gas, 1.0), (liq, kap * kap)):
            for _ in range(samples):
                r = _sample_interaction_ratio(med, rng, p_lo, p_hi)
                if r is not None:
                    ratios.append(r / scale)
    C = max(1.0, float(np.max(ratios))) * 2.0
    return C, 0.5 * c_val


def _sample_interaction_ratio(medium, rng, p_lo, p_hi):
    """Ratio (|sigma1+ - sigma1-| + |sigma2+ - sigma2-|) / |sigma1- sigma2-|
    for a random head-on pair (2-wave then 1-wave, left to right)."""
    span = p_hi - p_lo
    p0 = rng.uniform(p_lo + 0.25 * span, p_hi - 0.25 * span)
    sa = rng.uniform(-0.1, 0.1) * span  # left 2-wave
    sb = rng.uniform(-0.1, 0.1) * span  # right 1-wave
    if abs(sa) < 1e-6 or abs(sb) < 1e-6:
        return None
    u_l = State(p0, 0.0)
    u_m = State(p0 + sa, float(lax_velocity(medium, WaveFamily.TWO, p0 + sa, u_l)))
    u_r = State(u_m.p + sb, float(lax_velocity(medium, WaveFamily.ONE, u_m.p + sb, u_m)))
    try:
        sol = _riemann.solve_interior(medium, u_l, u_r)
    except Exception:
        return None
    return (abs(sol.sigma1 - sb) + abs(sol.sigma2 - sa)) / abs(sa * sb)


# -- functional evaluation ---------------------------------------------------

def region_of(z, m, speed=0.0):
    """Interval index of a position; points exactly at an interface are
    assigned by the direction of motion."""
    if z < 0.0 or (z == 0.0 and speed < 0.0):
        return REGION_GAS_LEFT
    if z > m or (z == m and speed > 0.0):
        return REGION_GAS_RIGHT
    return REGION_LIQUID


def class_of(region, fam):
    if region == REGION_LIQUID:
        return CLASS_L
    toward = (region == REGION_GAS_LEFT and fam == WaveFamily.TWO) or \
             (region == REGION_GAS_RIGHT and fam == WaveFamily.ONE)
    return CLASS_G_IN if toward else CLASS_G_OUT


def approaching_matrix(region, fam, shock):
    """Boolean matrix of approaching pairs (i < j in position order)."""
    n = len(region)
    reg = np.asarray(region)
    fam = np.asarray(fam)
    shock = np.asarray(shock)
    same_reg = reg[:, None] == reg[None, :]
    same_fam = fam[:, None] == fam[None, :]
    any_shock = shock[:, None] | shock[None, :]
    # j > i means j is to the right of i
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    appr_same = same_fam & any_shock
    appr_diff = (~same_fam) & (fam[:, None] == WaveFamily.TWO) & (fam[None, :] == WaveFamily.ONE)
    return upper & same_reg & (appr_same | appr_diff)


def upsilon_from_arrays(z_or_region, fam, shock, sigma, w, kappa, m,
                        dv=None, regions_given=False):
    """From-scratch functional over position-ordered wave arrays."""
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.size
    if n == 0:
        return GlimmReport(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    if regions_given:
        reg = np.asarray(z_or_region)
    else:
        z = np.asarray(z_or_region, dtype=float)
        reg = np.where(z < 0.0, REGION_GAS_LEFT,
                       np.where(z > m, REGION_GAS_RIGHT, REGION_LIQUID))
    fam = np.asarray(fam)
    shock = np.asarray(shock, dtype=bool)
    asig = np.abs(sigma)
    in_mask = ((reg == REGION_GAS_LEFT) & (fam == WaveFamily.TWO)) | \
              ((reg == REGION_GAS_RIGHT) & (fam == WaveFamily.ONE))
    liq_mask = reg == REGION_LIQUID
    out_mask = ~in_mask & ~liq_mask
    V_in = float(asig[in_mask].sum())
    V_out = float(asig[out_mask].sum())
    V_L = float(asig[liq_mask].sum())
    appr = approaching_matrix(reg, fam, shock)
    prod = asig[:, None] * asig[None, :]
    gaspair = (reg != REGION_LIQUID)[:, None]
    Q_G = float(prod[appr & gaspair].sum())
    Q_L = float(prod[appr & ~gaspair].sum())
    ups = w.K_in * V_in + V_out + w.K_L * V_L + w.H_G * Q_G + kappa ** 2 * w.H_L * Q_L
    wtv_val = float(asig.sum())
    if dv is not None:
        dvv = np.abs(np.asarray(dv, dtype=float))
        wtv_val += float(dvv[~liq_mask].sum()) + float(dvv[liq_mask].sum()) / kappa
    return GlimmReport(V_in, V_out, V_L, Q_G, Q_L, ups, wtv_val)


def upsilon(ss, w, kappa, m):
    """Functional of a simulation state (anything exposing `fronts` with
    z, family, kind, sigma, left, right attributes, position ordered)."""
    fronts = ss.fronts if hasattr(ss, "fronts") else ss
    z = [f.z for f in fronts]
    fam = [int(f.family) for f in fronts]
    shock = [f.kind is WaveKind.SHOCK for f in fronts]
    sigma = [f.sigma for f in fronts]
    dv = [f.right.v - f.left.v for f in fronts]
    reg = [getattr(f, "region", None) for f in fronts]
    if all(r is not None for r in reg):
        return upsilon_from_arrays(reg, fam, shock, sigma, w, kappa, m,
                                   dv=dv, regions_given=True)
    return upsilon_from_arrays(z, fam, shock, sigma, w, kappa, m, dv=dv)


def wtv(field, kappa, m):
    """Weighted total variation of a piecewise-constant (p, v) profile:
    TV(p; R) + TV(v; gas) + (1/kappa) TV(v; liquid)."""
    breaks = np.asarray(field.breaks, dtype=float)
    p = np.asarray(field.p, dtype=float)
    v = np.asarray(field.v, dtype=float)
    dp = np.abs(np.diff(p))
    dvv = np.abs(np.diff(v))
    liq = (breaks > 0.0) & (breaks < m)
    return float(dp.sum() + dvv[~liq].sum() + dvv[liq].sum() / kappa)


# -- audit -------------------------------------------------------------------

@dataclass
class AuditReport:
    events: int
    violations: List[str] = field(default_factory=list)
    worst_monotonicity_margin: float = float("-inf")
    worst_bound_margin: float = float("-inf")
    worst_sigma_sum: float = 0.0
    come_sign_violations: int = 0

    @property
    def passed(self):
        return not self.violations


def audit(ledger, w, kappa, rel_tol=1e-9):
    """Check every ledger event for functional decrease and the
    location-specific decrease bounds; interface events additionally for the
    sigma-sum identity and the single-incoming sign pattern."""
    rep = AuditReport(events=len(ledger))
    for ev in ledger:
        slack = rel_tol * max(ev.upsilon_before, 1e-12) + 1e-13
        if ev.location == LOC_STRIP:
            if abs(ev.d_upsilon) > slack:
                rep.violations.append(
                    f"t={ev.time}: strip event changed the functional by {ev.d_upsilon}")
            continue
        margin = ev.d_upsilon - slack
        rep.worst_monotonicity_margin = max(rep.worst_monotonicity_margin, margin)
        if ev.d_upsilon > slack:
            rep.violations.append(
                f"t={ev.time} {ev.location}: functional increased by {ev.d_upsilon}")
        bound = _decrease_bound(ev, kappa)
        if bound is not None:
            bmargin = ev.d_upsilon - (-bound) - slack
            rep.worst_bound_margin = max(rep.worst_bound_margin, bmargin)
            if bmargin > 0.0:
                rep.violations.append(
                    f"t={ev.time} {ev.location}: decrease {ev.d_upsilon} above bound {-bound}")
        if ev.location in (LOC_IFACE_LEFT, LOC_IFACE_RIGHT):
            ds = abs(sum(ev.sigmas_out) - sum(ev.sigmas_in))
            rep.worst_sigma_sum = max(rep.worst_sigma_sum, ds)
            if ds > 1e-10:
                rep.violations.append(
                    f"t={ev.time} {ev.location}: sigma-sum drift {ds}")
            rep.come_sign_violations += _come_sign_violation(ev)
    if rep.come_sign_violations:
        rep.violations.append(
            f"{rep.come_sign_violations} interface events broke the single-incoming sign pattern")
    return rep


def _decrease_bound(ev, kappa):
    """Required minimal decrease -bound for a genuine interaction event."""
    if ev.location == LOC_GAS:
        if len(ev.sigmas_in) < 2:
            return None
        return abs(ev.sigmas_in[0] * ev.sigmas_in[1])
    if ev.location == LOC_LIQUID:
        if len(ev.sigmas_in) < 2:
            return None
        return kappa ** 2 * abs(ev.sigmas_in[0] * ev.sigmas_in[1])
    if ev.location in (LOC_IFACE_LEFT, LOC_IFACE_RIGHT):
        # incoming from the left carries family Two at either interface
        s_left = sum(abs(s) for s, f in zip(ev.sigmas_in, ev.families_in)
                     if f == WaveFamily.TWO)
        s_right = sum(abs(s) for s, f in zip(ev.sigmas_in, ev.families_in)
                      if f == WaveFamily.ONE)
        if ev.location == LOC_IFACE_LEFT:
            return s_left + kappa * s_right
        return kappa * s_left + s_right
    return None


def _come_sign_violation(ev):
    """Sign pattern of single-incoming interface events: the transmitted wave
    always keeps the incoming pressure-jump sign; the reflected wave flips it
    when the incoming wave arrives from the gas side and keeps it when it
    arrives from the liquid side."""
    if len(ev.sigmas_in) != 1:
        return 0
    s_in = ev.sigmas_in[0]
    if abs(s_in) <= 1e-11:
        # roundoff-scale wavelets carry no usable sign
        return 0
    f_in = ev.families_in[0]
    gas_side_family = WaveFamily.TWO if ev.location == LOC_IFACE_LEFT else WaveFamily.ONE
    from_gas = f_in == gas_side_family
    bad = 0
    for s_out, f_out in zip(ev.sigmas_out, ev.families_out):
        if abs(s_out) <= 1e-12:
            continue
        flip = from_gas and f_out != f_in
        prod = s_in * s_out
        if (flip and prod > 0.0) or (not flip and prod < 0.0):
            bad += 1
    return bad
