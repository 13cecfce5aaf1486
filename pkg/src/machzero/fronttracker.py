"""Event-driven wave front tracking with interface strips.

The liquid slab occupies ]0, m[ in Lagrangian mass coordinates, gas the rest;
pressure and velocity are continuous across z = 0 and z = m.  Fronts move
along straight lines between events.  Three event kinds exist: an adjacent
pair collides, a front reaches an interface, or a front crosses a strip edge
(z = +/- eps^2, m -/+ eps^2).  Inside the strips 1-waves travel at speed -1
and 2-waves at +1 (states untouched), so same-family waves cannot interact
near the interfaces and no non-physical fronts are needed.  Rarefactions are
fanned into wavelets of strength <= eps at birth (initial data, genuinely new
fans at interior collisions) and on strip exit; a continuing rarefaction is
never re-split.

The weighted wave functional (see glimm module) is maintained incrementally,
one O(n) update per event, and resynchronized against the from-scratch O(n^2)
evaluation every 512 events.
"""

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from .eos import GammaLaw, LiquidEos, P_MIN
from .errors import (EventCapExceeded, InadmissibleScenario, OutOfRange,
                     ValidationError)
from .laxwaves import State, WaveFamily, WaveKind, char_speed, classify, shock_speed
from . import glimm as _glimm
from . import riemann as _riemann

DROP_TOL = 1e-13
_TIE_TOL = 1e-13
_RESYNC_EVERY = 512


# --------------------------------------------------------------------------
# scenario and field containers

@dataclass
class Scenario:
    gas: GammaLaw
    liquid_base: GammaLaw
    p_bar: float
    kappa: float
    m: float = 1.0
    p_o: float = 1.0
    eps: float = 1e-3
    t_end: float = 1.0
    initial_left: State = State(1.0, 0.0)
    jumps: Tuple[Tuple[float, State], ...] = ()
    budget: float = 10.0
    seed: int = 0
    event_cap: int = 10_000_000
    snapshot_times: Tuple[float, ...] = ()
    trace_z: Tuple[float, ...] = ()
    z_window: Optional[Tuple[float, float]] = None
    dt_piston: Optional[float] = None
    kappas: Tuple[float, ...] = ()
    name: str = "scenario"

    @property
    def liquid(self):
        return LiquidEos(self.liquid_base, self.p_bar, self.kappa)

    def with_kappa(self, kappa):
        return replace(self, kappa=kappa)

    def medium_at(self, z):
        return self.liquid if 0.0 < z < self.m else self.gas

    def initial_field(self):
        breaks = np.array([z for z, _ in self.jumps], dtype=float)
        states = [self.initial_left] + [s for _, s in self.jumps]
        p = np.array([s.p for s in states])
        v = np.array([s.v for s in states])
        return PiecewiseField(breaks, p, v)

    @property
    def v_o(self):
        """Initial velocity in the middle of the slab (the slab velocity of
        the rigid limit model)."""
        return float(self.initial_field().at(0.5 * self.m)[1])

    def validate(self):
        e2 = self.eps ** 2
        if self.m <= 20.0 * e2:
            raise ValidationError("m: slab too thin for the strip construction")
        zs = [z for z, _ in self.jumps]
        if any(z2 <= z1 for z1, z2 in zip(zs, zs[1:])):
            raise ValidationError("jumps: breakpoints must be strictly increasing")
        for z, s in self.jumps:
            if abs(z) <= 2.0 * e2 or abs(z - self.m) <= 2.0 * e2:
                raise ValidationError(
                    f"jumps: breakpoint {z} inside a protected interface flat")
            if s.p <= P_MIN:
                raise ValidationError("jumps: nonpositive pressure")
        if self.initial_left.p <= P_MIN:
            raise ValidationError("initial_left: nonpositive pressure")
        if not (0.0 < self.kappa <= 1.0):
            raise ValidationError("kappa: must lie in ]0, 1]")
        if self.t_end <= 0.0 or self.eps <= 0.0:
            raise ValidationError("t_end and eps must be positive")


class PiecewiseField:
    """Piecewise-constant profile: value index i lives on ]breaks[i-1], breaks[i][,
    with unbounded outer intervals."""

    def __init__(self, breaks, p, v, tau=None):
        self.breaks = np.asarray(breaks, dtype=float)
        self.p = np.asarray(p, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.tau = None if tau is None else np.asarray(tau, dtype=float)

    def at(self, z):
        i = int(np.searchsorted(self.breaks, z, side="right"))
        return self.p[i], self.v[i]

    def values(self, component):
        return getattr(self, component)

    def tv(self, component, lo=-math.inf, hi=math.inf):
        vals = self.values(component)
        inside = (self.breaks > lo) & (self.breaks < hi)
        return float(np.abs(np.diff(vals))[inside].sum())

    def integral(self, component, lo, hi):
        vals = self.values(component)
        edges = np.concatenate(([lo], np.clip(self.breaks, lo, hi), [hi]))
        return float(np.sum(np.diff(edges) * vals))

    def with_interfaces(self, m_slab, scenario):
        """Insert breaks at the interfaces and attach the specific volume."""
        breaks = self.breaks
        p, v = self.p, self.v
        for zb in (0.0, m_slab):
            i = int(np.searchsorted(breaks, zb, side="left"))
            if i >= breaks.size or breaks[i] != zb:
                breaks = np.insert(breaks, i, zb)
                p = np.insert(p, i, p[i])
                v = np.insert(v, i, v[i])
        mids = np.empty(p.size)
        inner = 0.5 * (breaks[:-1] + breaks[1:]) if breaks.size > 1 else np.array([])
        mids[1:-1] = inner
        mids[0] = (breaks[0] - 1.0) if breaks.size else -1.0
        mids[-1] = (breaks[-1] + 1.0) if breaks.size else 1.0
        tau = np.array([scenario.medium_at(zm).tau(pp) for zm, pp in zip(mids, p)])
        return PiecewiseField(breaks, p, v, tau)


class TimeSeries:
    """Right-continuous step function of time: value index i on
    [times[i], times[i+1][, the last value extending to t_end."""

    def __init__(self, times, p, v, t_end):
        self.times = np.asarray(times, dtype=float)
        self.p = np.asarray(p, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.t_end = float(t_end)

    def at(self, t, component="v"):
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return float(getattr(self, component)[max(i, 0)])

    def time_average(self, ta, tb, component="p"):
        vals = getattr(self, component)
        edges = np.concatenate(([ta], np.clip(self.times, ta, tb), [tb]))
        vals_ext = np.concatenate(([vals[0]], vals))
        return float(np.sum(np.diff(edges) * vals_ext) / (tb - ta))

    def integral(self, ta, tb, component="v"):
        return self.time_average(ta, tb, component) * (tb - ta)

    def tv(self, component="v"):
        return float(np.abs(np.diff(getattr(self, component))).sum())


# --------------------------------------------------------------------------
# fronts and events

@dataclass
class Front:
    uid: int
    family: WaveFamily
    kind: WaveKind
    sigma: float
    left: State
    right: State
    z: float
    speed: float
    in_strip: bool
    region: int
    birth_time: float
    seg_t0: float = 0.0
    seg_z0: float = 0.0
    wall: bool = False


@dataclass
class EventRecord:
    time: float
    z: float
    location: str
    event_type: str
    sigmas_in: Tuple[float, ...]
    families_in: Tuple[WaveFamily, ...]
    sigmas_out: Tuple[float, ...]
    families_out: Tuple[WaveFamily, ...]
    d_upsilon: float
    upsilon_before: float
    d_sigma_sum: float = 0.0


class Trajectory:
    """Immutable record of one run: straight-line front segments plus the
    event ledger and functional time series."""

    def __init__(self, scenario, weights, segments, far_left, t_end, ledger,
                 glimm_rows, event_count, births, upsilon0, wtv0):
        self.scenario = scenario
        self.weights = weights
        self.far_left = far_left
        self.t_end = float(t_end)
        self.ledger = ledger
        self.glimm_rows = glimm_rows
        self.event_count = event_count
        self.births = births
        self.upsilon0 = upsilon0
        self.wtv0 = wtv0
        seg = np.array(segments, dtype=float).reshape(-1, 13)
        self._t0 = seg[:, 0]
        self._t1 = seg[:, 1]
        self._z0 = seg[:, 2]
        self._sp = seg[:, 3]
        self._fam = seg[:, 4].astype(np.int8)
        self._shk = seg[:, 5].astype(bool)
        self._sigma = seg[:, 6]
        self._pl = seg[:, 7]
        self._vl = seg[:, 8]
        self._pr = seg[:, 9]
        self._vr = seg[:, 10]
        self._final = seg[:, 11].astype(bool)
        self._strip = seg[:, 12].astype(bool)

    def sample(self, t):
        if t < 0.0 or t > self.t_end + 1e-12:
            raise OutOfRange(f"t={t} outside [0, {self.t_end}]")
        alive = (self._t0 <= t) & ((t < self._t1) | (self._final & (t >= self._t1)))
        pos = self._z0[alive] + self._sp[alive] * (t - self._t0[alive])
        order = np.lexsort((self._sp[alive], pos))
        breaks = pos[order]
        p = np.concatenate(([self.far_left.p], self._pr[alive][order]))
        v = np.concatenate(([self.far_left.v], self._vr[alive][order]))
        field = PiecewiseField(breaks, p, v)
        return field.with_interfaces(self.scenario.m, self.scenario)

    def trace(self, z):
        sp = self._sp
        moving = sp != 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            tc = self._t0 + (z - self._z0) / np.where(moving, sp, 1.0)
        hit = moving & (tc >= self._t0) & (tc < self._t1)
        # a segment born exactly at z counts; one dying there does not
        born_here = moving & (self._z0 == z) & (self._t0 == tc)
        hit |= born_here & (tc < self._t1)
        tc = tc[hit]
        val_p = np.where(sp[hit] > 0.0, self._pl[hit], self._pr[hit])
        val_v = np.where(sp[hit] > 0.0, self._vl[hit], self._vr[hit])
        order = np.argsort(tc, kind="stable")
        p0, v0 = self.sample(0.0).at(z)
        times = np.concatenate(([0.0], tc[order]))
        p = np.concatenate(([p0], val_p[order]))
        v = np.concatenate(([v0], val_v[order]))
        keep = np.concatenate((np.diff(times) > 0.0, [True]))
        keep[0] = True
        return TimeSeries(times[keep], p[keep], v[keep], self.t_end)

    def max_rarefaction_strength(self):
        r = ~self._shk
        return float(np.abs(self._sigma[r]).max()) if np.any(r) else 0.0

    def max_front_reach(self):
        ends = np.concatenate((self._z0, self._z0 + self._sp * (self._t1 - self._t0)))
        return float(np.min(ends)), float(np.max(ends))


# --------------------------------------------------------------------------
# the engine

class SimState:
    """Mutable simulation state; also the engine."""

    def __init__(self, scenario, weights=None):
        scenario.validate()
        self.scn = scenario
        self.gas = scenario.gas
        self.liq = scenario.liquid
        self.kappa = scenario.kappa
        self.m = scenario.m
        self.eps = scenario.eps
        self.e2 = scenario.eps ** 2
        self.t_end = scenario.t_end
        self.bounds = np.array([-self.e2, 0.0, self.e2,
                                self.m - self.e2, self.m, self.m + self.e2])
        self.rng = np.random.default_rng(scenario.seed)
        if weights is None:
            weights = self._default_weights()
        self.w = weights

        self.t = 0.0
        self.fronts: List[Front] = []
        self._z = np.empty(0)
        self._sp = np.empty(0)
        self._reg = np.empty(0, dtype=np.int8)
        self._fam = np.empty(0, dtype=np.int8)
        self._shk = np.empty(0, dtype=bool)
        self._asig = np.empty(0)
        self.ledger: List[EventRecord] = []
        self.glimm_rows: List[tuple] = []
        self.segments: List[tuple] = []
        self.events = 0
        self.births = 0
        self._uid = 0
        self._since_resync = 0
        # functional accumulators
        self.V_in = self.V_out = self.V_L = 0.0
        self.Q_G = self.Q_L = 0.0
        self.wtv_p = self.wtv_v = 0.0

        self._init_fronts()
        self.upsilon0 = self.upsilon_value()
        initial = scenario.initial_field()
        self.wtv0 = _glimm.wtv(initial, self.kappa, self.m)
        self._glimm_row()

    # -- setup ------------------------------------------------------------
    def _default_weights(self):
        s = self.scn
        field = s.initial_field()
        p_lo = min(field.p.min(), s.p_o, s.p_bar)
        p_hi = max(field.p.max(), s.p_o, s.p_bar)
        pad = 0.5 * (p_hi - p_lo) + 0.05 * p_lo
        C, c = _glimm.estimate_constants(
            s.gas, s.liquid_base, s.p_bar,
            (max(P_MIN * 10, p_lo - pad), p_hi + pad), [self.kappa])
        return _glimm.default_weights(C, c)

    def _init_fronts(self):
        s = self.scn
        field = s.initial_field()
        if _glimm.wtv(field, self.kappa, self.m) > s.budget:
            raise InadmissibleScenario("weighted total variation above the budget")
        states = [s.initial_left] + [st for _, st in s.jumps]
        idx = 0
        for (z, _), left, right in zip(s.jumps, states, states[1:]):
            if left == right:
                continue
            med = s.medium_at(z)
            sol = _riemann.solve_interior(med, left, right)
            for f in self._interior_outgoing(med, sol, left, right, z,
                                             in_strip=False, raref_in=set()):
                self._push(idx, f)
                idx += 1

    # -- functional bookkeeping --------------------------------------------
    def upsilon_value(self):
        w = self.w
        return (w.K_in * self.V_in + self.V_out + w.K_L * self.V_L
                + w.H_G * self.Q_G + self.kappa ** 2 * w.H_L * self.Q_L)

    def wtv_value(self):
        return self.wtv_p + self.wtv_v

    def _q_partners(self, threshold, exclude, fam, shock, region):
        """Sum of |sigma'| over current fronts approaching a (virtual) front
        of the given family/kind in the given region, where indices >=
        threshold count as lying to its right."""
        reg, famv, shk, asg = self._reg, self._fam, self._shk, self._asig
        n = asg.size
        if n == 0:
            return 0.0
        sel = reg == region
        if exclude is not None:
            sel = sel.copy()
            sel[exclude] = False
        same = famv == int(fam)
        appr = same & (shk | shock)
        idx = np.arange(n)
        if fam == WaveFamily.TWO:
            appr |= (~same) & (idx >= threshold)
        else:
            appr |= (~same) & (idx < threshold)
        return float(asg[sel & appr].sum())

    def _vclass_add(self, f, sign):
        cls = _glimm.class_of(f.region, f.family)
        a = sign * abs(f.sigma)
        if cls == _glimm.CLASS_G_IN:
            self.V_in += a
        elif cls == _glimm.CLASS_G_OUT:
            self.V_out += a
        else:
            self.V_L += a
        self.wtv_p += a
        dv = abs(f.right.v - f.left.v)
        self.wtv_v += sign * (dv / self.kappa if f.region == _glimm.REGION_LIQUID else dv)

    def _pop(self, i):
        f = self.fronts.pop(i)
        partners = self._q_partners(i + 1, i, f.family,
                                    f.kind is WaveKind.SHOCK, f.region)
        q = abs(f.sigma) * partners
        if f.region == _glimm.REGION_LIQUID:
            self.Q_L -= q
        else:
            self.Q_G -= q
        self._vclass_add(f, -1.0)
        self._z = np.delete(self._z, i)
        self._sp = np.delete(self._sp, i)
        self._reg = np.delete(self._reg, i)
        self._fam = np.delete(self._fam, i)
        self._shk = np.delete(self._shk, i)
        self._asig = np.delete(self._asig, i)
        self._close_segment(f, final=False)
        return f

    def _push(self, i, f):
        partners = self._q_partners(i, None, f.family,
                                    f.kind is WaveKind.SHOCK, f.region)
        q = abs(f.sigma) * partners
        if f.region == _glimm.REGION_LIQUID:
            self.Q_L += q
        else:
            self.Q_G += q
        self._vclass_add(f, +1.0)
        self.fronts.insert(i, f)
        self._z = np.insert(self._z, i, f.z)
        self._sp = np.insert(self._sp, i, f.speed)
        self._reg = np.insert(self._reg, i, f.region)
        self._fam = np.insert(self._fam, i, int(f.family))
        self._shk = np.insert(self._shk, i, f.kind is WaveKind.SHOCK)
        self._asig = np.insert(self._asig, i, abs(f.sigma))
        f.seg_t0 = self.t
        f.seg_z0 = f.z

    def _close_segment(self, f, final):
        self.segments.append((
            f.seg_t0, self.t if not final else self.t_end, f.seg_z0, f.speed,
            int(f.family), 1.0 if f.kind is WaveKind.SHOCK else 0.0, f.sigma,
            f.left.p, f.left.v, f.right.p, f.right.v,
            1.0 if final else 0.0, 1.0 if f.in_strip else 0.0))

    def _reopen(self, i, new_speed, in_strip):
        f = self.fronts[i]
        f.z = self._z[i]
        self._close_segment(f, final=False)
        f.speed = new_speed
        f.in_strip = in_strip
        f.seg_t0 = self.t
        f.seg_z0 = f.z
        self._sp[i] = new_speed

    def _make_front(self, fam, sigma, left, right, z, speed, in_strip, region):
        self._uid += 1
        self.births += 1
        return Front(uid=self._uid, family=fam, kind=classify(fam, sigma),
                     sigma=sigma, left=left, right=right, z=z, speed=speed,
                     in_strip=in_strip, region=region, birth_time=self.t)

    def _resync(self):
        rep = _glimm.upsilon(self, self.w, self.kappa, self.m)
        drift = abs(rep.upsilon - self.upsilon_value())
        if drift > 1e-7 * max(1.0, rep.upsilon):
            raise AssertionError(
                f"incremental functional drifted by {drift} from the reference")
        self.V_in, self.V_out, self.V_L = rep.V_G_in, rep.V_G_out, rep.V_L
        self.Q_G, self.Q_L = rep.Q_G, rep.Q_L
        self.wtv_p = float(self._asig.sum())
        dv = np.array([abs(f.right.v - f.left.v) for f in self.fronts])
        liq = self._reg == _glimm.REGION_LIQUID
        self.wtv_v = float(dv[~liq].sum() + dv[liq].sum() / self.kappa) if dv.size else 0.0

    def _glimm_row(self):
        self.glimm_rows.append((self.t, self.V_in, self.V_out, self.V_L,
                                self.Q_G, self.Q_L, self.upsilon_value(),
                                self.wtv_value()))

    # -- wave construction -------------------------------------------------
    def _in_strip(self, z):
        return (-self.e2 <= z <= self.e2) or (self.m - self.e2 <= z <= self.m + self.e2)

    def _strip_speed(self, fam):
        return -1.0 if fam == WaveFamily.ONE else 1.0

    def _region_at(self, z, speed):
        return _glimm.region_of(z, self.m, speed)

    def _build_wave(self, med, fam, left, right, z, in_strip, split):
        """Fronts for one family of an exact solution, left to right."""
        sigma = right.p - left.p
        if abs(sigma) < DROP_TOL:
            return []
        kind = classify(fam, sigma)
        region = self._region_at(z, self._strip_speed(fam) if in_strip else
                                 (1.0 if fam == WaveFamily.TWO else -1.0))
        if in_strip:
            return [self._make_front(fam, sigma, left, right, z,
                                     self._strip_speed(fam), True, region)]
        if kind is WaveKind.SHOCK:
            sp = shock_speed(med, fam, left.p, right.p)
            return [self._make_front(fam, sigma, left, right, z, sp, False, region)]
        if not split or abs(sigma) <= self.eps:
            sp = char_speed(med, fam, left.p)
            return [self._make_front(fam, sigma, left, right, z, sp, False, region)]
        out = []
        pieces = _riemann.discretize_rarefaction(med, fam, left, sigma, self.eps)
        for j, (sg, lft, rgt, sp) in enumerate(pieces):
            if j == len(pieces) - 1:
                rgt = right  # exact chain with the outer neighbor
                sg = rgt.p - lft.p
            out.append(self._make_front(fam, sg, lft, rgt, z, sp, False,
                                        self._region_at(z, sp)))
        return out

    def _interior_outgoing(self, med, sol, left, right, z, in_strip, raref_in):
        keep1 = abs(sol.sigma1) >= DROP_TOL
        keep2 = abs(sol.sigma2) >= DROP_TOL
        out = []
        if keep1 and keep2:
            out += self._build_wave(med, WaveFamily.ONE, left, sol.middle, z,
                                    in_strip, WaveFamily.ONE not in raref_in)
            out += self._build_wave(med, WaveFamily.TWO, sol.middle, right, z,
                                    in_strip, WaveFamily.TWO not in raref_in)
        elif keep1:
            out += self._build_wave(med, WaveFamily.ONE, left, right, z,
                                    in_strip, WaveFamily.ONE not in raref_in)
        elif keep2:
            out += self._build_wave(med, WaveFamily.TWO, left, right, z,
                                    in_strip, WaveFamily.TWO not in raref_in)
        return out

    # -- event detection ----------------------------------------------------
    def next_event(self):
        """Earliest upcoming event: ('end', dt) or
        ('collide', dt, i) or ('cross', dt, i, bound_index)."""
        for _ in range(8):
            best, tcol = self._scan_events()
            if best[0] != "collide" or not self._maybe_jitter(best, tcol):
                return best
        return best

    def _scan_events(self):
        n = len(self.fronts)
        dt_end = self.t_end - self.t
        best = ("end", dt_end)
        if n == 0:
            return best, None
        z, sp = self._z, self._sp
        tcol = None
        pend = self._pending_crossing()
        if pend is not None:
            return pend, None
        if n >= 2:
            ds = sp[:-1] - sp[1:]
            dz = np.maximum(z[1:] - z[:-1], 0.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                tcol = np.where(ds > 1e-14, dz / np.where(ds > 1e-14, ds, 1.0), np.inf)
            i = int(np.argmin(tcol))
            if tcol[i] < best[1]:
                best = ("collide", float(tcol[i]), i)
        iR = np.searchsorted(self.bounds, z, side="right")
        iL = np.searchsorted(self.bounds, z, side="left") - 1
        tgt_r = np.where(iR < self.bounds.size, self.bounds[np.minimum(iR, 5)], np.inf)
        tgt_l = np.where(iL >= 0, self.bounds[np.maximum(iL, 0)], -np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            tb = np.where(sp > 1e-14, (tgt_r - z) / np.where(sp > 0, sp, 1.0),
                          np.where(sp < -1e-14, (tgt_l - z) / np.where(sp < 0, sp, 1.0),
                                   np.inf))
        tb = np.where(np.isnan(tb), np.inf, tb)
        j = int(np.argmin(tb))
        if tb[j] < best[1]:
            bidx = int(iR[j] if sp[j] > 0 else iL[j])
            best = ("cross", float(tb[j]), j, bidx)
        return best, tcol

    def _pending_crossing(self):
        """Front sitting (to round-off) on a bound whose strip flag or region
        is inconsistent with its motion: it was carried onto the bound while a
        simultaneous event was resolved, and its own crossing must fire now."""
        near_i, near_b = np.nonzero(
            np.abs(self._z[:, None] - self.bounds[None, :]) <= 1e-12)
        for i, b in zip(near_i, near_b):
            sp = self._sp[i]
            if abs(sp) < 1e-14:
                continue
            if b == 1 or b == 4:
                zb = 0.0 if b == 1 else self.m
                if _glimm.region_of(zb, self.m, sp) != self._reg[i]:
                    return ("cross", 0.0, int(i), int(b))
            else:
                center = 0.0 if b <= 2 else self.m
                inward = (self.bounds[b] < center) == (sp > 0.0)
                if self.fronts[i].in_strip != inward:
                    return ("cross", 0.0, int(i), int(b))
        return None

    def _maybe_jitter(self, best, tcol):
        """Perturb a speed to break a triple collision: two adjacent collision
        candidates at the same instant sharing a front.  True if perturbed."""
        if tcol is None:
            return False
        i = best[2]
        t0 = best[1]
        for k in (i - 1, i + 1):
            if 0 <= k < tcol.size and k != i and abs(tcol[k] - t0) < _TIE_TOL:
                for idx in (k, k + 1):
                    f = self.fronts[idx]
                    if not f.in_strip and idx not in (i, i + 1):
                        self._reopen(idx, f.speed + self.rng.uniform(-1e-10, 1e-10),
                                     f.in_strip)
                        return True
        return False

    # -- event processing ---------------------------------------------------
    def step(self):
        """Advance to and resolve the next event; False once t_end reached."""
        ev = self.next_event()
        dt = ev[1]
        if ev[0] == "end" or self.t + dt > self.t_end:
            self._advance(self.t_end - self.t)
            self.t = self.t_end
            return False
        self._advance(dt)
        self.t += dt
        if ev[0] == "collide":
            self._handle_collision(ev[2])
        else:
            self._handle_crossing(ev[2], ev[3])
        self.events += 1
        if self.events > self.scn.event_cap:
            raise EventCapExceeded(f"event cap {self.scn.event_cap} exceeded")
        self._since_resync += 1
        if self._since_resync >= _RESYNC_EVERY:
            self._resync()
            self._since_resync = 0
        self._glimm_row()
        return True

    def _advance(self, dt):
        if dt > 0.0:
            self._z += self._sp * dt

    def _handle_collision(self, i):
        zc = 0.5 * (self._z[i] + self._z[i + 1])
        self._z[i] = self._z[i + 1] = zc
        fL, fR = self.fronts[i], self.fronts[i + 1]
        fL.z = fR.z = zc
        if abs(zc) < 1e-15 or abs(zc - self.m) < 1e-15:
            # a collision landing exactly on an interface: treat the pair as
            # two immediate interface hits; resolve the left one first
            self._z[i] = zc
            self._handle_interface(i, at_m=abs(zc - self.m) < 1e-15)
            return
        ups0 = self.upsilon_value()
        raref_in = {f.family for f in (fL, fR) if f.kind is WaveKind.RAREFACTION}
        right_f = self._pop(i + 1)
        left_f = self._pop(i)
        left, right = left_f.left, right_f.right
        med = self.scn.medium_at(zc)
        in_strip = self._in_strip(zc)
        sol = _riemann.solve_interior(med, left, right)
        out = self._interior_outgoing(med, sol, left, right, zc, in_strip, raref_in)
        for k, f in enumerate(out):
            self._push(i + k, f)
        loc = _glimm.LOC_LIQUID if 0.0 < zc < self.m else _glimm.LOC_GAS
        self.ledger.append(EventRecord(
            time=self.t, z=zc, location=loc, event_type="collision",
            sigmas_in=(left_f.sigma, right_f.sigma),
            families_in=(left_f.family, right_f.family),
            sigmas_out=tuple(f.sigma for f in out),
            families_out=tuple(f.family for f in out),
            d_upsilon=self.upsilon_value() - ups0, upsilon_before=ups0))

    def _handle_crossing(self, i, bidx):
        if bidx == 1 or bidx == 4:
            self._handle_interface(i, at_m=(bidx == 4))
            return
        b = float(self.bounds[bidx])
        self._z[i] = b
        f = self.fronts[i]
        f.z = b
        center = 0.0 if bidx <= 2 else self.m
        inward = (b < center) == (f.speed > 0.0)
        ups0 = self.upsilon_value()
        if inward:
            self._reopen(i, self._strip_speed(f.family), True)
            self._record_strip(f, b, "strip_entry", ups0)
            return
        med = self.gas if bidx in (0, 5) else self.liq
        if f.kind is WaveKind.SHOCK:
            self._reopen(i, shock_speed(med, f.family, f.left.p, f.right.p), False)
            self._record_strip(f, b, "strip_exit", ups0)
            return
        if abs(f.sigma) > self.eps:
            old = self._pop(i)
            pieces = _riemann.discretize_rarefaction(med, old.family, old.left,
                                                     old.sigma, self.eps)
            outs = []
            for j, (sg, lft, rgt, sp) in enumerate(pieces):
                if j == len(pieces) - 1:
                    rgt = old.right
                    sg = rgt.p - lft.p
                nf = self._make_front(old.family, sg, lft, rgt, b, sp, False,
                                      old.region)
                outs.append(nf)
                self._push(i + j, nf)
            self.ledger.append(EventRecord(
                time=self.t, z=b, location=_glimm.LOC_STRIP, event_type="split",
                sigmas_in=(old.sigma,), families_in=(old.family,),
                sigmas_out=tuple(o.sigma for o in outs),
                families_out=tuple(o.family for o in outs),
                d_upsilon=self.upsilon_value() - ups0, upsilon_before=ups0))
            return
        self._reopen(i, char_speed(med, f.family, f.left.p), False)
        self._record_strip(f, b, "strip_exit", ups0)

    def _record_strip(self, f, b, etype, ups0):
        self.ledger.append(EventRecord(
            time=self.t, z=b, location=_glimm.LOC_STRIP, event_type=etype,
            sigmas_in=(f.sigma,), families_in=(f.family,),
            sigmas_out=(f.sigma,), families_out=(f.family,),
            d_upsilon=self.upsilon_value() - ups0, upsilon_before=ups0))

    def _handle_interface(self, i, at_m):
        z_if = self.m if at_m else 0.0
        self._z[i] = z_if
        f = self.fronts[i]
        f.z = z_if
        ups0 = self.upsilon_value()
        incoming = self._pop(i)
        orientation = _riemann.LIQUID_LEFT if at_m else _riemann.GAS_LEFT
        sol = _riemann.solve_interface(orientation, self.gas, self.liq,
                                       incoming.left, incoming.right)
        keep1 = abs(sol.sigma1) >= DROP_TOL
        keep2 = abs(sol.sigma2) >= DROP_TOL
        out = []
        if keep1 and keep2:
            pairs = ((WaveFamily.ONE, incoming.left, sol.middle),
                     (WaveFamily.TWO, sol.middle, incoming.right))
        elif keep1:
            pairs = ((WaveFamily.ONE, incoming.left, incoming.right),)
        elif keep2:
            pairs = ((WaveFamily.TWO, incoming.left, incoming.right),)
        else:
            pairs = ()
        k = 0
        for fam, lft, rgt in pairs:
            sp = self._strip_speed(fam)
            nf = self._make_front(fam, rgt.p - lft.p, lft, rgt, z_if, sp, True,
                                  self._region_at(z_if, sp))
            out.append(nf)
            self._push(i + k, nf)
            k += 1
        loc = _glimm.LOC_IFACE_RIGHT if at_m else _glimm.LOC_IFACE_LEFT
        self.ledger.append(EventRecord(
            time=self.t, z=z_if, location=loc, event_type="interface",
            sigmas_in=(incoming.sigma,), families_in=(incoming.family,),
            sigmas_out=tuple(o.sigma for o in out),
            families_out=tuple(o.family for o in out),
            d_upsilon=self.upsilon_value() - ups0, upsilon_before=ups0,
            d_sigma_sum=sum(o.sigma for o in out) - incoming.sigma))

    # -- run ---------------------------------------------------------------
    def run(self):
        while self.step():
            pass
        for i, f in enumerate(self.fronts):
            f.z = self._z[i]
            self._close_segment_final(f)
        return Trajectory(self.scn, self.w, self.segments,
                          self.scn.initial_left, self.t_end, self.ledger,
                          self.glimm_rows, self.events, self.births,
                          self.upsilon0, self.wtv0)

    def _close_segment_final(self, f):
        self.segments.append((
            f.seg_t0, self.t_end, f.seg_z0, f.speed,
            int(f.family), 1.0 if f.kind is WaveKind.SHOCK else 0.0, f.sigma,
            f.left.p, f.left.v, f.right.p, f.right.v, 1.0,
            1.0 if f.in_strip else 0.0))


# --------------------------------------------------------------------------
# module-level operations

def init_fronts(scenario, weights=None) -> SimState:
    return SimState(scenario, weights)


def next_event(ss: SimState):
    return ss.next_event()


def step(ss: SimState):
    return ss.step()


def run(scenario, weights=None) -> Trajectory:
    return SimState(scenario, weights).run()


def sample(traj: Trajectory, t):
    return traj.sample(t)


def trace(traj: Trajectory, z):
    return traj.trace(z)
