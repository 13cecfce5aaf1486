"""Lax curves in the (p, v) plane, wave classification and speeds.

Wave size is always sigma = p_right - p_left; the anchor of a curve is the
left state of the wave.  Family One runs leftward, family Two rightward.
Sign table: a 1-wave is a shock iff sigma > 0, a 2-wave is a shock iff
sigma < 0.
"""

import math
from enum import Enum, IntEnum
from typing import NamedTuple

import numpy as np

from .errors import NotAShock, ZeroSizeWave


class State(NamedTuple):
    p: float
    v: float


class WaveFamily(IntEnum):
    ONE = 1
    TWO = 2


class WaveKind(Enum):
    SHOCK = "shock"
    RAREFACTION = "rarefaction"


def classify(fam, sigma):
    if sigma == 0.0:
        raise ZeroSizeWave("cannot classify a zero-strength wave")
    if fam == WaveFamily.ONE:
        return WaveKind.SHOCK if sigma > 0.0 else WaveKind.RAREFACTION
    return WaveKind.SHOCK if sigma < 0.0 else WaveKind.RAREFACTION


def lax_velocity(m, fam, p, anchor):
    """Velocity on the Lax curve of the given family through the anchor.

    Unified representation: both branches collapse to a single slope-kernel
    expression, V1 = v0 - kappa (p-p0) F(pi(p), pi(p0)) and the mirrored V2.
    """
    kap = m.kappa
    p0, v0 = anchor
    if fam == WaveFamily.ONE:
        return v0 - kap * (p - p0) * m.base.f_kernel(m.pi(p), m.pi(p0))
    return v0 + kap * (p - p0) * m.base.f_kernel(m.pi(p0), m.pi(p))


def lax_velocity_direct(m, fam, p, anchor):
    """Branchwise evaluation of the same curve (shock root / rarefaction
    integral in closed form).  Kept as an independent route for the solver
    oracle and the representation-equivalence tests."""
    kap = m.kappa
    p0, v0 = anchor
    if type(p) is float or np.ndim(p) == 0:
        p = float(p)
        sigma = p - p0
        if (sigma >= 0) if fam == WaveFamily.ONE else (sigma <= 0):
            jump = -(m.tau(p) - m.tau(p0)) * (p - p0)
            return v0 - math.sqrt(max(jump, 0.0))
        s = (m.base.slope_prim(m.pi(p)) - m.base.slope_prim(m.pi(p0))) / kap
        return v0 - s if fam == WaveFamily.ONE else v0 + s
    sigma = np.asarray(p, dtype=float) - p0
    shock = (sigma >= 0) if fam == WaveFamily.ONE else (sigma <= 0)

    def shock_branch(pp):
        jump = -(m.tau(pp) - m.tau(p0)) * (pp - p0)
        return v0 - np.sqrt(np.maximum(jump, 0.0))

    def rare_branch(pp):
        s = (m.base.slope_prim(m.pi(pp)) - m.base.slope_prim(m.pi(p0))) / kap
        return v0 - s if fam == WaveFamily.ONE else v0 + s

    if np.ndim(p) == 0:
        return float(shock_branch(p)) if shock else float(rare_branch(p))
    return np.where(shock, shock_branch(p), rare_branch(p))


def char_speed(m, fam, p):
    """Characteristic speed in Lagrangian mass coordinates."""
    mag = np.sqrt(-1.0 / m.dtau(p))
    return -mag if fam == WaveFamily.ONE else mag


def shock_speed(m, fam, p_left, p_right):
    """Rankine-Hugoniot speed s = -/+ sqrt(-dp/dtau), checked against the
    strict Lax inequalities char(p_left) > s > char(p_right)."""
    sigma = p_right - p_left
    if classify(fam, sigma) is not WaveKind.SHOCK:
        raise NotAShock(f"family {int(fam)} with sigma {sigma} is a rarefaction")
    mid = 0.5 * (p_left + p_right)
    if abs(sigma) <= 1e-6 * mid:
        # the tau difference would cancel catastrophically; use the
        # midpoint derivative (error O(sigma^2))
        quot = m.dtau(mid)
    else:
        quot = (m.tau(p_right) - m.tau(p_left)) / sigma
    s = math.sqrt(-1.0 / quot)
    if fam == WaveFamily.ONE:
        s = -s
    lam_l = char_speed(m, fam, p_left)
    lam_r = char_speed(m, fam, p_right)
    # allow round-off slack for nearly degenerate jumps
    slack = 1e-9 * abs(s)
    if not (lam_l > s - slack and s + slack > lam_r):
        raise NotAShock(
            f"Lax inequalities violated: {lam_l} > {s} > {lam_r} fails"
        )
    return s
