"""Pressure laws for the gas and the near-incompressible liquid family.

Both phases are gamma laws, written through the inverse function
tau = T(p) = (k/p)^(1/gamma).  The liquid is a one-parameter rescaling of a
fixed base law: with pi(p) = p_bar + kappa^2 (p - p_bar) the liquid specific
volume is T(pi(p)), so the volume response to pressure shrinks like kappa^2
and the sound speed grows like 1/kappa.

F(x, y) is the slope kernel shared by both Lax-curve families:

    x < y : integral over [0,1] of sqrt(-T'(theta x + (1-theta) y))
    x = y : sqrt(-T'(x))
    x > y : sqrt of the integral of -T'

For gamma laws every branch has a closed form (power rule, log at gamma=1);
near the diagonal both formulas cancel, so a midpoint value with the exact
second-order correction is used instead.

All functions accept scalars or numpy arrays and are pure.
"""

import math

import numpy as np

from .errors import DomainError

# Global positivity guard: pressures at or below this are treated as vacuum.
P_MIN = 1e-9

# Relative half-width of the near-diagonal branch of F.
_NEAR = 1e-5


def _check_positive(p, what="pressure"):
    if type(p) is float or type(p) is int:
        if not (p > P_MIN):
            raise DomainError(f"{what} {p!r} at or below the positivity floor {P_MIN}")
    elif np.ndim(p) == 0:
        if not (p > P_MIN):
            raise DomainError(f"{what} {p!r} at or below the positivity floor {P_MIN}")
    else:
        if not np.all(np.asarray(p) > P_MIN):
            raise DomainError(f"{what} array reaches the positivity floor {P_MIN}")


class GammaLaw:
    """Gas law P(tau) = k tau^(-gamma); also serves as the gas Medium.

    As a medium it reports kappa = 1 and an identity pressure map, so the
    generic Riemann machinery treats gas and liquid uniformly.
    """

    __slots__ = ("k", "gamma", "_a", "_c")

    kappa = 1.0

    def __init__(self, k=1.0, gamma=1.0):
        if not (k > 0.0):
            raise DomainError("k must be positive")
        if not (gamma >= 1.0):
            raise DomainError("gamma must be >= 1")
        self.k = float(k)
        self.gamma = float(gamma)
        # sqrt(-T'(s)) = c * s**a
        self._a = -(self.gamma + 1.0) / (2.0 * self.gamma)
        self._c = math.sqrt(self.k ** (1.0 / self.gamma) / self.gamma)

    # -- medium protocol ---------------------------------------------------
    @property
    def base(self):
        return self

    def pi(self, p):
        return p

    def pi_inv(self, q):
        return q

    # -- law ---------------------------------------------------------------
    def tau(self, p):
        _check_positive(p)
        return (self.k / p) ** (1.0 / self.gamma)

    def p_of_tau(self, tau):
        _check_positive(tau, "specific volume")
        return self.k * tau ** (-self.gamma)

    def dtau(self, p):
        _check_positive(p)
        return -(1.0 / self.gamma) * (self.k / p) ** (1.0 / self.gamma) / p

    # -- slope kernel pieces -------------------------------------------------
    def slope(self, s):
        """sqrt(-T'(s)), the characteristic slope in the (p, v) plane."""
        return self._c * s ** self._a

    def slope_prim(self, s):
        """Antiderivative of slope(); log branch at gamma = 1."""
        a1 = self._a + 1.0
        if type(s) is float:
            if self.gamma == 1.0:
                return self._c * math.log(s)
            return self._c * s ** a1 / a1
        if self.gamma == 1.0:
            return self._c * np.log(s)
        return self._c * s ** a1 / a1

    def f_kernel(self, x, y):
        _check_positive(x)
        _check_positive(y)
        if (type(x) is float or np.ndim(x) == 0) and (type(y) is float or np.ndim(y) == 0):
            return self._f_scalar(float(x), float(y))
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        mid = 0.5 * (x + y)
        d = y - x
        near = np.abs(d) <= _NEAR * mid
        out = np.empty_like(mid)

        rare = (~near) & (d > 0)
        if np.any(rare):
            xr, yr = x[rare], y[rare]
            out[rare] = (self.slope_prim(yr) - self.slope_prim(xr)) / (yr - xr)
        shock = (~near) & (d < 0)
        if np.any(shock):
            xs, ys = x[shock], y[shock]
            out[shock] = np.sqrt((self.tau(ys) - self.tau(xs)) / (xs - ys))
        if np.any(near):
            mn, dn = mid[near], d[near]
            a, c = self._a, self._c
            phi = c * mn ** a
            # second-order midpoint correction of the theta-integral
            out[near] = phi + c * a * (a - 1.0) * mn ** (a - 2.0) * dn * dn / 24.0
        return out

    def _f_scalar(self, x, y):
        mid = 0.5 * (x + y)
        d = y - x
        a, c = self._a, self._c
        if abs(d) <= _NEAR * mid:
            phi = c * mid ** a
            return phi + c * a * (a - 1.0) * mid ** (a - 2.0) * d * d / 24.0
        if d > 0.0:
            return (self.slope_prim(y) - self.slope_prim(x)) / d
        return math.sqrt((self.tau(y) - self.tau(x)) / (x - y))

    def _f_dx_scalar(self, x, y):
        mid = 0.5 * (x + y)
        d = y - x
        a, c = self._a, self._c
        if abs(d) <= _NEAR * mid:
            return 0.5 * c * a * mid ** (a - 1.0)
        f = self._f_scalar(x, y)
        if d > 0.0:
            return (f - self.slope(x)) / d
        return (self.slope(x) ** 2 - f * f) / (2.0 * f * (x - y))

    def _f_dy_scalar(self, x, y):
        mid = 0.5 * (x + y)
        d = y - x
        a, c = self._a, self._c
        if abs(d) <= _NEAR * mid:
            return 0.5 * c * a * mid ** (a - 1.0)
        f = self._f_scalar(x, y)
        if d > 0.0:
            return (self.slope(y) - f) / d
        return (self.slope(y) ** 2 - f * f) / (2.0 * f * d)

    def f_kernel_dx(self, x, y):
        """Partial derivative of f_kernel in its first argument."""
        if (type(x) is float or np.ndim(x) == 0) and (type(y) is float or np.ndim(y) == 0):
            _check_positive(x)
            _check_positive(y)
            return self._f_dx_scalar(float(x), float(y))
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        x, y = np.broadcast_arrays(x, y)
        mid = 0.5 * (x + y)
        d = y - x
        near = np.abs(d) <= _NEAR * mid
        out = np.empty_like(mid)
        a, c = self._a, self._c
        f = self.f_kernel(x, y)
        rare = (~near) & (d > 0)
        if np.any(rare):
            out[rare] = (np.atleast_1d(f)[rare] - self.slope(x[rare])) / d[rare]
        shock = (~near) & (d < 0)
        if np.any(shock):
            fs = np.atleast_1d(f)[shock]
            out[shock] = (self.slope(x[shock]) ** 2 - fs ** 2) / (2.0 * fs * (x[shock] - y[shock]))
        if np.any(near):
            # limit value phi'(x)/2
            out[near] = 0.5 * c * a * mid[near] ** (a - 1.0)
        return out

    def f_kernel_dy(self, x, y):
        """Partial derivative of f_kernel in its second argument."""
        if (type(x) is float or np.ndim(x) == 0) and (type(y) is float or np.ndim(y) == 0):
            _check_positive(x)
            _check_positive(y)
            return self._f_dy_scalar(float(x), float(y))
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        x, y = np.broadcast_arrays(x, y)
        mid = 0.5 * (x + y)
        d = y - x
        near = np.abs(d) <= _NEAR * mid
        out = np.empty_like(mid)
        a, c = self._a, self._c
        f = np.atleast_1d(self.f_kernel(x, y))
        rare = (~near) & (d > 0)
        if np.any(rare):
            out[rare] = (self.slope(y[rare]) - f[rare]) / d[rare]
        shock = (~near) & (d < 0)
        if np.any(shock):
            out[shock] = ((self.slope(y[shock]) ** 2 - f[shock] ** 2)
                          / (2.0 * f[shock] * d[shock]))
        if np.any(near):
            out[near] = 0.5 * c * a * mid[near] ** (a - 1.0)
        return out

    def __repr__(self):
        return f"GammaLaw(k={self.k}, gamma={self.gamma})"


class LiquidEos:
    """Liquid law: tau = T(pi(p)) with pi(p) = p_bar + kappa^2 (p - p_bar)."""

    __slots__ = ("base", "p_bar", "kappa", "tau_bar")

    def __init__(self, base, p_bar, kappa):
        if not (0.0 < kappa <= 1.0):
            raise DomainError("kappa must lie in ]0, 1]")
        if not (p_bar > P_MIN):
            raise DomainError("p_bar must be positive")
        self.base = base
        self.p_bar = float(p_bar)
        self.kappa = float(kappa)
        self.tau_bar = base.tau(p_bar)

    def pi(self, p):
        return self.p_bar + self.kappa ** 2 * (np.asarray(p) - self.p_bar) if np.ndim(p) else \
            self.p_bar + self.kappa ** 2 * (p - self.p_bar)

    def pi_inv(self, q):
        return self.p_bar + (q - self.p_bar) / self.kappa ** 2

    def tau(self, p):
        _check_positive(p)
        return self.base.tau(self.pi(p))

    def p_of_tau(self, tau):
        return self.pi_inv(self.base.p_of_tau(tau))

    def dtau(self, p):
        _check_positive(p)
        return self.kappa ** 2 * self.base.dtau(self.pi(p))

    def f_kernel(self, x, y):
        # arguments arrive already pi-transformed
        return self.base.f_kernel(x, y)

    def __repr__(self):
        return f"LiquidEos(base={self.base!r}, p_bar={self.p_bar}, kappa={self.kappa})"


# Module-level dispatch wrappers (a Medium is a GammaLaw or a LiquidEos).

def tau_of_p(m, p):
    return m.tau(p)


def dtau_dp(m, p):
    return m.dtau(p)


def f_kernel(m, x, y):
    return m.f_kernel(x, y)
