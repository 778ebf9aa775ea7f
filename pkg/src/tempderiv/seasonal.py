"""Deterministic time functions of the temperature model.

The seasonal mean and the seasonal volatility are both linear-plus-annual-
harmonic functions of time (in days),

    f(t) = k0 + k1*t + k2*sin(2*pi*t/365) + k3*cos(2*pi*t/365),

and the model repeatedly needs their integrals against exponential kernels:
the decaying integral K1(t, alpha) = int_0^t f(u) e^{-alpha(t-u)} du and the
growing integral K2(alpha, T) = int_0^T f(u) e^{alpha u} du.  Closed forms
are derived from the four elementary integrals and certified against
adaptive quadrature (`quad_exp_kernel`).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError

ANNUAL_OMEGA = 2.0 * np.pi / 365.0

# QUADPACK subinterval cap: 21-point Gauss-Kronrod per subinterval, ~2^20 nodes total
_QUAD_LIMIT = 2**20 // 21


@dataclass(frozen=True)
class FourCoeffs:
    """Coefficients of a linear-plus-annual-harmonic function of time.

    k0 is the level, k1 the linear slope per day, k2/k3 the sine/cosine
    amplitudes of the annual harmonic (period fixed at 365 days).
    """

    k0: float
    k1: float
    k2: float
    k3: float

    def __call__(self, t):
        return eval_seasonal(self, t)

    def as_array(self) -> np.ndarray:
        return np.array([self.k0, self.k1, self.k2, self.k3], float)

    def __add__(self, other: "FourCoeffs") -> "FourCoeffs":
        return FourCoeffs(self.k0 + other.k0, self.k1 + other.k1,
                          self.k2 + other.k2, self.k3 + other.k3)


def eval_seasonal(coeffs: FourCoeffs, t):
    """Evaluate k0 + k1*t + k2*sin(2pi t/365) + k3*cos(2pi t/365) at t (days)."""
    t = np.asarray(t, float)
    wt = ANNUAL_OMEGA * t
    out = coeffs.k0 + coeffs.k1 * t + coeffs.k2 * np.sin(wt) + coeffs.k3 * np.cos(wt)
    return out if out.ndim else float(out)


def require_positive(vol: FourCoeffs, horizon: float, margin: float = 1e-9) -> None:
    """Check nonnegativity of a volatility function on [0, horizon].

    Validated on a 1-day grid (plus the endpoint) with a numerical margin;
    sufficient for the smooth annual harmonics used here.  The degenerate
    sigma = 0 (deterministic dynamics) is allowed; genuinely negative dips
    are rejected.
    """
    if horizon < 0:
        raise DomainError(f"horizon must be >= 0, got {horizon}")
    grid = np.arange(0.0, horizon + 1.0)
    if grid[-1] < horizon:
        grid = np.append(grid, horizon)
    vals = eval_seasonal(vol, grid)
    if np.min(vals) < -margin:
        tbad = float(grid[int(np.argmin(vals))])
        raise DomainError(
            f"volatility negative on [0, {horizon}]: sigma({tbad}) = {np.min(vals):.6g}"
        )


def _check_alpha(alpha: float) -> None:
    if not alpha > 0.0:
        raise DomainError(f"mean-reversion rate must be > 0, got {alpha}")


def k1(t, alpha: float, seasonal: FourCoeffs):
    """Decaying-kernel integral int_0^t f(u) e^{-alpha(t-u)} du in closed form.

    Parameters
    ----------
    t : float or array, days (>= 0)
    alpha : float, mean-reversion rate per day (> 0)
    seasonal : FourCoeffs of the integrand f

    Derived from the four elementary integrals (constant, linear, sine and
    cosine against the decaying kernel); agrees with `quad_exp_kernel` to
    better than 1e-10 relative.
    """
    _check_alpha(alpha)
    t = np.asarray(t, float)
    w = ANNUAL_OMEGA
    e = np.exp(-alpha * t)
    den = alpha * alpha + w * w
    sw, cw = np.sin(w * t), np.cos(w * t)
    i0 = (1.0 - e) / alpha
    i1 = t / alpha - (1.0 - e) / alpha**2
    i_sin = (alpha * sw - w * cw + w * e) / den
    i_cos = (alpha * cw + w * sw - alpha * e) / den
    out = seasonal.k0 * i0 + seasonal.k1 * i1 + seasonal.k2 * i_sin + seasonal.k3 * i_cos
    return out if out.ndim else float(out)


def k2(T, alpha: float, vol: FourCoeffs, check_positive: bool = True):
    """Growing-kernel integral int_0^T f(u) e^{alpha u} du in closed form.

    Overflows to inf for alpha*T beyond the float64 range (~709); the
    quantities the pricing code actually needs are formed from the decayed
    ratio k1-style integrals instead.
    """
    _check_alpha(alpha)
    T_arr = np.asarray(T, float)
    if check_positive:
        require_positive(vol, float(np.max(T_arr)))
    w = ANNUAL_OMEGA
    with np.errstate(over="ignore"):
        g = np.exp(alpha * T_arr)
        den = alpha * alpha + w * w
        sw, cw = np.sin(w * T_arr), np.cos(w * T_arr)
        j0 = (g - 1.0) / alpha
        j1 = T_arr * g / alpha - (g - 1.0) / alpha**2
        j_sin = (g * (alpha * sw - w * cw) + w) / den
        j_cos = (g * (alpha * cw + w * sw) - alpha) / den
        out = vol.k0 * j0 + vol.k1 * j1 + vol.k2 * j_sin + vol.k3 * j_cos
    return out if out.ndim else float(out)


def quad_exp_kernel(f, alpha: float, t: float, orientation: str = "decaying",
                    tol: float = 1e-12) -> float:
    """Adaptive quadrature oracle for the exponential-kernel integrals.

    orientation='decaying' computes int_0^t f(u) e^{-alpha(t-u)} du,
    orientation='growing'  computes int_0^t f(u) e^{alpha u} du.

    Raises QuadratureError if the refinement budget (~2^20 nodes) is
    exhausted before reaching the absolute tolerance.
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if orientation not in ("decaying", "growing"):
        raise DomainError(f"unknown orientation {orientation!r}")
    if t == 0.0:
        return 0.0

    if orientation == "decaying":
        integrand = lambda u: f(u) * np.exp(-alpha * (t - u))
    else:
        integrand = lambda u: f(u) * np.exp(alpha * u)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(integrand, 0.0, t, epsabs=tol, epsrel=1e-11,
                                    limit=_QUAD_LIMIT)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(
                f"exponential-kernel quadrature did not converge on [0, {t}]: {exc}"
            ) from exc
    return val
