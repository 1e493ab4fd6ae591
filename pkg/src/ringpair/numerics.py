"""Shared numerical kernels.

Adaptive quadrature is a hand-rolled Gauss-Kronrod 7/15 scheme rather
than a scipy.integrate wrapper because complex integrands must share one
subdivision tree (two independent quad() calls on the real and imaginary
parts would not), and because results must be bit-deterministic across
runs.  Root finding and curve fitting delegate to scipy.
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit, root_scalar

from .errors import BracketError, FitError, QuadratureError

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15 table).
# Odd-indexed Kronrod nodes coincide with the embedded 7-point Gauss rule.
_XGK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870,
])


@dataclass(frozen=True)
class QuadratureResult:
    """Value, conservative error estimate, and integrand evaluation count."""
    value: complex | float
    abs_error_estimate: float
    evaluations: int


def _gk15(f, a: float, b: float):
    """One Gauss-Kronrod 7/15 panel on [a, b].

    Returns (kronrod value, |kronrod - gauss| error estimate).  The
    integrand is called once with the 15 nodes as an ndarray.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = np.asarray(f(mid + half * _XGK))
    kron = half * np.sum(_WGK * fx)
    gauss = half * np.sum(_WG * fx[1::2])
    return kron, abs(kron - gauss)


def integrate_adaptive(f: Callable[[np.ndarray], np.ndarray],
                       a: float, b: float,
                       rel_tol: float = 1e-9,
                       abs_tol: float = 0.0,
                       max_subdivisions: int = 2000) -> QuadratureResult:
    """Adaptively integrate ``f`` over [a, b].

    Parameters
    ----------
    f : callable
        Vectorized integrand; called with an ndarray of abscissae and
        must return an ndarray of (real or complex) values.
    a, b : float
        Integration limits, a < b.
    rel_tol : float
        Target: total error estimate <= rel_tol * |value| (or abs_tol).
    abs_tol : float
        Absolute floor for the convergence test; useful when the true
        value may be zero.
    max_subdivisions : int
        Budget of interval bisections before giving up.

    Returns
    -------
    QuadratureResult
        Complex value if the integrand is complex-valued.

    Raises
    ------
    QuadratureError
        If the budget is exhausted before the tolerance is met.  The
        exception carries the best value and error estimate reached.
    """
    if not a < b:
        raise ValueError(f"require a < b, got [{a}, {b}]")
    val, err = _gk15(f, a, b)
    evals = 15
    # Worst-interval-first heap; the counter breaks ties deterministically.
    heap = [(-err, 0, a, b, val, err)]
    counter = 1
    total_val, total_err = val, err
    for _ in range(max_subdivisions):
        if total_err <= max(rel_tol * abs(total_val), abs_tol):
            return QuadratureResult(total_val, total_err, evals)
        neg_err, _, lo, hi, v_old, e_old = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval at floating-point resolution
            heapq.heappush(heap, (0.0, counter, lo, hi, v_old, e_old))
            counter += 1
            continue
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        evals += 30
        total_val += v1 + v2 - v_old
        total_err += e1 + e2 - e_old
        heapq.heappush(heap, (-e1, counter, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, v2, e2))
        counter += 2
    if total_err <= max(rel_tol * abs(total_val), abs_tol):
        return QuadratureResult(total_val, total_err, evals)
    raise QuadratureError(
        f"quadrature did not reach rel_tol={rel_tol:g} within "
        f"{max_subdivisions} subdivisions (achieved "
        f"{total_err / max(abs(total_val), 1e-300):.3e} relative)",
        value=total_val, error_estimate=total_err)


def find_root_bracketed(g: Callable[[float], float],
                        lo: float, hi: float,
                        tol: float = 1e-12) -> float:
    """Find a root of ``g`` inside [lo, hi].

    Requires a sign change over the bracket; the returned root never
    leaves it (Brent's method, bisection-safeguarded).  Endpoints that
    are already roots are returned directly.
    """
    g_lo, g_hi = g(lo), g(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if g_lo * g_hi > 0:
        raise BracketError(
            f"no sign change over [{lo}, {hi}]: g={g_lo:g}, {g_hi:g}")
    span = max(abs(lo), abs(hi), 1.0)
    sol = root_scalar(g, bracket=(lo, hi), method="brentq",
                      xtol=tol * span, rtol=8 * np.finfo(float).eps)
    return float(sol.root)


@dataclass(frozen=True)
class LorentzianFit:
    center: float
    fwhm: float
    peak: float
    residual_rms: float


def _lorentzian(w, center, fwhm, peak):
    half_sq = 0.25 * fwhm * fwhm
    return peak * half_sq / (half_sq + (w - center) ** 2)


def fit_lorentzian(omega: np.ndarray, y: np.ndarray) -> LorentzianFit:
    """Least-squares fit of a Lorentzian peak*(G^2/4)/((G^2/4)+(w-wc)^2).

    Needs at least 5 samples spanning roughly 2 FWHM.  Raises FitError
    on flat data or non-convergence.
    """
    omega = np.asarray(omega, dtype=float)
    y = np.asarray(y, dtype=float)
    if omega.shape != y.shape or omega.size < 5:
        raise ValueError("need >= 5 (omega, y) samples of equal length")
    if np.ptp(y) == 0.0:
        raise FitError("flat data: Lorentzian parameters are unidentifiable")
    i_max = int(np.argmax(y))
    peak0 = y[i_max]
    center0 = omega[i_max]
    above = omega[y >= 0.5 * peak0]
    fwhm0 = float(above.max() - above.min()) or float(np.ptp(omega)) / 4
    # Fit in shifted/scaled coordinates: abscissa spans can dwarf the
    # linewidth (1e15 rad/s centers, 1e9 widths), which wrecks the
    # finite-difference Jacobian in raw units.
    u = (omega - center0) / fwhm0
    try:
        with warnings.catch_warnings():
            # the covariance is unused; near-exact data make it singular
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, _ = curve_fit(_lorentzian, u, y, p0=(0.0, 1.0, peak0),
                                maxfev=10000, xtol=1e-14, ftol=1e-14)
    except RuntimeError as exc:
        raise FitError(f"Lorentzian fit did not converge: {exc}") from exc
    uc, uf, peak = popt
    fwhm = abs(float(uf)) * fwhm0
    center = center0 + float(uc) * fwhm0
    if fwhm == 0.0 or not np.isfinite(popt).all():
        raise FitError("ill-conditioned Lorentzian fit")
    resid = y - _lorentzian(u, *popt)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return LorentzianFit(center, fwhm, float(peak), rms)
