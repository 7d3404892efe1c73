"""Strictly increasing time warps h(t) with rate g(t) = h'(t).

A warp is the accumulated integral of a positive rate, anchored so that
h(t0) = c0. Catalog families come with closed-form h and inverse where they
exist; sampled rates are accumulated by cumulative Simpson quadrature and
inverted by bracketed bisection with Newton polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .errors import (
    ConvergenceFailure,
    GridTooCoarse,
    NonMonotoneParameters,
    NonPositiveG,
    ResampleOutOfRange,
    UnknownFamily,
)
from .grids import SampledSignal, TimeGrid

__all__ = [
    "WarpSpec",
    "MonotonicityReport",
    "make_analytic_warp",
    "make_numeric_warp",
    "check_monotone",
    "WARP_FAMILIES",
]

_INVERT_TOL = 1e-12
_INVERT_MAX_ITER = 80


@dataclass(frozen=True)
class WarpSpec:
    """A time warp: rate g, accumulated warp h with h(t0) = c0, and inverse.

    ``g``, ``h`` and ``h_inv`` are vectorized callables. ``h_inv`` may be None
    for hand-built warps that are only used in additive contexts. ``range_lo``
    and ``range_hi`` bound the image of h (open bounds, +-inf when unbounded);
    ``h_inv`` raises ResampleOutOfRange outside them.
    """

    kind: str
    g: Callable = field(repr=False)
    h: Callable = field(repr=False)
    h_inv: Optional[Callable] = field(repr=False, default=None)
    t0: float = 0.0
    c0: float = 0.0
    params: tuple = ()
    range_lo: float = -math.inf
    range_hi: float = math.inf

    def jacobian_inverse(self, u):
        """d h^{-1} / du evaluated as 1 / g(h^{-1}(u))."""
        if self.h_inv is None:
            raise ValueError(f"warp kind {self.kind!r} carries no inverse")
        return 1.0 / np.asarray(self.g(self.h_inv(u)), dtype=float)


@dataclass(frozen=True)
class MonotonicityReport:
    """Report-only monotonicity summary of g over a grid."""

    passed: bool
    min_g: float
    argmin_t: float


def check_monotone(w: WarpSpec, grid: TimeGrid) -> MonotonicityReport:
    """Evaluate g on the grid samples and report the minimum (no raising)."""
    t = grid.times
    gvals = np.asarray(w.g(t), dtype=float)
    i = int(np.argmin(gvals))
    return MonotonicityReport(passed=bool(gvals[i] > 0.0), min_g=float(gvals[i]), argmin_t=float(t[i]))


def _check_range(u: np.ndarray, lo: float, hi: float, kind: str) -> None:
    slop = 1e-12 * max(1.0, float(np.max(np.abs(u))) if u.size else 1.0)
    if float(np.min(u)) < lo - slop or float(np.max(u)) > hi + slop:
        raise ResampleOutOfRange(
            f"warp {kind!r}: inverse requested outside the image ({lo:.6g}, {hi:.6g})"
        )


def _invert_monotone(h_fn, g_fn, u, lo, hi):
    """Solve h(t) = u on bracket [lo, hi]: bisection-safeguarded Newton."""
    u = np.asarray(u, dtype=float)
    t = 0.5 * (np.broadcast_to(lo, u.shape).astype(float) + np.broadcast_to(hi, u.shape))
    lo = np.broadcast_to(lo, u.shape).astype(float).copy()
    hi = np.broadcast_to(hi, u.shape).astype(float).copy()
    scale = np.maximum(1.0, np.abs(u))
    for _ in range(_INVERT_MAX_ITER):
        r = np.asarray(h_fn(t), dtype=float) - u
        if np.all(np.abs(r) <= _INVERT_TOL * scale):
            return t
        lo = np.where(r < 0, t, lo)
        hi = np.where(r > 0, t, hi)
        g = np.asarray(g_fn(t), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            t_new = t - r / g
        bad = ~np.isfinite(t_new) | (t_new <= lo) | (t_new >= hi)
        t = np.where(bad, 0.5 * (lo + hi), t_new)
    r = np.asarray(h_fn(t), dtype=float) - u
    if np.all(np.abs(r) <= 1e-10 * scale):
        return t
    raise ConvergenceFailure("warp inversion did not reach tolerance", code="warp/convergence-failure")


def _as_float_array(t):
    return np.asarray(t, dtype=float)


def _make_identity(t0: float, c0: float) -> WarpSpec:
    shift = c0 - t0
    return WarpSpec(
        kind="identity",
        g=lambda t: np.ones_like(_as_float_array(t)),
        h=lambda t: _as_float_array(t) + shift,
        h_inv=lambda u: _as_float_array(u) - shift,
        t0=t0,
        c0=c0,
    )


def _make_linear_scale(alpha: float, t0: float, c0: float) -> WarpSpec:
    if not alpha > 0:
        raise NonMonotoneParameters(f"linear-scale needs alpha > 0, got {alpha}")
    shift = c0 - alpha * t0
    return WarpSpec(
        kind="linear-scale",
        g=lambda t: np.full_like(_as_float_array(t), alpha),
        h=lambda t: alpha * _as_float_array(t) + shift,
        h_inv=lambda u: (_as_float_array(u) - shift) / alpha,
        t0=t0,
        c0=c0,
        params=(alpha,),
    )


def _make_chirp(alpha: float, beta: float, t0: float, c0: float) -> WarpSpec:
    if beta == 0.0:
        if not alpha > 0:
            raise NonMonotoneParameters(f"chirp with beta = 0 needs alpha > 0, got {alpha}")
        w = _make_linear_scale(alpha, t0, c0)
        return WarpSpec(
            kind="chirp", g=w.g, h=w.h, h_inv=w.h_inv, t0=t0, c0=c0, params=(alpha, beta)
        )
    # valid on the branch where g = alpha + 2 beta t > 0; h folds at t* = -alpha/(2 beta)
    if not alpha + 2.0 * beta * t0 > 0:
        raise NonMonotoneParameters(
            f"chirp anchor t0 = {t0} lies off the increasing branch (g(t0) <= 0)"
        )
    shift = c0 - (alpha * t0 + beta * t0 * t0)
    fold_value = -alpha * alpha / (4.0 * beta) + shift
    if beta > 0:
        range_lo, range_hi = fold_value, math.inf
    else:
        range_lo, range_hi = -math.inf, fold_value

    def h(t):
        t = _as_float_array(t)
        return alpha * t + beta * t * t + shift

    def h_inv(u):
        u = _as_float_array(u)
        _check_range(u, range_lo, range_hi, "chirp")
        disc = alpha * alpha + 4.0 * beta * (u - shift)
        disc = np.maximum(disc, 0.0)  # clip rounding slop at the fold
        return (-alpha + np.sqrt(disc)) / (2.0 * beta)

    return WarpSpec(
        kind="chirp",
        g=lambda t: alpha + 2.0 * beta * _as_float_array(t),
        h=h,
        h_inv=h_inv,
        t0=t0,
        c0=c0,
        params=(alpha, beta),
        range_lo=range_lo,
        range_hi=range_hi,
    )


def _make_sin_perturbed(a: float, omega: float, t0: float, c0: float) -> WarpSpec:
    if not abs(a * omega) < 1.0:
        raise NonMonotoneParameters(
            f"sin-perturbed needs |a * omega| < 1 for monotonicity, got {abs(a * omega)}"
        )
    shift = c0 - (t0 + a * math.sin(omega * t0))

    def h(t):
        t = _as_float_array(t)
        return t + a * np.sin(omega * t) + shift

    def g(t):
        t = _as_float_array(t)
        return 1.0 + a * omega * np.cos(omega * t)

    def h_inv(u):
        u = _as_float_array(u)
        y = u - shift
        return _invert_monotone(lambda t: t + a * np.sin(omega * t), g, y, y - abs(a), y + abs(a))

    return WarpSpec(
        kind="sin-perturbed", g=g, h=h, h_inv=h_inv, t0=t0, c0=c0, params=(a, omega)
    )


def _make_exp_rate(kappa: float, t0: float, c0: float) -> WarpSpec:
    if kappa == 0.0:
        raise NonMonotoneParameters("exp-rate needs kappa != 0 (use identity instead)")
    # base accumulation (exp(kappa t) - 1) / kappa, re-anchored at t0
    base_t0 = math.expm1(kappa * t0) / kappa
    shift = c0 - base_t0
    edge = -1.0 / kappa + shift  # finite range bound
    if kappa > 0:
        range_lo, range_hi = edge, math.inf
    else:
        range_lo, range_hi = -math.inf, edge

    def h(t):
        t = _as_float_array(t)
        return np.expm1(kappa * t) / kappa + shift

    def h_inv(u):
        u = _as_float_array(u)
        _check_range(u, range_lo, range_hi, "exp-rate")
        arg = np.maximum(1.0 + kappa * (u - shift), np.finfo(float).tiny)
        return np.log(arg) / kappa

    return WarpSpec(
        kind="exp-rate",
        g=lambda t: np.exp(kappa * _as_float_array(t)),
        h=h,
        h_inv=h_inv,
        t0=t0,
        c0=c0,
        params=(kappa,),
        range_lo=range_lo,
        range_hi=range_hi,
    )


WARP_FAMILIES = {
    "identity": (0, _make_identity),
    "linear-scale": (1, _make_linear_scale),
    "chirp": (2, _make_chirp),
    "sin-perturbed": (2, _make_sin_perturbed),
    "exp-rate": (1, _make_exp_rate),
}


def make_analytic_warp(
    family: str, params: Sequence[float] = (), t0: float = 0.0, c0: float = 0.0
) -> WarpSpec:
    """Build a catalog warp.

    Families and parameters:

    ==============  ==========  =========================================
    family          params      h(t) before re-anchoring at (t0, c0)
    ==============  ==========  =========================================
    identity        []          t
    linear-scale    [alpha]     alpha * t, alpha > 0
    chirp           [a, b]      a*t + b*t^2 on the branch where g > 0
    sin-perturbed   [a, omega]  t + a*sin(omega*t), |a*omega| < 1
    exp-rate        [kappa]     (exp(kappa*t) - 1)/kappa, kappa != 0
    ==============  ==========  =========================================
    """
    if family not in WARP_FAMILIES:
        known = ", ".join(sorted(WARP_FAMILIES))
        raise UnknownFamily(f"unknown warp family {family!r}; known: {known}")
    arity, builder = WARP_FAMILIES[family]
    params = tuple(float(p) for p in params)
    if len(params) != arity:
        raise NonMonotoneParameters(
            f"family {family!r} takes {arity} parameter(s), got {len(params)}"
        )
    return builder(*params, float(t0), float(c0))


def make_numeric_warp(
    g_samples: SampledSignal, t0: float = 0.0, c0: float = 0.0, rel_tol: float = 1e-6
) -> WarpSpec:
    """Accumulate a sampled rate into a warp valid on the sampled window.

    The rate must be real and strictly positive. h is the cumulative Simpson
    integral of the samples, re-anchored so h(t0) = c0; a stride-2 Richardson
    self-estimate guards against grids too coarse for the rate's variation
    (relative estimate > ``rel_tol`` raises GridTooCoarse). g and h are cubic
    spline interpolants of the samples; h_inv is solved by bracketed Newton.
    """
    grid = g_samples.grid
    vals = np.asarray(g_samples.values)
    if np.iscomplexobj(vals):
        if np.max(np.abs(vals.imag)) > 1e-12 * max(1.0, float(np.max(np.abs(vals.real)))):
            raise NonPositiveG("rate samples must be real")
        vals = vals.real
    vals = vals.astype(float)
    if not np.all(np.isfinite(vals)):
        raise NonPositiveG("rate samples must be finite")
    if np.min(vals) <= 0.0:
        i = int(np.argmin(vals))
        raise NonPositiveG(
            f"rate must be strictly positive; min g = {vals[i]:.6g} at t = {grid.times[i]:.6g}"
        )
    if grid.n < 5:
        raise GridTooCoarse("need at least 5 rate samples")
    if not grid.t_min <= t0 <= grid.t_max:
        raise ValueError(
            f"anchor t0 = {t0} outside sampled window [{grid.t_min}, {grid.t_max}]; pass t0"
        )

    t = grid.times
    dt = grid.dt
    accum = cumulative_simpson(vals, dx=dt, initial=0.0)

    # Richardson-style self-estimate: stride-2 accumulation over shared points.
    accum_coarse = cumulative_simpson(vals[::2], dx=2.0 * dt, initial=0.0)
    scale = max(float(np.ptp(accum)), np.finfo(float).tiny)
    estimate = float(np.max(np.abs(accum[::2] - accum_coarse))) / scale
    if estimate > rel_tol:
        raise GridTooCoarse(
            f"quadrature self-estimate {estimate:.3e} exceeds rel_tol {rel_tol:.3e}"
        )

    h_spline = CubicSpline(t, accum)
    g_spline = CubicSpline(t, vals)
    anchor = float(h_spline(t0)) - c0
    lo_u = float(accum[0]) - anchor
    hi_u = float(accum[-1]) - anchor

    def h(tt):
        return np.asarray(h_spline(_as_float_array(tt)), dtype=float) - anchor

    def g(tt):
        return np.asarray(g_spline(_as_float_array(tt)), dtype=float)

    def h_inv(u):
        u = _as_float_array(u)
        _check_range(u, lo_u, hi_u, "numeric")
        idx = np.clip(np.searchsorted(accum, u + anchor), 1, grid.n - 1)
        return _invert_monotone(h, g, u, t[idx - 1], t[idx])

    return WarpSpec(
        kind="numeric",
        g=g,
        h=h,
        h_inv=h_inv,
        t0=t0,
        c0=c0,
        params=(),
        range_lo=lo_u,
        range_hi=hi_u,
    )
