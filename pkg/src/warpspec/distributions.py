"""Window-limited spectral densities of warps and their smeared values.

The warp's inverse-rate profile J(u) = 1/g(h^{-1}(u)) acts as a density in the
warped coordinate. Its window-limited Fourier image

    S(E) = (2 pi)^{-1} integral_{-T}^{T} exp(-i E h(t)) dt
         = (2 pi)^{-1} integral_{h(-T)}^{h(T)} J(u) exp(-i E u) du

concentrates toward a delta as T grows wherever the warp's image keeps
expanding. Smearing S against a test function phi(E) can be computed two
independent ways sharing the same window half-width T:

* direct:   (2 pi)^{-1/2} integral_{-T}^{T} (F phi)(h(t)) dt
* Parseval: (2 pi)^{-1/2} integral_{h(-T)}^{h(T)} J(u) (F phi)(u) du

with (F phi)(tau) = (2 pi)^{-1/2} integral phi(E) exp(-i E tau) dE. The first
never touches J; the second never touches the t-grid. (The Parseval pairing
formally carries a conjugation on each factor; J is real, so the conjugations
collapse and the route reduces to the plain integral above.) Warps whose
image is bounded on a side (the window stops growing there) yield
truncation-defined values: the two routes still agree at matched T, but the
T -> infinity limit does not exist and the range check exempts those sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.signal.windows import tukey

from .errors import NonMonotoneWarp, NyquistViolation, RangeTooNarrow, UnknownFamily
from .grids import EnergyGrid, SpectrumSamples, TimeGrid
from .signals import hermite_function
from .transforms import _direct_sum, _simpson_weights
from .warp import WarpSpec

__all__ = [
    "TestFunction",
    "make_test_function",
    "s_pairing_direct",
    "s_pairing_parseval",
    "s_density",
    "truncation_sequence",
]

_TWO_PI = 2.0 * math.pi
_SQRT_TWO_PI = math.sqrt(_TWO_PI)
_MAX_AUTO_POINTS = 2 ** 20 + 1


@dataclass(frozen=True)
class TestFunction:
    """Smooth test profile phi(E) with its analytic or prevalidated Fourier image.

    ``e_lo``/``e_hi`` bound where phi has numerically relevant support;
    ``u_halfwidth`` bounds where |F phi| stays above roundoff relative to its
    peak. Both feed the sampling and window guards.
    """

    kind: str
    params: tuple
    e_lo: float
    e_hi: float
    u_halfwidth: float
    _phi: Callable = field(repr=False)
    _fourier: Callable = field(repr=False)

    def __call__(self, e):
        return self._phi(np.asarray(e, dtype=float))

    def fourier(self, tau):
        return self._fourier(np.asarray(tau, dtype=float))

    @property
    def e_abs_max(self) -> float:
        return max(abs(self.e_lo), abs(self.e_hi))


def _bump_fourier_factory(mu: float, width: float):
    # compactly supported bump exp(1 - 1/(1 - x^2)); no closed-form image,
    # so quadrature over the support with spacing tied to the largest |tau|
    def fourier(tau):
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        tau_max = float(np.max(np.abs(tau))) if tau.size else 0.0
        n = max(4097, int(math.ceil(8.0 * width * max(tau_max, 1.0) / math.pi)))
        n += 1 - n % 2
        x = np.linspace(-1.0, 1.0, n)
        with np.errstate(divide="ignore", over="ignore"):
            prof = np.where(np.abs(x) < 1.0, np.exp(1.0 - 1.0 / np.maximum(1.0 - x * x, 1e-300)), 0.0)
        e = mu + width * x
        w = _simpson_weights(n, e[1] - e[0]) * prof / _SQRT_TWO_PI
        return _direct_sum(w, e, tau, -1)

    return fourier


def make_test_function(kind: str, **params) -> TestFunction:
    """Build a test profile: gaussian(mu, sigma), hermite(n), or bump(mu, width)."""
    if kind == "gaussian":
        mu = float(params.pop("mu", 0.0))
        sigma = float(params.pop("sigma", 1.0))
        if params:
            raise TypeError(f"unexpected parameters {sorted(params)}")
        if sigma <= 0:
            raise ValueError("sigma must be positive")

        def phi(e):
            return np.exp(-((e - mu) ** 2) / (2.0 * sigma * sigma))

        def fourier(tau):
            return sigma * np.exp(-(sigma * tau) ** 2 / 2.0) * np.exp(-1j * mu * tau)

        halfwidth = math.sqrt(-2.0 * math.log(1e-12)) / sigma
        return TestFunction("gaussian", (mu, sigma), mu - 9.0 * sigma, mu + 9.0 * sigma, halfwidth, phi, fourier)

    if kind == "hermite":
        n = int(params.pop("n", 0))
        if params:
            raise TypeError(f"unexpected parameters {sorted(params)}")
        if n < 0:
            raise ValueError("order must be >= 0")
        edge = math.sqrt(2.0 * n + 1.0) + 9.0

        def phi(e):
            return hermite_function(n, e)

        def fourier(tau):
            return (-1j) ** n * hermite_function(n, tau)

        return TestFunction("hermite", (n,), -edge, edge, edge, phi, fourier)

    if kind == "bump":
        mu = float(params.pop("mu", 0.0))
        width = float(params.pop("width", 1.0))
        if params:
            raise TypeError(f"unexpected parameters {sorted(params)}")
        if width <= 0:
            raise ValueError("width must be positive")

        def phi(e):
            x = (np.asarray(e, dtype=float) - mu) / width
            with np.errstate(divide="ignore", over="ignore"):
                return np.where(np.abs(x) < 1.0, np.exp(1.0 - 1.0 / np.maximum(1.0 - x * x, 1e-300)), 0.0)

        fourier = _bump_fourier_factory(mu, width)
        # sub-exponential image decay: find where it drops below 1e-9 of peak
        probe = np.linspace(0.0, 600.0 / width, 1201)
        mags = np.abs(fourier(probe))
        below = np.nonzero(mags < 1e-9 * mags[0])[0]
        halfwidth = float(probe[below[0]]) if below.size else float(probe[-1])
        return TestFunction("bump", (mu, width), mu - width, mu + width, halfwidth, phi, fourier)

    raise UnknownFamily(
        f"unknown test function kind {kind!r}; known: bump, gaussian, hermite",
        code="distributions/unknown-family",
    )


def _window_guard(warp: WarpSpec, T: float, needed: float) -> Tuple[float, float]:
    """Check the window image covers the test function's u-support on every
    side where the image is unbounded; bounded sides are truncation-defined."""
    u_lo = float(warp.h(-T))
    u_hi = float(warp.h(T))
    if math.isinf(warp.range_hi) and u_hi < needed:
        raise RangeTooNarrow(
            f"window image tops out at {u_hi:.3g} but the test function needs "
            f"{needed:.3g}; increase T"
        )
    if math.isinf(warp.range_lo) and u_lo > -needed:
        raise RangeTooNarrow(
            f"window image bottoms out at {u_lo:.3g} but the test function needs "
            f"{-needed:.3g}; increase T"
        )
    return u_lo, u_hi


def _require_unbounded_image(warp: WarpSpec, what: str) -> None:
    if math.isfinite(warp.range_lo) or math.isfinite(warp.range_hi):
        raise RangeTooNarrow(
            f"{what} without a window half-width is only defined for warps with "
            f"unbounded image; this warp's image is "
            f"({warp.range_lo:.6g}, {warp.range_hi:.6g}); pass T"
        )


def _odd(n: int) -> int:
    return n + 1 - n % 2


def s_pairing_direct(
    warp: WarpSpec,
    phi: TestFunction,
    T: float,
    n: Optional[int] = None,
    enforce_range: bool = True,
) -> complex:
    """Smeared density value by the time-side route, Simpson over [-T, T]."""
    if enforce_range:
        _window_guard(warp, T, phi.u_halfwidth)
    probe = np.linspace(-T, T, 4097)
    g_probe = np.asarray(warp.g(probe), dtype=float)
    if not np.all(g_probe > 0.0):
        raise NonMonotoneWarp(f"warp rate is not positive everywhere on [-{T:.6g}, {T:.6g}]")
    # sampling only needs to resolve (F phi)(h(t)) where it is non-negligible:
    # past 1.5x the image half-width the amplitude is below roundoff and the
    # residual oscillation carries no mass
    h_probe = np.asarray(warp.h(probe), dtype=float)
    live = np.abs(h_probe) <= 1.5 * phi.u_halfwidth
    g_eff = float(np.max(g_probe[live])) if np.any(live) else 0.0
    rate = max(phi.e_abs_max * g_eff, 1e-12)
    if n is None:
        n = _odd(int(min(max(4097, math.ceil(16.0 * T * rate / math.pi) + 1), _MAX_AUTO_POINTS)))
    grid = TimeGrid(-T, T, int(n))
    if grid.dt * rate >= math.pi:
        raise NyquistViolation(
            f"dt = {grid.dt:.3g} undersamples the integrand (rate {rate:.3g} rad/unit)"
        )
    vals = np.asarray(phi.fourier(np.asarray(warp.h(grid.times), dtype=float)), dtype=complex)
    w = _simpson_weights(grid.n, grid.dt)
    return complex(np.sum(w * vals) / _SQRT_TWO_PI)


def _parseval_quadrature(warp: WarpSpec, phi: TestFunction, a: float, b: float, n: Optional[int]) -> complex:
    if not b > a:
        return 0.0 + 0.0j
    if n is None:
        # resolve both the oscillation of F phi and the steepest log-slope of J
        probe = np.linspace(a, b, 4097)
        jp = np.asarray(warp.jacobian_inverse(probe), dtype=float)
        dj = np.abs(np.gradient(jp, probe[1] - probe[0]))
        steep = float(np.max(dj / np.maximum(np.abs(jp), 1e-300)))
        du_req = min(math.pi / (16.0 * max(phi.e_abs_max, 1e-12)), 0.0625 / max(steep, 1e-12))
        n = _odd(int(min(max(4097, math.ceil((b - a) / du_req) + 1), _MAX_AUTO_POINTS)))
    ugrid = TimeGrid(a, b, int(n))
    if ugrid.dt * max(phi.e_abs_max, 1e-12) >= math.pi:
        raise NyquistViolation(
            f"du = {ugrid.dt:.3g} undersamples the warped-coordinate integrand"
        )
    u = ugrid.times
    vals = np.asarray(warp.jacobian_inverse(u), dtype=float) * np.asarray(phi.fourier(u), dtype=complex)
    w = _simpson_weights(ugrid.n, ugrid.dt)
    return complex(np.sum(w * vals) / _SQRT_TWO_PI)


def s_pairing_parseval(
    warp: WarpSpec,
    phi: TestFunction,
    T: Optional[float] = None,
    n: Optional[int] = None,
    enforce_range: bool = True,
) -> complex:
    """Smeared density value by the warped-coordinate route, Simpson in u.

    With T given, integrates J(u) (F phi)(u) over the window image
    [h(-T), h(T)] intersected with the test function's numerically relevant
    u-support (the discarded mass is below roundoff, keeping the matched-T
    semantics intact). With T omitted, returns the ideal windowless value over
    the test function's whole u-support; that limit only exists when the
    warp's image is unbounded on both sides, since at a finite image edge the
    inverse-rate profile J is non-integrable and the windowed values never
    settle.
    """
    clip = 2.0 * phi.u_halfwidth
    if T is None:
        _require_unbounded_image(warp, "s_pairing_parseval")
        return _parseval_quadrature(warp, phi, -clip, clip, n)
    if enforce_range:
        u_lo, u_hi = _window_guard(warp, T, phi.u_halfwidth)
    else:
        u_lo, u_hi = float(warp.h(-T)), float(warp.h(T))
    return _parseval_quadrature(warp, phi, max(u_lo, -clip), min(u_hi, clip), n)


def s_density(
    warp: WarpSpec,
    egrid: EnergyGrid,
    T: Optional[float] = None,
    n: Optional[int] = None,
    taper: float = 0.0,
) -> SpectrumSamples:
    """Window-limited density samples S(E) = (2 pi)^{-1} integral J(u) exp(-i E u) du.

    The integral runs over the window image [h(-T), h(T)]; with the identity
    warp and taper 0 this is the Dirichlet kernel sin(T E) / (pi E). With T
    omitted the window is the widest symmetric u-interval the energy grid can
    resolve, |u| <= pi / (2 dE), which requires an image unbounded on both
    sides. The optional Tukey ``taper`` (fraction of the u-window, 0 disables)
    smooths truncation ringing at the cost of widening the main lobe; leave it
    0 when pairing the samples against a test function for cross-route checks.
    """
    if not 0.0 <= taper <= 1.0:
        raise ValueError("taper must lie in [0, 1]")
    if T is None:
        _require_unbounded_image(warp, "s_density")
        if egrid.n < 2:
            raise ValueError("windowless s_density needs an energy grid with n >= 2")
        u_lo = -math.pi / (2.0 * egrid.de)
        u_hi = -u_lo
    else:
        u_lo = float(warp.h(-T))
        u_hi = float(warp.h(T))
        if not u_hi > u_lo:
            raise RangeTooNarrow("window image has non-positive width")
    e_abs = max(abs(egrid.e_min), abs(egrid.e_max))
    u_abs = max(abs(u_lo), abs(u_hi))
    if egrid.n > 1 and egrid.de * u_abs >= math.pi:
        raise NyquistViolation(
            f"dE = {egrid.de:.3g} cannot resolve oscillation at |u| up to {u_abs:.3g}"
        )
    if n is None:
        probe = np.linspace(u_lo, u_hi, 4097)
        jp = np.asarray(warp.jacobian_inverse(probe), dtype=float)
        dj = np.abs(np.gradient(jp, probe[1] - probe[0]))
        steep = float(np.max(dj / np.maximum(np.abs(jp), 1e-300)))
        du_req = min(math.pi / (16.0 * max(e_abs, 1e-12)), 0.0625 / max(steep, 1e-12))
        n = _odd(int(min(max(4097, math.ceil((u_hi - u_lo) / du_req) + 1), _MAX_AUTO_POINTS)))
    ugrid = TimeGrid(u_lo, u_hi, int(n))
    if ugrid.dt * max(e_abs, 1e-12) >= math.pi:
        raise NyquistViolation(
            f"du = {ugrid.dt:.3g} undersamples the density integrand"
        )
    w = _simpson_weights(ugrid.n, ugrid.dt) * np.asarray(warp.jacobian_inverse(ugrid.times), dtype=float) / _TWO_PI
    if taper > 0.0:
        w = w * tukey(ugrid.n, alpha=taper)
    vals = _direct_sum(w, ugrid.times, egrid.energies, -1)
    return SpectrumSamples(egrid, vals)


def truncation_sequence(
    warp: WarpSpec,
    phi: TestFunction,
    T0: float,
    n_doublings: int,
    route: str = "direct",
) -> np.ndarray:
    """Smeared values at window half-widths T0, 2 T0, ..., 2^n T0.

    Range enforcement is off: the whole point is watching the windowed value
    settle, including below the threshold the guard would demand.
    """
    if route == "direct":
        fn = s_pairing_direct
    elif route == "parseval":
        fn = s_pairing_parseval
    else:
        raise ValueError(f"unknown route {route!r}")
    out = [fn(warp, phi, T0 * 2.0 ** k, enforce_range=False) for k in range(n_doublings + 1)]
    return np.asarray(out, dtype=complex)
