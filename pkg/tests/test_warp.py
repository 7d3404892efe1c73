"""Warp construction: catalog families, anchoring, inversion, sampled rates."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from warpspec.errors import (
    GridTooCoarse,
    NonMonotoneParameters,
    NonPositiveG,
    ResampleOutOfRange,
    UnknownFamily,
)
from warpspec.grids import SampledSignal, TimeGrid
from warpspec.warp import (
    WARP_FAMILIES,
    MonotonicityReport,
    WarpSpec,
    check_monotone,
    make_analytic_warp,
    make_numeric_warp,
)

CATALOG = [
    ("identity", []),
    ("linear-scale", [2.0]),
    ("chirp", [1.0, 0.05]),
    ("sin-perturbed", [0.3, 1.0]),
    ("exp-rate", [0.5]),
]

# chirp g = 1 + 0.1 t crosses zero at t = -10; stay right of it
SAFE_WINDOW = (-8.0, 8.0)


def test_family_listing_covers_catalog():
    for name, _ in CATALOG:
        assert name in WARP_FAMILIES


@pytest.mark.parametrize("name,params", CATALOG)
def test_h_is_antiderivative_of_g(name, params):
    w = make_analytic_warp(name, params)
    t = np.linspace(*SAFE_WINDOW, 4001)
    eps = 1e-6
    dh = (np.asarray(w.h(t + eps)) - np.asarray(w.h(t - eps))) / (2.0 * eps)
    npt.assert_allclose(dh, np.asarray(w.g(t)), rtol=1e-7, atol=1e-9)


@pytest.mark.parametrize("name,params", CATALOG)
def test_inverse_roundtrip(name, params):
    w = make_analytic_warp(name, params)
    t = np.linspace(*SAFE_WINDOW, 513)
    back = np.asarray(w.h_inv(np.asarray(w.h(t))))
    npt.assert_allclose(back, t, rtol=0, atol=1e-10)


@pytest.mark.parametrize("name,params", CATALOG)
def test_default_anchor(name, params):
    w = make_analytic_warp(name, params)
    assert float(w.h(0.0)) == pytest.approx(0.0, abs=1e-14)


def test_custom_anchor_shifts_h_only():
    w0 = make_analytic_warp("exp-rate", [0.5])
    w1 = make_analytic_warp("exp-rate", [0.5], t0=1.0, c0=2.0)
    assert float(w1.h(1.0)) == pytest.approx(2.0, abs=1e-12)
    t = np.linspace(-2.0, 4.0, 101)
    npt.assert_allclose(np.asarray(w1.g(t)), np.asarray(w0.g(t)), rtol=1e-14)


@pytest.mark.parametrize("name,params", CATALOG)
def test_monotone_on_safe_window(name, params):
    w = make_analytic_warp(name, params)
    rep = check_monotone(w, TimeGrid(*SAFE_WINDOW, 2001))
    assert isinstance(rep, MonotonicityReport)
    assert rep.passed
    assert rep.min_g > 0.0


def test_monotone_report_flags_chirp_past_fold():
    w = make_analytic_warp("chirp", [1.0, 0.05])
    rep = check_monotone(w, TimeGrid(-20.0, 20.0, 2001))
    assert not rep.passed
    assert rep.min_g < 0.0
    assert rep.argmin_t == pytest.approx(-20.0)


@pytest.mark.parametrize(
    "name,params,kw",
    [
        ("linear-scale", [0.0], {}),
        ("linear-scale", [-1.0], {}),
        ("sin-perturbed", [1.2, 1.0], {}),
        ("exp-rate", [0.0], {}),
        # anchor sits left of the chirp's fold, so g(t0) <= 0
        ("chirp", [1.0, 0.05], {"t0": -12.0}),
    ],
)
def test_nonmonotone_parameters_rejected(name, params, kw):
    with pytest.raises(NonMonotoneParameters):
        make_analytic_warp(name, params, **kw)


def test_unknown_family_rejected():
    with pytest.raises(UnknownFamily):
        make_analytic_warp("cubic-drift", [1.0])


def test_image_bounds():
    assert make_analytic_warp("identity").range_lo == -math.inf
    assert make_analytic_warp("identity").range_hi == math.inf
    wexp = make_analytic_warp("exp-rate", [0.5])
    assert wexp.range_lo == pytest.approx(-2.0)
    assert wexp.range_hi == math.inf
    wch = make_analytic_warp("chirp", [1.0, 0.05])
    assert wch.range_lo == pytest.approx(-5.0)
    assert wch.range_hi == math.inf


def test_inverse_outside_image_raises():
    wexp = make_analytic_warp("exp-rate", [0.5])
    with pytest.raises(ResampleOutOfRange):
        wexp.h_inv(-3.0)


def test_jacobian_inverse_closed_form():
    # exp-rate: h_inv(u) = ln(1 + kappa u)/kappa, dh_inv/du = 1/(1 + kappa u)
    w = make_analytic_warp("exp-rate", [0.5])
    u = np.linspace(-1.5, 40.0, 301)
    npt.assert_allclose(w.jacobian_inverse(u), 1.0 / (1.0 + 0.5 * u), rtol=1e-11)


def test_jacobian_inverse_requires_inverse():
    w = WarpSpec(kind="bare", g=lambda t: np.ones_like(np.asarray(t, float)),
                 h=lambda t: np.asarray(t, float))
    with pytest.raises(ValueError):
        w.jacobian_inverse(0.5)


class TestNumericWarp:
    def _sampled_rate(self, name, params, lo=-8.0, hi=8.0, n=2001):
        ref = make_analytic_warp(name, params)
        g = TimeGrid(lo, hi, n)
        return ref, SampledSignal(g, np.asarray(ref.g(g.times), dtype=complex))

    def test_matches_analytic_h(self):
        ref, samples = self._sampled_rate("sin-perturbed", [0.3, 1.0])
        w = make_numeric_warp(samples)
        t = np.linspace(-7.5, 7.5, 501)
        npt.assert_allclose(np.asarray(w.h(t)), np.asarray(ref.h(t)), rtol=0, atol=1e-9)

    def test_inverse_roundtrip(self):
        _, samples = self._sampled_rate("exp-rate", [0.5])
        w = make_numeric_warp(samples)
        t = np.linspace(-7.5, 7.5, 501)
        npt.assert_allclose(np.asarray(w.h_inv(np.asarray(w.h(t)))), t, rtol=0, atol=1e-10)

    def test_anchor_honored(self):
        _, samples = self._sampled_rate("sin-perturbed", [0.3, 1.0])
        w = make_numeric_warp(samples, t0=1.0, c0=3.0)
        assert float(w.h(1.0)) == pytest.approx(3.0, abs=1e-10)

    def test_coarse_rate_grid_rejected(self):
        _, samples = self._sampled_rate("exp-rate", [0.5], n=17)
        with pytest.raises(GridTooCoarse):
            make_numeric_warp(samples)

    def test_nonpositive_samples_rejected(self):
        g = TimeGrid(-8.0, 8.0, 17)
        samples = SampledSignal(g, np.linspace(-1.0, 1.0, 17).astype(complex))
        with pytest.raises(NonPositiveG):
            make_numeric_warp(samples)

    def test_inverse_outside_sampled_image(self):
        ref, samples = self._sampled_rate("sin-perturbed", [0.3, 1.0])
        w = make_numeric_warp(samples)
        with pytest.raises(ResampleOutOfRange):
            w.h_inv(float(ref.h(8.0)) + 1.0)
