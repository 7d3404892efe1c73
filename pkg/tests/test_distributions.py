"""Distribution pairings: direct vs Parseval routes, density samples, windows."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from warpspec.distributions import TestFunction as PairingProfile
from warpspec.distributions import (
    make_test_function,
    s_density,
    s_pairing_direct,
    s_pairing_parseval,
    truncation_sequence,
)
from warpspec.errors import (
    NonMonotoneWarp,
    NyquistViolation,
    RangeTooNarrow,
    UnknownFamily,
)
from warpspec.grids import EnergyGrid, SpectrumSamples
from warpspec.warp import make_analytic_warp

W_ID = make_analytic_warp("identity")
W_LIN = make_analytic_warp("linear-scale", [2.0])
W_SIN = make_analytic_warp("sin-perturbed", [0.3, 1.0])
W_EXP = make_analytic_warp("exp-rate", [0.5])

GAUSS = make_test_function("gaussian")

# diffs in a window-doubling sequence bottom out at quadrature rounding;
# below this, "monotone decrease" is vacuous
DIFF_FLOOR = 1e-10


class TestTestFunctions:
    def test_gaussian_fourier_closed_form(self):
        phi = make_test_function("gaussian", mu=0.5, sigma=0.7)
        tau = np.linspace(-6.0, 6.0, 101)
        expect = 0.7 * np.exp(-(0.7 * tau) ** 2 / 2.0) * np.exp(-1j * 0.5 * tau)
        npt.assert_allclose(phi.fourier(tau), expect, rtol=1e-13)

    def test_hermite_fourier_is_eigenfunction(self):
        for n in range(4):
            phi = make_test_function("hermite", n=n)
            tau = np.linspace(-5.0, 5.0, 101)
            npt.assert_allclose(phi.fourier(tau), (-1j) ** n * phi(tau), rtol=0, atol=1e-12)

    def test_hermite_support_scales_with_order(self):
        for n in (0, 2, 5):
            phi = make_test_function("hermite", n=n)
            assert phi.u_halfwidth == pytest.approx(math.sqrt(2.0 * n + 1.0) + 9.0)

    def test_bump_is_compactly_supported(self):
        phi = make_test_function("bump", mu=1.0, width=2.0)
        assert phi(1.0) == pytest.approx(1.0)
        assert float(phi(3.0 + 1e-9)) == 0.0
        assert float(phi(-1.0 - 1e-9)) == 0.0
        assert float(phi(2.0)) > 0.0

    def test_bump_fourier_matches_direct_quadrature(self):
        phi = make_test_function("bump", mu=0.0, width=2.0)
        e = np.linspace(-2.0, 2.0, 20001)
        for tau in (0.0, 1.3, 4.0):
            direct = np.trapezoid(phi(e) * np.exp(-1j * tau * e), e) / math.sqrt(2.0 * math.pi)
            assert abs(complex(phi.fourier(tau)[0]) - direct) < 1e-8

    def test_e_abs_max(self):
        phi = make_test_function("gaussian", mu=2.0, sigma=1.0)
        assert phi.e_abs_max == pytest.approx(11.0)

    @pytest.mark.parametrize(
        "kind,params,exc",
        [
            ("gaussian", {"sigma": 0.0}, ValueError),
            ("hermite", {"n": -1}, ValueError),
            ("bump", {"width": -1.0}, ValueError),
            ("gaussian", {"rate": 2.0}, TypeError),
        ],
    )
    def test_bad_parameters_rejected(self, kind, params, exc):
        with pytest.raises(exc):
            make_test_function(kind, **params)

    def test_unknown_kind_rejected(self):
        with pytest.raises(UnknownFamily):
            make_test_function("wavelet")


class TestDirectRoute:
    def test_identity_recovers_phi_at_zero(self):
        # S is a delta at the origin when h(t) = t
        assert abs(s_pairing_direct(W_ID, GAUSS, 40.0) - 1.0) < 1e-6

    def test_linear_scale_halves_the_weight(self):
        assert abs(s_pairing_direct(W_LIN, GAUSS, 40.0) - 0.5) < 1e-6

    def test_nonmonotone_window_rejected(self):
        wch = make_analytic_warp("chirp", [1.0, 0.05])
        with pytest.raises(NonMonotoneWarp):
            s_pairing_direct(wch, GAUSS, 12.0)

    def test_undersampled_grid_rejected(self):
        with pytest.raises(NyquistViolation):
            s_pairing_direct(W_ID, GAUSS, 40.0, n=51)

    def test_window_too_small_for_phi_rejected(self):
        # hermite-1's Fourier support needs |u| up to sqrt(3) + 9, so an
        # identity window of half-width 10 leaves the unbounded side uncovered
        phi = make_test_function("hermite", n=1)
        with pytest.raises(RangeTooNarrow):
            s_pairing_direct(W_ID, phi, 10.0)

    def test_saturated_image_side_is_truncation_defined(self):
        # exp-rate's image bottoms out at -1/kappa; that side is exempt from
        # the coverage guard and the windowed value is simply returned
        val = s_pairing_direct(W_EXP, GAUSS, 40.0)
        assert np.isfinite(val.real) and np.isfinite(val.imag)


class TestParsevalRoute:
    def test_identity_recovers_phi_at_zero(self):
        assert abs(s_pairing_parseval(W_ID, GAUSS) - 1.0) < 1e-8

    def test_linear_scale_halves_the_weight(self):
        assert abs(s_pairing_parseval(W_LIN, GAUSS) - 0.5) < 1e-8

    def test_sin_perturbed_cross_method_hermite(self):
        phi = make_test_function("hermite", n=2)
        direct = s_pairing_direct(W_SIN, phi, 40.0)
        parseval = s_pairing_parseval(W_SIN, phi)
        assert abs(direct - parseval) < 1e-4

    def test_bounded_image_needs_explicit_window(self):
        with pytest.raises(RangeTooNarrow):
            s_pairing_parseval(W_EXP, GAUSS)

    def test_matched_window_agrees_on_bounded_image(self):
        # with the same truncation on both sides the two routes integrate the
        # same region and agree even though the T -> inf limit does not exist
        direct = s_pairing_direct(W_EXP, GAUSS, 8.0, enforce_range=False)
        parseval = s_pairing_parseval(W_EXP, GAUSS, T=8.0, enforce_range=False)
        assert abs(direct - parseval) < 1e-4

    def test_bounded_image_diverges_under_window_doubling(self):
        # the t-integral grows linearly once h saturates, so doubling the
        # window moves the direct value by O(1); this is the documented
        # behavior behind the bounded-image guards above
        seq = truncation_sequence(W_EXP, GAUSS, 30.0, 1, route="direct")
        assert abs(seq[1] - seq[0]) > 0.5


class TestDensitySamples:
    def test_identity_spike_has_unit_area(self):
        eg = EnergyGrid(-60.0, 60.0, 6001)
        d = s_density(W_ID, eg, T=6.0)
        assert isinstance(d, SpectrumSamples)
        assert d.grid == eg
        area = float(np.trapezoid(d.values.real, eg.energies))
        assert abs(area - 1.0) < 2e-3

    def test_linear_scale_spike_has_half_area(self):
        eg = EnergyGrid(-60.0, 60.0, 6001)
        d = s_density(W_LIN, eg, T=6.0)
        area = float(np.trapezoid(d.values.real, eg.energies))
        assert abs(area - 0.5) < 2e-3

    def test_identity_matches_dirichlet_kernel(self):
        eg = EnergyGrid(-10.0, 10.0, 2001)
        d = s_density(W_ID, eg, T=4.0)
        e = eg.energies
        with np.errstate(invalid="ignore"):
            expect = np.where(e == 0.0, 4.0 / math.pi, np.sin(4.0 * e) / (math.pi * e))
        npt.assert_allclose(d.values.real, expect, rtol=0, atol=5e-8)
        npt.assert_allclose(d.values.imag, 0.0, atol=1e-10)

    def test_exp_rate_pairing_consistent_with_parseval(self):
        u_max = float(W_EXP.h(6.0))
        de = math.pi / (8.0 * u_max)
        n_e = int(math.ceil(21.0 / de)) + 1
        eg = EnergyGrid(-10.5, -10.5 + de * (n_e - 1), n_e)
        d = s_density(W_EXP, eg, T=6.0)
        paired = complex(np.trapezoid(d.values * GAUSS(eg.energies), eg.energies))
        parseval = s_pairing_parseval(W_EXP, GAUSS, T=6.0, enforce_range=False)
        assert abs(paired - parseval) < 1e-6

    def test_bounded_image_needs_explicit_window(self):
        with pytest.raises(RangeTooNarrow):
            s_density(W_EXP, EnergyGrid(-10.0, 10.0, 1001))

    def test_coarse_energy_grid_rejected(self):
        with pytest.raises(NyquistViolation):
            s_density(W_ID, EnergyGrid(-60.0, 60.0, 61), T=6.0)

    def test_taper_suppresses_sidelobes(self):
        eg = EnergyGrid(-60.0, 60.0, 6001)
        plain = s_density(W_ID, eg, T=6.0)
        tapered = s_density(W_ID, eg, T=6.0, taper=0.5)
        far = np.abs(eg.energies) > 5.0
        assert float(np.max(np.abs(tapered.values[far]))) < 0.1 * float(
            np.max(np.abs(plain.values[far]))
        )

    def test_bad_taper_rejected(self):
        with pytest.raises(ValueError):
            s_density(W_ID, EnergyGrid(-10.0, 10.0, 101), T=4.0, taper=1.5)


class TestPairingProperties:
    def test_linearity_in_phi(self):
        h0 = make_test_function("hermite", n=0)
        a, b = 0.7, -0.4
        combo = PairingProfile(
            "gaussian",
            (0.0, 1.0),
            min(GAUSS.e_lo, h0.e_lo),
            max(GAUSS.e_hi, h0.e_hi),
            max(GAUSS.u_halfwidth, h0.u_halfwidth),
            lambda e: a * GAUSS(e) + b * h0(e),
            lambda tau: a * GAUSS.fourier(tau) + b * h0.fourier(tau),
        )
        lhs = s_pairing_direct(W_SIN, combo, 40.0)
        rhs = a * s_pairing_direct(W_SIN, GAUSS, 40.0) + b * s_pairing_direct(W_SIN, h0, 40.0)
        assert abs(lhs - rhs) < 1e-8

    @pytest.mark.parametrize("warp", [W_ID, W_SIN], ids=["identity", "sin"])
    def test_realness_for_odd_h_and_even_phi(self, warp):
        assert abs(s_pairing_direct(warp, GAUSS, 40.0).imag) < 1e-8

    @pytest.mark.parametrize("warp", [W_ID, W_LIN, W_SIN], ids=["identity", "linear", "sin"])
    def test_gaussian_truncation_is_cauchy(self, warp):
        seq = truncation_sequence(warp, GAUSS, 10.0, 4, route="direct")
        diffs = np.abs(np.diff(seq))
        for k in range(len(diffs) - 1):
            assert diffs[k + 1] <= max(diffs[k], DIFF_FLOOR)

    def test_bump_truncation_decreases_strictly(self):
        bump = make_test_function("bump", mu=0.0, width=2.0)
        seq = truncation_sequence(W_ID, bump, 10.0, 4, route="direct")
        diffs = np.abs(np.diff(seq))
        assert np.all(diffs > DIFF_FLOOR)
        assert np.all(np.diff(diffs) < 0.0)

    def test_unknown_route_rejected(self):
        with pytest.raises(ValueError):
            truncation_sequence(W_ID, GAUSS, 10.0, 2, route="stationary-phase")
