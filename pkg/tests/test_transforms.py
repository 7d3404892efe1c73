"""Transform pairs, reduction identities, bi-orthogonal pairing, energy operators."""

import math

import numpy as np
import numpy.testing as npt
import pytest
from scipy.signal.windows import tukey

from warpspec.errors import GridMismatch, GridTooCoarse, NonMonotoneWarp
from warpspec.grids import EnergyGrid, SampledSignal, SpectrumSamples, TimeGrid
from warpspec.signals import band_limited_noise, gaussian_signal, hermite_signal
from warpspec.transforms import (
    BasisFunction,
    adjoint_defect,
    apply_additive_energy_op,
    apply_multiplicative_energy_op,
    biorth_pairing,
    default_direct_energy_grid,
    fourier_of_samples,
    inverse_fourier_of_spectrum,
    modulated_forward,
    modulated_inverse,
    modulated_reduction_check,
    native_energy_grid,
    resolution_roundtrip,
    warped_forward,
    warped_inverse,
    warped_reduction_check,
)
from warpspec.warp import WarpSpec, make_analytic_warp

SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

W_ID = make_analytic_warp("identity")
W_LIN = make_analytic_warp("linear-scale", [2.0])
W_CHIRP = make_analytic_warp("chirp", [1.0, 0.05])
W_SIN = make_analytic_warp("sin-perturbed", [0.3, 1.0])
W_EXP = make_analytic_warp("exp-rate", [0.5])


def zero_rate_warp() -> WarpSpec:
    # h == 0 degenerates the modulated pair to the plain Fourier pair
    z = lambda t: np.zeros_like(np.asarray(t, dtype=float))
    return WarpSpec(kind="zero-rate", g=z, h=z)


def rel_l2(a: np.ndarray, b: np.ndarray, dx: float) -> float:
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2) / np.sum(np.abs(b) ** 2)))


class TestFourierPair:
    def test_gaussian_roundtrip(self):
        tg = TimeGrid(-20.0, 20.0, 2048)
        f = gaussian_signal(tg)
        rec = inverse_fourier_of_spectrum(fourier_of_samples(f), tg)
        assert rel_l2(rec.values, f.values, tg.dt) < 1e-8

    def test_inverse_rejects_unsupported_times(self):
        spec = SpectrumSamples(EnergyGrid(-4.0, 4.0, 101), np.zeros(101, complex))
        limit = math.pi / 0.08
        with pytest.raises(GridMismatch):
            inverse_fourier_of_spectrum(spec, TimeGrid(-2 * limit, 2 * limit, 64))

    def test_forward_rejects_aliased_energy_grid(self):
        tg = TimeGrid(-8.0, 8.0, 1024)
        with pytest.raises(GridMismatch):
            fourier_of_samples(gaussian_signal(tg), EnergyGrid(-500.0, 500.0, 101))


class TestModulatedPair:
    def test_zero_rate_reduces_to_plain_fourier(self):
        tg = TimeGrid(-20.0, 20.0, 2048)
        f = gaussian_signal(tg)
        eg = native_energy_grid(tg)
        spec = modulated_forward(f, zero_rate_warp(), eg)
        npt.assert_allclose(spec.values, np.exp(-eg.energies ** 2 / 2.0), rtol=0, atol=1e-11)

    def test_conjugate_basis_gives_smeared_delta(self):
        # forward of the conjugate basis function at E0 is a Dirichlet spike;
        # pairing it with a Gaussian recovers the Gaussian at E0
        tg = TimeGrid(-20.0, 20.0, 2048)
        e0 = 1.5
        h_t = np.asarray(W_CHIRP.h(tg.times), dtype=float)
        f = SampledSignal(tg, np.exp(1j * (h_t + e0 * tg.times)) / SQRT_TWO_PI)
        spec = modulated_forward(f, W_CHIRP, native_energy_grid(tg))
        e = spec.grid.energies
        paired = complex(np.sum(spec.values * np.exp(-e ** 2 / 2.0)) * spec.grid.de)
        assert abs(paired - math.exp(-e0 ** 2 / 2.0)) < 1e-10

    def test_zero_signal_maps_to_zero(self):
        tg = TimeGrid(-20.0, 20.0, 1024)
        spec = modulated_forward(SampledSignal(tg, np.zeros(tg.n, complex)), W_SIN)
        assert float(np.max(np.abs(spec.values))) == 0.0

    def test_gaussian_roundtrip(self):
        tg = TimeGrid(-20.0, 20.0, 2048)
        f = gaussian_signal(tg)
        spec = modulated_forward(f, W_SIN)
        rec = modulated_inverse(spec, W_SIN, tg)
        assert rel_l2(rec.values, f.values, tg.dt) < 1e-8

    def test_zero_spectrum_maps_to_zero(self):
        tg = TimeGrid(-10.0, 10.0, 512)
        spec = SpectrumSamples(EnergyGrid(-4.0, 4.0, 257), np.zeros(257, complex))
        sig = modulated_inverse(spec, W_SIN, tg)
        assert float(np.max(np.abs(sig.values))) == 0.0

    def test_single_bin_spike_closed_form(self):
        # one-term Riemann sum: (dE / sqrt(2 pi)) e^{i h(t)} e^{i E0 t}
        tg = TimeGrid(-10.0, 10.0, 512)
        eg = EnergyGrid(-4.0, 4.0, 257)
        vals = np.zeros(257, complex)
        j0 = 190
        vals[j0] = 1.0
        e0 = eg.energies[j0]
        sig = modulated_inverse(SpectrumSamples(eg, vals), W_SIN, tg)
        h_t = np.asarray(W_SIN.h(tg.times), dtype=float)
        expect = (eg.de / SQRT_TWO_PI) * np.exp(1j * h_t) * np.exp(1j * e0 * tg.times)
        npt.assert_allclose(sig.values, expect, rtol=1e-10, atol=1e-13)


class TestModulatedReduction:
    def test_gaussian_chirp(self):
        tg = TimeGrid(-20.0, 20.0, 2048)
        assert modulated_reduction_check(gaussian_signal(tg), W_CHIRP) < 1e-12

    def test_zero_signal(self):
        tg = TimeGrid(-20.0, 20.0, 2048)
        assert modulated_reduction_check(SampledSignal(tg, np.zeros(tg.n, complex)), W_CHIRP) == 0.0

    def test_seeded_noise_property(self):
        tg = TimeGrid(-8.0, 8.0, 1024)
        worst = max(
            modulated_reduction_check(band_limited_noise(tg, e_max=4.0, seed=seed), W_SIN)
            for seed in range(100)
        )
        assert worst < 1e-10


class TestWarpedPair:
    def test_identity_reduces_to_plain_fourier(self):
        tg = TimeGrid(-20.0, 20.0, 2048)
        f = gaussian_signal(tg)
        eg = native_energy_grid(tg)
        spec = warped_forward(f, W_ID, eg, method="direct-quadrature")
        plain = fourier_of_samples(f, eg)
        npt.assert_allclose(spec.values, plain.values, rtol=0, atol=1e-12)

    def test_linear_scale_closed_form(self):
        # h(t) = 2t turns the transform into the plain one evaluated at 2E
        tg = TimeGrid(-20.0, 20.0, 4096)
        f = gaussian_signal(tg)
        spec = warped_forward(f, W_LIN, method="direct-quadrature")
        e = spec.grid.energies
        band = np.abs(e) <= 3.0
        npt.assert_allclose(
            spec.values[band], np.exp(-2.0 * e[band] ** 2), rtol=0, atol=1e-8
        )

    def test_zero_signal(self):
        tg = TimeGrid(-10.0, 10.0, 1024)
        spec = warped_forward(SampledSignal(tg, np.zeros(tg.n, complex)), W_EXP)
        assert float(np.max(np.abs(spec.values))) == 0.0

    def test_identity_inverse_reduces_to_plain(self):
        eg = EnergyGrid(-4.0, 4.0, 257)
        rng = np.random.default_rng(3)
        spec = SpectrumSamples(eg, rng.standard_normal(257) + 1j * rng.standard_normal(257))
        tg = TimeGrid(-10.0, 10.0, 512)
        a = warped_inverse(spec, W_ID, tg, method="direct-quadrature")
        b = inverse_fourier_of_spectrum(spec, tg)
        npt.assert_allclose(a.values, b.values, rtol=0, atol=1e-10)

    def test_zero_spectrum(self):
        spec = SpectrumSamples(EnergyGrid(-4.0, 4.0, 257), np.zeros(257, complex))
        sig = warped_inverse(spec, W_SIN, TimeGrid(-10.0, 10.0, 512))
        assert float(np.max(np.abs(sig.values))) == 0.0

    def test_sin_roundtrip(self):
        tg = TimeGrid(-20.0, 20.0, 4096)
        assert resolution_roundtrip(gaussian_signal(tg), W_SIN, flavor="multiplicative") < 1e-7

    def test_nonmonotone_window_rejected(self):
        tg = TimeGrid(-20.0, 20.0, 2048)
        with pytest.raises(NonMonotoneWarp):
            warped_forward(gaussian_signal(tg), W_CHIRP, method="direct-quadrature")

    def test_unknown_method_rejected(self):
        tg = TimeGrid(-10.0, 10.0, 512)
        with pytest.raises(ValueError):
            warped_forward(gaussian_signal(tg), W_SIN, method="fast-multipole")


class TestWarpedReduction:
    def test_identity_gaussian(self):
        tg = TimeGrid(-20.0, 20.0, 4096)
        assert warped_reduction_check(gaussian_signal(tg), W_ID) < 1e-12

    def test_exp_rate_gaussian(self):
        tg = TimeGrid(-10.0, 10.0, 4096)
        assert warped_reduction_check(gaussian_signal(tg), W_EXP) < 1e-6

    def test_chirp_bump_on_monotone_subinterval(self):
        tg = TimeGrid(-9.0, 9.0, 4096)
        x = tg.times / 6.0
        with np.errstate(divide="ignore", over="ignore"):
            v = np.where(np.abs(x) < 1.0, np.exp(1.0 - 1.0 / np.maximum(1.0 - x * x, 1e-300)), 0.0)
        f = SampledSignal(tg, v.astype(complex))
        assert warped_reduction_check(f, W_CHIRP) < 1e-7


class TestResolutionRoundtrip:
    @pytest.mark.parametrize("flavor", ["additive", "multiplicative"])
    def test_identity(self, flavor):
        tg = TimeGrid(-20.0, 20.0, 4096)
        assert resolution_roundtrip(gaussian_signal(tg), W_ID, flavor=flavor) < 1e-10

    def test_hermite_chirp_additive(self):
        tg = TimeGrid(-20.0, 20.0, 4096)
        assert resolution_roundtrip(hermite_signal(tg, 3), W_CHIRP, flavor="additive") < 1e-8

    def test_unknown_flavor_rejected(self):
        tg = TimeGrid(-10.0, 10.0, 512)
        with pytest.raises(ValueError):
            resolution_roundtrip(gaussian_signal(tg), W_ID, flavor="sesquilinear")


class TestBiorthPairing:
    @pytest.mark.parametrize("warp", [W_ID, W_SIN, W_EXP], ids=["identity", "sin", "exp"])
    def test_coincident_energies_give_window_span(self, warp):
        tg = TimeGrid(-10.0, 10.0, 2001)
        span = float(warp.h(10.0) - warp.h(-10.0))
        val = biorth_pairing(0.7, 0.7, warp, tg)
        assert abs(val - span / (2.0 * math.pi)) < 1e-8 * max(1.0, span)

    @pytest.mark.parametrize("k", [1, 3])
    def test_dirichlet_zeros(self, k):
        tg = TimeGrid(-10.0, 10.0, 2001)
        span = float(W_SIN.h(10.0) - W_SIN.h(-10.0))
        val = biorth_pairing(0.0, 2.0 * math.pi * k / span, W_SIN, tg)
        assert abs(val) < 1e-9

    def test_broadcasts_over_probe_array(self):
        tg = TimeGrid(-10.0, 10.0, 2001)
        probes = np.array([0.0, 0.1, 0.2])
        out = biorth_pairing(probes, 0.0, W_SIN, tg)
        assert out.shape == probes.shape
        singles = [biorth_pairing(float(p), 0.0, W_SIN, tg) for p in probes]
        npt.assert_allclose(out, singles, rtol=1e-12)

    def test_smeared_pairing_recovers_test_function(self):
        # integral of the kernel against a Gaussian reproduces it at the probe
        tg = TimeGrid(-40.0, 40.0, 4001)
        e0 = 0.4
        e_primes = np.linspace(-6.0, 6.0, 1201)
        kernel = biorth_pairing(e_primes, e0, W_ID, tg)
        phi = np.exp(-e_primes ** 2 / 2.0)
        val = complex(np.trapezoid(kernel * phi, e_primes))
        assert abs(val - math.exp(-e0 ** 2 / 2.0)) < 1e-6

    def test_nonmonotone_window_rejected(self):
        with pytest.raises(NonMonotoneWarp):
            biorth_pairing(0.0, 0.0, W_CHIRP, TimeGrid(-20.0, 20.0, 512))


class TestBasisFunction:
    def test_closed_forms(self):
        t = np.linspace(-5.0, 5.0, 201)
        h_t = np.asarray(W_SIN.h(t), dtype=float)
        g_t = np.asarray(W_SIN.g(t), dtype=float)
        e = 1.3
        add = BasisFunction(W_SIN, e, "additive").evaluate(t)
        npt.assert_allclose(add, np.exp(-1j * (e * t + h_t)) / SQRT_TWO_PI, rtol=1e-13)
        mul = BasisFunction(W_SIN, e, "multiplicative").evaluate(t)
        npt.assert_allclose(mul, np.exp(-1j * e * h_t) / SQRT_TWO_PI, rtol=1e-13)
        perp = BasisFunction(W_SIN, e, "multiplicative-perp").evaluate(t)
        npt.assert_allclose(perp, g_t * np.exp(-1j * e * h_t) / SQRT_TWO_PI, rtol=1e-13)

    def test_sample_matches_evaluate(self):
        tg = TimeGrid(-5.0, 5.0, 101)
        bf = BasisFunction(W_EXP, 0.5, "additive")
        npt.assert_array_equal(bf.sample(tg).values, bf.evaluate(tg.times))

    def test_unknown_flavor_rejected(self):
        with pytest.raises(ValueError):
            BasisFunction(W_ID, 1.0, "orthogonal")


class TestEnergyOperators:
    def test_additive_eigenrelation_chirp(self):
        tg = TimeGrid(-8.0, 8.0, 4096)
        for e in (-3.0, 0.5, 3.0):
            bf = BasisFunction(W_CHIRP, e, "additive").sample(tg)
            out = apply_additive_energy_op(bf, W_CHIRP)
            resid = np.abs(out.values - e * bf.values)[8:-8]
            assert float(np.max(resid)) < 1e-6

    def test_multiplicative_eigenrelation_exp(self):
        # window chosen so the peak phase rate E * g stays resolved at n=4096
        tg = TimeGrid(-4.0, 4.0, 4096)
        bf = BasisFunction(W_EXP, 2.0, "multiplicative").sample(tg)
        out = apply_multiplicative_energy_op(bf, W_EXP)
        resid = np.abs(out.values - 2.0 * bf.values)[8:-8]
        assert float(np.max(resid)) < 1e-6

    def test_additive_zero_rate_trivials(self):
        tg = TimeGrid(-8.0, 8.0, 4096)
        zero = zero_rate_warp()
        const = SampledSignal(tg, np.full(tg.n, 2.3, complex))
        out = apply_additive_energy_op(const, zero)
        assert float(np.max(np.abs(out.values[8:-8]))) < 1e-12
        e0 = 2.0
        wave = SampledSignal(tg, np.exp(-1j * e0 * tg.times))
        out = apply_additive_energy_op(wave, zero)
        assert float(np.max(np.abs(out.values - e0 * wave.values)[8:-8])) < 1e-8

    def test_multiplicative_identity_trivials(self):
        tg = TimeGrid(-8.0, 8.0, 4096)
        e0 = 2.0
        wave = SampledSignal(tg, np.exp(-1j * e0 * tg.times))
        out = apply_multiplicative_energy_op(wave, W_ID)
        assert float(np.max(np.abs(out.values - e0 * wave.values)[8:-8])) < 1e-8
        const = SampledSignal(tg, np.full(tg.n, 1.7, complex))
        out = apply_multiplicative_energy_op(const, W_ID)
        assert float(np.max(np.abs(out.values[8:-8]))) < 1e-12

    def test_multiplicative_rejects_nonpositive_rate(self):
        tg = TimeGrid(-20.0, 20.0, 2048)
        with pytest.raises(NonMonotoneWarp):
            apply_multiplicative_energy_op(gaussian_signal(tg), W_CHIRP)

    def test_undersampled_phase_rejected(self):
        tg = TimeGrid(-8.0, 8.0, 64)
        fast = SampledSignal(tg, np.exp(-1j * 20.0 * tg.times))
        with pytest.raises(GridTooCoarse):
            apply_additive_energy_op(fast, W_ID)

    def test_constant_signal_passes_resolution_guard(self):
        # the stencil disagreement guard must not fire on a flat signal whose
        # derivative is pure rounding noise
        tg = TimeGrid(-8.0, 8.0, 256)
        const = SampledSignal(tg, np.full(tg.n, 1.0, complex))
        apply_additive_energy_op(const, W_SIN)


class TestAdjointDefect:
    def _windowed_pair(self, seed):
        tg = TimeGrid(-12.0, 12.0, 2048)
        win = tukey(tg.n, alpha=0.2)
        f = band_limited_noise(tg, e_max=3.0, seed=seed).values * win
        k = band_limited_noise(tg, e_max=3.0, seed=seed + 1000).values * win
        return SampledSignal(tg, f), SampledSignal(tg, k)

    def test_additive_operator_is_self_adjoint(self):
        worst = 0.0
        for seed in range(100):
            f, k = self._windowed_pair(seed)
            worst = max(worst, adjoint_defect("additive", W_SIN, f, k))
        assert worst < 1e-8

    def test_multiplicative_identity_is_self_adjoint(self):
        tg = TimeGrid(-12.0, 12.0, 2048)
        f = SampledSignal(tg, np.exp(-tg.times ** 2).astype(complex))
        k = SampledSignal(tg, (tg.times * np.exp(-tg.times ** 2)).astype(complex))
        assert adjoint_defect("multiplicative", W_ID, f, k) < 1e-8

    def test_multiplicative_exp_defect_matches_by_parts_oracle(self):
        tg = TimeGrid(-12.0, 12.0, 2048)
        t = tg.times
        f = SampledSignal(tg, np.exp(-t ** 2).astype(complex))
        k = SampledSignal(tg, (t * np.exp(-t ** 2)).astype(complex))
        defect = adjoint_defect("multiplicative", W_EXP, f, k)
        assert defect > 1e-3
        # by parts: <Af,k> - <f,Ak> = integral conj(f) k d(1/g)/dt dt,
        # with (1/g)' = -kappa e^{-kappa t} for the exponential rate
        oracle = abs(np.trapezoid(np.exp(-t ** 2) * (t * np.exp(-t ** 2)) * (-0.5 * np.exp(-0.5 * t)), t))
        assert abs(defect - oracle) < 1e-6

    def test_unknown_op_rejected(self):
        f, k = self._windowed_pair(0)
        with pytest.raises(ValueError):
            adjoint_defect("antilinear", W_ID, f, k)

    def test_mismatched_grids_rejected(self):
        tg1 = TimeGrid(-12.0, 12.0, 2048)
        tg2 = TimeGrid(-12.0, 12.0, 1024)
        with pytest.raises(GridMismatch):
            adjoint_defect("additive", W_ID, gaussian_signal(tg1), gaussian_signal(tg2))


class TestGlobalProperties:
    def test_linearity_of_both_forwards(self):
        tg = TimeGrid(-10.0, 10.0, 4096)
        rng = np.random.default_rng(5)
        a = complex(rng.standard_normal(), rng.standard_normal())
        b = complex(rng.standard_normal(), rng.standard_normal())
        s1 = band_limited_noise(tg, e_max=3.0, seed=11)
        s2 = band_limited_noise(tg, e_max=3.0, seed=12)
        comb = SampledSignal(tg, a * s1.values + b * s2.values)
        gap_mod = np.max(np.abs(
            modulated_forward(comb, W_SIN).values
            - a * modulated_forward(s1, W_SIN).values
            - b * modulated_forward(s2, W_SIN).values
        ))
        gap_warp = np.max(np.abs(
            warped_forward(comb, W_EXP).values
            - a * warped_forward(s1, W_EXP).values
            - b * warped_forward(s2, W_EXP).values
        ))
        assert float(gap_mod) < 1e-12
        assert float(gap_warp) < 1e-12

    def test_modulated_forward_is_unitary(self):
        tg = TimeGrid(-20.0, 20.0, 4096)
        f = gaussian_signal(tg)
        spec = modulated_forward(f, W_SIN)
        norm_spec = float(np.sqrt(np.sum(np.abs(spec.values) ** 2) * spec.grid.de))
        assert abs(norm_spec - f.l2_norm()) / f.l2_norm() < 1e-8

    def test_warped_forward_is_not_unitary(self):
        tg = TimeGrid(-10.0, 10.0, 4096)
        f = gaussian_signal(tg)
        spec = warped_forward(f, W_EXP)
        norm_spec = float(np.sqrt(np.sum(np.abs(spec.values) ** 2) * spec.grid.de))
        assert abs(norm_spec - f.l2_norm()) / f.l2_norm() > 1e-3

    def test_default_direct_grid_matches_native_dual_for_identity(self):
        tg = TimeGrid(-8.0, 8.0, 1024)
        assert default_direct_energy_grid(tg, W_ID) == native_energy_grid(tg)

    def test_default_direct_grid_shrinks_with_peak_rate(self):
        tg = TimeGrid(-8.0, 8.0, 1024)
        eg = default_direct_energy_grid(tg, W_EXP)
        g_max = float(np.max(np.asarray(W_EXP.g(tg.times))))
        assert eg.de == pytest.approx(2.0 * math.pi / (tg.n * tg.dt * g_max), rel=1e-12)
