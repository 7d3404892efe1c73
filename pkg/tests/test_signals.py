"""Signal factories: Hermite functions, pulses, seeded band-limited noise."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from warpspec.grids import TimeGrid
from warpspec.signals import (
    acceptance_corpus,
    band_limited_noise,
    gaussian_signal,
    hermite_function,
    hermite_signal,
)
from warpspec.transforms import fourier_of_samples

GRID = TimeGrid(-12.0, 12.0, 4001)


def test_hermite_closed_forms():
    t = np.linspace(-5.0, 5.0, 301)
    w = np.exp(-0.5 * t * t) * math.pi ** -0.25
    npt.assert_allclose(hermite_function(0, t), w, rtol=1e-13)
    npt.assert_allclose(hermite_function(1, t), math.sqrt(2.0) * t * w, rtol=0, atol=1e-13)
    npt.assert_allclose(
        hermite_function(2, t), (2.0 * t * t - 1.0) / math.sqrt(2.0) * w, rtol=0, atol=1e-13
    )
    npt.assert_allclose(
        hermite_function(3, t),
        (2.0 * t ** 3 - 3.0 * t) / math.sqrt(3.0) * w,
        rtol=0,
        atol=1e-13,
    )


@pytest.mark.parametrize("m", range(6))
@pytest.mark.parametrize("n", range(6))
def test_hermite_orthonormality(n, m):
    t = GRID.times
    overlap = float(np.trapezoid(hermite_function(n, t) * hermite_function(m, t), t))
    assert overlap == pytest.approx(1.0 if n == m else 0.0, abs=1e-10)


def test_hermite_negative_order_rejected():
    with pytest.raises(ValueError):
        hermite_function(-1, 0.0)


def test_gaussian_signal_shape_and_carrier():
    sig = gaussian_signal(GRID, sigma=0.5, mu=1.5, carrier=2.0)
    t = GRID.times
    expect = np.exp(-((t - 1.5) ** 2) / 0.5) * np.exp(2j * t)
    npt.assert_allclose(sig.values, expect, rtol=0, atol=1e-14)


def test_gaussian_signal_normalization():
    sig = gaussian_signal(GRID, sigma=0.7, normalize=True)
    assert sig.l2_norm() == pytest.approx(1.0, abs=1e-12)


def test_gaussian_signal_rejects_bad_sigma():
    with pytest.raises(ValueError):
        gaussian_signal(GRID, sigma=0.0)


def test_hermite_signal_matches_function():
    sig = hermite_signal(GRID, 2)
    npt.assert_allclose(sig.values, hermite_function(2, GRID.times).astype(complex))


def test_noise_seed_reproducible():
    a = band_limited_noise(GRID, e_max=4.0, seed=42)
    b = band_limited_noise(GRID, e_max=4.0, seed=42)
    npt.assert_array_equal(a.values, b.values)
    c = band_limited_noise(GRID, e_max=4.0, seed=43)
    assert float(np.max(np.abs(a.values - c.values))) > 1e-3


def test_noise_is_unit_norm():
    sig = band_limited_noise(GRID, e_max=4.0, seed=7)
    assert sig.l2_norm() == pytest.approx(1.0, abs=1e-12)


def test_noise_band_containment():
    # the Tukey taper smears the hard cutoff, so measure out-of-band energy
    # beyond twice the nominal band edge
    sig = band_limited_noise(GRID, e_max=3.0, seed=11)
    spec = fourier_of_samples(sig)
    e = spec.grid.energies
    total = float(np.sum(np.abs(spec.values) ** 2))
    outside = float(np.sum(np.abs(spec.values[np.abs(e) > 6.0]) ** 2))
    assert outside / total < 1e-5


def test_noise_rejects_bad_band():
    with pytest.raises(ValueError):
        band_limited_noise(GRID, e_max=0.0, seed=1)


def test_corpus_has_ten_unit_norm_entries():
    corpus = acceptance_corpus(GRID)
    assert len(corpus) == 10
    names = [name for name, _ in corpus]
    assert len(set(names)) == 10
    for name, sig in corpus:
        assert sig.grid == GRID
        assert sig.l2_norm() == pytest.approx(1.0, abs=1e-10), name
