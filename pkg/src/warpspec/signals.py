"""Benchmark signals: analytic pulses and seeded band-limited noise bursts."""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np
from scipy.signal.windows import tukey

from .grids import SampledSignal, TimeGrid

__all__ = [
    "hermite_function",
    "gaussian_signal",
    "hermite_signal",
    "band_limited_noise",
    "acceptance_corpus",
]


def hermite_function(n: int, t) -> np.ndarray:
    """Orthonormal Hermite function psi_n(t) = H_n(t) exp(-t^2/2) / sqrt(2^n n! sqrt(pi)).

    Evaluated by the normalized three-term recurrence (stable for moderate n).
    """
    if n < 0:
        raise ValueError("order must be >= 0")
    t = np.asarray(t, dtype=float)
    psi_prev = np.pi ** -0.25 * np.exp(-0.5 * t * t)
    if n == 0:
        return psi_prev
    psi = math.sqrt(2.0) * t * psi_prev
    for k in range(2, n + 1):
        psi, psi_prev = math.sqrt(2.0 / k) * t * psi - math.sqrt((k - 1.0) / k) * psi_prev, psi
    return psi


def _normalized(sig: SampledSignal) -> SampledSignal:
    nrm = sig.l2_norm()
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero signal")
    return sig.with_values(sig.values / nrm)


def gaussian_signal(
    grid: TimeGrid,
    sigma: float = 1.0,
    mu: float = 0.0,
    carrier: float = 0.0,
    normalize: bool = False,
) -> SampledSignal:
    """Gaussian pulse exp(-(t-mu)^2 / (2 sigma^2)), optionally carrier-modulated."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    t = grid.times
    v = np.exp(-((t - mu) ** 2) / (2.0 * sigma * sigma)).astype(complex)
    if carrier != 0.0:
        v = v * np.exp(1j * carrier * t)
    sig = SampledSignal(grid, v)
    return _normalized(sig) if normalize else sig


def hermite_signal(grid: TimeGrid, n: int, normalize: bool = False) -> SampledSignal:
    sig = SampledSignal(grid, hermite_function(n, grid.times).astype(complex))
    return _normalized(sig) if normalize else sig


def band_limited_noise(
    grid: TimeGrid,
    e_max: float,
    seed: int,
    edge: float = 0.25,
    normalize: bool = True,
) -> SampledSignal:
    """Seeded complex noise with spectrum confined to |E| <= e_max, Tukey-tapered edges.

    The band limit keeps the signal representable on coarser grids; the taper
    removes the wrap-around discontinuity at the window ends.
    """
    if e_max <= 0:
        raise ValueError("e_max must be positive")
    rng = np.random.default_rng(seed)
    n = grid.n
    freqs = 2.0 * np.pi * np.fft.fftfreq(n, d=grid.dt)
    coef = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    coef[np.abs(freqs) > e_max] = 0.0
    v = np.fft.ifft(coef) * tukey(n, alpha=edge)
    sig = SampledSignal(grid, v)
    return _normalized(sig) if normalize else sig


def acceptance_corpus(grid: TimeGrid) -> List[Tuple[str, SampledSignal]]:
    """Ten named unit-norm signals exercising smooth, oscillatory, and rough cases."""
    out: List[Tuple[str, SampledSignal]] = [
        ("gauss-wide", gaussian_signal(grid, sigma=1.0, mu=0.0, normalize=True)),
        ("gauss-offset", gaussian_signal(grid, sigma=0.5, mu=1.5, carrier=2.0, normalize=True)),
    ]
    for k in range(4):
        out.append((f"hermite-{k}", hermite_signal(grid, k, normalize=True)))
    for i, seed in enumerate((101, 102, 103, 104)):
        out.append((f"noise-{seed}", band_limited_noise(grid, e_max=4.0, seed=seed)))
    return out
