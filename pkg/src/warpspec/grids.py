"""Uniform sample grids and the value containers built on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["TimeGrid", "EnergyGrid", "SampledSignal", "SpectrumSamples"]


@dataclass(frozen=True)
class TimeGrid:
    """Closed uniform grid of n samples on [t_min, t_max]."""

    t_min: float
    t_max: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("TimeGrid needs n >= 2")
        if not self.t_max > self.t_min:
            raise ValueError("TimeGrid needs t_max > t_min")

    @property
    def dt(self) -> float:
        return (self.t_max - self.t_min) / (self.n - 1)

    @property
    def span(self) -> float:
        return self.t_max - self.t_min

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n)


@dataclass(frozen=True)
class EnergyGrid:
    """Closed uniform grid of n spectral labels on [e_min, e_max]."""

    e_min: float
    e_max: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("EnergyGrid needs n >= 2")
        if not self.e_max > self.e_min:
            raise ValueError("EnergyGrid needs e_max > e_min")

    @property
    def de(self) -> float:
        return (self.e_max - self.e_min) / (self.n - 1)

    @property
    def span(self) -> float:
        return self.e_max - self.e_min

    @property
    def energies(self) -> np.ndarray:
        return np.linspace(self.e_min, self.e_max, self.n)


def _as_values(values, n: int) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"values must be 1-d with {n} entries, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples of a signal on a TimeGrid."""

    grid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.values, self.grid.n))

    def with_values(self, values) -> "SampledSignal":
        return SampledSignal(self.grid, values)

    def l2_norm(self) -> float:
        """Riemann L2 norm sqrt(sum |f|^2 dt)."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dt))


@dataclass(frozen=True)
class SpectrumSamples:
    """Complex samples of a spectral-density function on an EnergyGrid."""

    grid: EnergyGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.values, self.grid.n))

    # convenience views mirroring the grid fields
    @property
    def e_min(self) -> float:
        return self.grid.e_min

    @property
    def e_max(self) -> float:
        return self.grid.e_max

    @property
    def n(self) -> int:
        return self.grid.n

    def with_values(self, values) -> "SpectrumSamples":
        return SpectrumSamples(self.grid, values)

    def l2_norm(self) -> float:
        """Riemann L2 norm sqrt(sum |F|^2 dE)."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.de))
