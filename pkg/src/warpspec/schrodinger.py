"""Time-dependent Schrodinger evolution for Hamiltonians driven by a time warp.

Three drive kinds share one closed-form recipe (hbar = 1 throughout):

* additive:       Hhat(t) = H + g(t) I      -> psi_E(q) (2 pi)^{-1/2} e^{-i (E t + h(t))}
* multiplicative: Hhat(t) = g(t) H          -> psi_E(q) (2 pi)^{-1/2} e^{-i E h(t)}
* combined:       Hhat(t) = g1(t) H + g2(t) I -> psi_E(q) (2 pi)^{-1/2} e^{-i (E h1(t) + h2(t))}

with psi_E an eigenvector of the static H. The module builds 1D Hamiltonians
(3-point kinetic stencil, Dirichlet walls), solves the dense symmetric
tridiagonal eigenproblem, assembles the separable solutions, and checks them
against an independent Crank-Nicolson propagator plus a PDE residual.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import (
    BadPotential,
    ConvergenceFailure,
    GridMismatch,
    GridTooCoarse,
    LinearSolveFailure,
    NonPositiveG,
    StabilityHeuristicViolated,
)
from .grids import TimeGrid
from .warp import WarpSpec

__all__ = [
    "SpaceGrid",
    "Hamiltonian1D",
    "EigenPair",
    "SpaceTimeField",
    "EvolutionKind",
    "additive",
    "multiplicative",
    "combined",
    "build_hamiltonian",
    "eigensolve",
    "separable_solution",
    "schrodinger_residual",
    "propagate_crank_nicolson",
    "cross_orthogonality",
]

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class SpaceGrid:
    """Closed uniform spatial grid of n samples on [q_min, q_max]."""

    q_min: float
    q_max: float
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("SpaceGrid needs n >= 3")
        if not self.q_max > self.q_min:
            raise ValueError("SpaceGrid needs q_max > q_min")

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n)


@dataclass(frozen=True)
class Hamiltonian1D:
    """H = -(1/2m) d^2/dq^2 + V(q), Dirichlet walls, acting on interior points.

    The discrete operator on the interior is real symmetric tridiagonal:
    diagonal 1/(m dq^2) + V_j, off-diagonal -1/(2 m dq^2). Wall values are
    pinned to zero everywhere in this module.
    """

    grid: SpaceGrid
    potential: np.ndarray = field(repr=False)
    mass: float = 1.0
    boundary: str = "dirichlet"

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.boundary != "dirichlet":
            raise ValueError("only dirichlet boundaries are supported")
        v = np.asarray(self.potential, dtype=float)
        if v.shape != (self.grid.n,):
            raise BadPotential(
                f"potential has shape {v.shape}, grid needs ({self.grid.n},)"
            )
        if not np.all(np.isfinite(v)):
            raise BadPotential("potential contains non-finite samples")
        object.__setattr__(self, "potential", v)

    @property
    def _kin(self) -> float:
        return 1.0 / (2.0 * self.mass * self.grid.dq ** 2)

    def interior_diagonals(self):
        """(diag, off) of the interior tridiagonal operator."""
        diag = 2.0 * self._kin + self.potential[1:-1]
        off = np.full(self.grid.n - 3, -self._kin)
        return diag, off

    def apply(self, values: np.ndarray) -> np.ndarray:
        """H values with Dirichlet walls; values may be (n,) or (n, m)."""
        v = np.asarray(values)
        out = np.zeros_like(v, dtype=complex if np.iscomplexobj(v) else float)
        kin = self._kin
        interior = -kin * (v[2:] + v[:-2] - 2.0 * v[1:-1])
        if v.ndim == 1:
            interior = interior + self.potential[1:-1] * v[1:-1]
        else:
            interior = interior + self.potential[1:-1, None] * v[1:-1]
        out[1:-1] = interior
        return out

    def norm_bound(self) -> float:
        """Cheap upper estimate of ||H||_2: kinetic band edge plus |V| peak."""
        return 2.0 / (self.mass * self.grid.dq ** 2) + float(np.max(np.abs(self.potential)))


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalue and real eigenvector normalized to sum(psi^2) dq = 1.

    Carries the SpaceGrid it was solved on so downstream constructions need
    no separate grid argument.
    """

    E: float
    psi: np.ndarray = field(repr=False)
    grid: SpaceGrid = None


@dataclass(frozen=True)
class SpaceTimeField:
    """Complex field psi(q, t) sampled as an (n_q x n_t) matrix."""

    sgrid: SpaceGrid
    tgrid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.sgrid.n, self.tgrid.n):
            raise ValueError(
                f"field shape {v.shape} does not match (n_q, n_t) = "
                f"({self.sgrid.n}, {self.tgrid.n})"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite entries")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class EvolutionKind:
    """Drive kind plus the warp(s) it is driven by.

    name "additive" and "multiplicative" carry one warp; "combined" carries
    (w1, w2) for Hhat(t) = g1(t) H + g2(t) I. Use the additive()/
    multiplicative()/combined() factories rather than the constructor.
    """

    name: str
    warps: tuple

    def __post_init__(self):
        expected = {"additive": 1, "multiplicative": 1, "combined": 2}
        if self.name not in expected:
            raise ValueError(f"unknown kind {self.name!r}")
        if len(self.warps) != expected[self.name]:
            raise ValueError(
                f"kind {self.name!r} needs {expected[self.name]} warp(s), got {len(self.warps)}"
            )

    def scale_shift(self, t):
        """Hhat(t) = scale(t) * H + shift(t) * I, both real arrays over t."""
        t = np.asarray(t, dtype=float)
        one = np.ones_like(t)
        if self.name == "additive":
            return one, np.asarray(self.warps[0].g(t), dtype=float)
        if self.name == "multiplicative":
            return np.asarray(self.warps[0].g(t), dtype=float), np.zeros_like(t)
        return (
            np.asarray(self.warps[0].g(t), dtype=float),
            np.asarray(self.warps[1].g(t), dtype=float),
        )

    def phase(self, E: float, t):
        """Accumulated phase P(t) with psi(q,t) = psi_E(q) e^{-i P(t)} / sqrt(2 pi)."""
        t = np.asarray(t, dtype=float)
        if self.name == "additive":
            return E * t + np.asarray(self.warps[0].h(t), dtype=float)
        if self.name == "multiplicative":
            return E * np.asarray(self.warps[0].h(t), dtype=float)
        return E * np.asarray(self.warps[0].h(t), dtype=float) + np.asarray(
            self.warps[1].h(t), dtype=float
        )


def additive(w: WarpSpec) -> EvolutionKind:
    """Hhat(t) = H + g(t) I."""
    return EvolutionKind("additive", (w,))


def multiplicative(w: WarpSpec) -> EvolutionKind:
    """Hhat(t) = g(t) H."""
    return EvolutionKind("multiplicative", (w,))


def combined(w1: WarpSpec, w2: WarpSpec) -> EvolutionKind:
    """Hhat(t) = g1(t) H + g2(t) I."""
    return EvolutionKind("combined", (w1, w2))


def build_hamiltonian(grid: SpaceGrid, potential, mass: float = 1.0) -> Hamiltonian1D:
    """Assemble H from a potential spec.

    ``potential`` is either the string "box" or a dict with key "kind":
    {"kind": "harmonic", "k": 1.0}, {"kind": "box"},
    {"kind": "gaussian-well", "v0": 5.0, "sigma": 1.0},
    {"kind": "custom-samples", "values": [...]} (length grid.n).
    """
    if isinstance(potential, str):
        spec = {"kind": potential}
    elif isinstance(potential, dict):
        spec = dict(potential)
    else:
        raise BadPotential(f"potential spec must be a string or dict, got {type(potential).__name__}")
    try:
        kind = spec.pop("kind")
    except KeyError:
        raise BadPotential("potential spec needs a 'kind' entry") from None
    q = grid.points
    if kind == "harmonic":
        k = float(spec.pop("k", 1.0))
        v = 0.5 * k * q ** 2
    elif kind == "box":
        v = np.zeros(grid.n)
    elif kind == "gaussian-well":
        v0 = float(spec.pop("v0", 1.0))
        sigma = float(spec.pop("sigma", 1.0))
        if sigma <= 0:
            raise BadPotential("gaussian-well needs sigma > 0")
        v = -v0 * np.exp(-(q ** 2) / (2.0 * sigma * sigma))
    elif kind == "custom-samples":
        v = np.asarray(spec.pop("values", ()), dtype=float)
    else:
        raise BadPotential(f"unknown potential kind {kind!r}")
    if spec:
        raise BadPotential(f"unexpected potential parameters {sorted(spec)}")
    return Hamiltonian1D(grid, v, mass)


def eigensolve(H: Hamiltonian1D, k: int) -> list:
    """k lowest eigenpairs of the interior tridiagonal operator, ascending.

    Eigenvectors are embedded back onto the full grid with zero walls,
    normalized to sum(psi^2) dq = 1, and sign-fixed (largest-magnitude
    component positive) for determinism.
    """
    n_int = H.grid.n - 2
    if not 1 <= k <= n_int:
        raise ValueError(f"k must lie in [1, {n_int}]")
    diag, off = H.interior_diagonals()
    try:
        vals, vecs = scipy.linalg.eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise ConvergenceFailure(f"tridiagonal eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(vals)) or not np.all(np.isfinite(vecs)):
        raise ConvergenceFailure("eigensolver returned non-finite output")
    out = []
    dq = H.grid.dq
    for i in range(k):
        psi = np.zeros(H.grid.n)
        vec = vecs[:, i]
        vec = vec / math.sqrt(float(np.sum(vec ** 2)) * dq)
        if vec[int(np.argmax(np.abs(vec)))] < 0:
            vec = -vec
        psi[1:-1] = vec
        out.append(EigenPair(float(vals[i]), psi, H.grid))
    return out


def separable_solution(ep: EigenPair, kind: EvolutionKind, tgrid: TimeGrid) -> SpaceTimeField:
    """Closed-form solution psi_E(q) e^{-i P(t)} / sqrt(2 pi) on the eigenpair's grid.

    P(t) is the kind's accumulated phase (see EvolutionKind.phase).
    """
    if ep.grid is None or ep.grid.n != ep.psi.size:
        raise GridMismatch("eigenpair carries no grid matching its vector")
    phase = kind.phase(ep.E, tgrid.times)
    vals = np.outer(ep.psi.astype(complex), np.exp(-1j * phase) / _SQRT_TWO_PI)
    return SpaceTimeField(ep.grid, tgrid, vals)


def _time_d4(values: np.ndarray, dt: float) -> np.ndarray:
    """Interior 4th-order d/dt along axis 1; output has n_t - 4 columns."""
    return (-values[:, 4:] + 8.0 * values[:, 3:-1] - 8.0 * values[:, 1:-3] + values[:, :-4]) / (12.0 * dt)


def schrodinger_residual(field: SpaceTimeField, H: Hamiltonian1D, kind: EvolutionKind) -> float:
    """max over interior t of ||i d_t psi - Hhat(t) psi||_2 / ||psi||_2.

    Time differencing is 4th-order central on interior columns (the first and
    last two are skipped). A 2nd-order cross-check guards against undersampled
    phases.
    """
    if field.sgrid.n != H.grid.n:
        raise GridMismatch("field and Hamiltonian use different space grids")
    if field.tgrid.n < 5:
        raise GridTooCoarse("residual needs at least 5 time samples")
    dt = field.tgrid.dt
    v = field.values
    hi = _time_d4(v, dt)
    lo = (v[:, 3:-1] - v[:, 1:-3]) / (2.0 * dt)
    scale = float(np.max(np.abs(hi)))
    noise = 64.0 * np.finfo(float).eps * float(np.max(np.abs(v))) / dt
    if scale > noise and float(np.max(np.abs(hi - lo))) / scale > 0.1:
        raise GridTooCoarse("time stencils disagree by more than 10%; refine dt")
    t_int = field.tgrid.times[2:-2]
    s, c = kind.scale_shift(t_int)
    hpsi = H.apply(v[:, 2:-2]) * s[None, :] + v[:, 2:-2] * c[None, :]
    res = 1j * hi - hpsi
    num = np.sqrt(np.sum(np.abs(res) ** 2, axis=0))
    den = np.sqrt(np.sum(np.abs(v[:, 2:-2]) ** 2, axis=0))
    if np.any(den == 0.0):
        raise ValueError("field vanishes at some interior time")
    return float(np.max(num / den))


def propagate_crank_nicolson(
    H: Hamiltonian1D,
    kind: EvolutionKind,
    psi0: Sequence,
    tgrid: TimeGrid,
    store_every: int = 1,
) -> SpaceTimeField:
    """Trapezoidal (Cayley) stepping with the midpoint Hamiltonian Hhat(t + dt/2).

    Each step solves (I + i dt/2 Hhat) psi' = (I - i dt/2 Hhat) psi on the
    interior; walls stay pinned at zero. Norm is conserved to rounding for
    every kind (Hhat(t) is real symmetric at fixed t). ``store_every``
    decimates the stored columns ((n_t - 1) must be divisible by it); the
    stepping always uses tgrid.dt.

    Warns StabilityHeuristicViolated when dt * max_t ||Hhat(t)|| > 0.5: the
    scheme stays stable but the phase per step is too coarse for accuracy.
    """
    psi = np.asarray(psi0, dtype=complex).copy()
    if psi.shape != (H.grid.n,):
        raise ValueError(f"psi0 has shape {psi.shape}, expected ({H.grid.n},)")
    nrm = float(np.sqrt(np.sum(np.abs(psi) ** 2)))
    if not nrm > 0:
        raise ValueError("psi0 must be nonzero")
    if store_every < 1 or (tgrid.n - 1) % store_every != 0:
        raise ValueError("store_every must divide the step count n_t - 1")

    t_probe = np.linspace(tgrid.t_min, tgrid.t_max, 4 * tgrid.n - 3)
    s_probe, c_probe = kind.scale_shift(t_probe)
    if kind.name in ("multiplicative", "combined") and not np.all(s_probe > 0.0):
        raise NonPositiveG(
            f"{kind.name} evolution needs g > 0 on the window so Hhat stays bounded below"
        )
    h_norm = float(np.max(np.abs(s_probe))) * H.norm_bound() + float(np.max(np.abs(c_probe)))
    if tgrid.dt * h_norm > 0.5:
        warnings.warn(
            f"dt * max||Hhat|| = {tgrid.dt * h_norm:.3g} > 0.5; phase per step is coarse",
            StabilityHeuristicViolated,
            stacklevel=2,
        )

    diag, off = H.interior_diagonals()
    n_int = diag.size
    dt = tgrid.dt
    times = tgrid.times
    n_stored = (tgrid.n - 1) // store_every + 1
    out = np.zeros((H.grid.n, n_stored), dtype=complex)
    out[:, 0] = psi
    inner = psi[1:-1].copy()
    ab = np.zeros((3, n_int), dtype=complex)
    col = 1
    for j in range(tgrid.n - 1):
        t_mid = times[j] + 0.5 * dt
        s, c = kind.scale_shift(np.asarray([t_mid]))
        s = float(s[0])
        c = float(c[0])
        half = 0.5j * dt
        d = half * (s * diag + c)
        o = half * s * off
        # rhs = (I - i dt/2 Hhat) psi
        rhs = (1.0 - d) * inner
        rhs[:-1] -= o * inner[1:]
        rhs[1:] -= o * inner[:-1]
        ab[0, 1:] = o
        ab[1, :] = 1.0 + d
        ab[2, :-1] = o
        try:
            inner = scipy.linalg.solve_banded((1, 1), ab, rhs)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as exc:
            raise LinearSolveFailure(f"banded solve failed at step {j}: {exc}") from exc
        if not np.all(np.isfinite(inner)):
            raise LinearSolveFailure(f"non-finite state after step {j}")
        if (j + 1) % store_every == 0:
            out[1:-1, col] = inner
            col += 1
    stored_grid = tgrid if store_every == 1 else TimeGrid(tgrid.t_min, tgrid.t_max, n_stored)
    return SpaceTimeField(H.grid, stored_grid, out)


def cross_orthogonality(field_a: SpaceTimeField, field_b: SpaceTimeField, t_index: int) -> float:
    """|<psi_A(., t), psi_B(., t)> dq| at one stored time column."""
    if field_a.sgrid != field_b.sgrid:
        raise GridMismatch("fields live on different space grids")
    a = field_a.values[:, t_index]
    b = field_b.values[:, t_index]
    return abs(complex(np.sum(np.conj(a) * b) * field_a.sgrid.dq))
